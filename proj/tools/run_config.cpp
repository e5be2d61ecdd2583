// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include "run_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace romscat::cli {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"grid", {"nx", "nz", "h"}},
    {"medium", {"phantom", "file", "c0", "contrast", "collar", "box"}},
    {"array", {"m", "pitch", "row"}},
    {"pulse", {"wavelength"}},
    {"time", {"tau", "samples_per_period", "n", "substeps"}},
    {"noise", {"level", "seed"}},
    {"rom", {"rel_tol"}},
    {"basis", {"kind", "spacing", "z_first", "z_last", "x_first", "x_last", "psf_tol"}},
    {"inversion", {"method", "max_iter", "svd_cutoff", "fd_step"}},
    {"output", {"dir", "csv"}},
};

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  template <class T>
  T required(const std::string& key) const {
    auto v = tree_.get_optional<std::string>(key);
    if (!v) throw ConfigError("missing config key '" + key + "'");
    return convert<T>(key, *v);
  }

  template <class T>
  T optional(const std::string& key, T fallback) const {
    auto v = tree_.get_optional<std::string>(key);
    return v ? convert<T>(key, *v) : fallback;
  }

  template <class T>
  std::optional<T> maybe(const std::string& key) const {
    auto v = tree_.get_optional<std::string>(key);
    if (!v || *v == "auto") return std::nullopt;
    return convert<T>(key, *v);
  }

 private:
  template <class T>
  static T convert(const std::string& key, const std::string& raw) {
    if constexpr (std::is_same_v<T, std::string>) {
      return raw;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (raw == "true" || raw == "1" || raw == "yes") return true;
      if (raw == "false" || raw == "0" || raw == "no") return false;
      throw ConfigError("config key '" + key + "': expected true or false, got '" + raw + "'");
    } else {
      std::istringstream is(raw);
      T value{};
      is >> value;
      if (is.fail() || !(is >> std::ws).eof()) {
        throw ConfigError("config key '" + key + "': cannot parse '" + raw + "'");
      }
      return value;
    }
  }

  const pt::ptree& tree_;
};

std::vector<BoxSpec> parse_boxes(const std::string& raw) {
  std::vector<BoxSpec> out;
  std::istringstream all(raw);
  std::string item;
  while (std::getline(all, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream is(item);
    BoxSpec b;
    if (!(is >> b.x0 >> b.x1 >> b.z0 >> b.z1 >> b.value) || !(is >> std::ws).eof()) {
      throw ConfigError("config key 'medium.box': expected 'x0 x1 z0 z1 value' entries separated by ';', got '" +
                        item + "'");
    }
    out.push_back(b);
  }
  return out;
}

void positive(double v, const std::string& key) {
  if (!(v > 0.0)) throw ConfigError("config key '" + key + "' must be positive");
}

std::vector<double> steps(double first, double last, double spacing) {
  std::vector<double> out;
  for (double v = first; v <= last + 1e-9 * spacing; v += spacing) out.push_back(v);
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  for (const auto& [section, body] : tree) {
    auto it = kKnownKeys.find(section);
    if (it == kKnownKeys.end()) throw ConfigError("unknown config section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError("unknown config key '" + section + "." + key + "'");
    }
  }

  Reader r(tree);
  RunConfig c;
  c.text = text;
  c.nx = r.optional<int>("grid.nx", 1);
  c.nz = r.required<int>("grid.nz");
  c.h = r.optional<double>("grid.h", 1.0);
  c.phantom = r.optional<std::string>("medium.phantom", "homogeneous");
  c.medium_file = r.optional<std::string>("medium.file", "");
  c.c0 = r.optional<double>("medium.c0", 1.0);
  c.contrast = r.optional<double>("medium.contrast", 0.2);
  c.collar_wavelengths = r.optional<double>("medium.collar", 1.0);
  c.boxes = parse_boxes(r.optional<std::string>("medium.box", ""));
  c.m = r.required<int>("array.m");
  c.pitch = r.optional<int>("array.pitch", 1);
  c.row = r.optional<int>("array.row", 1);
  c.wavelength = r.required<double>("pulse.wavelength");
  c.tau = r.maybe<double>("time.tau");
  c.samples_per_period = r.optional<double>("time.samples_per_period", 2.5);
  c.n = r.required<int>("time.n");
  c.substeps = r.optional<int>("time.substeps", 0);
  c.noise_level = r.optional<double>("noise.level", 0.0);
  c.seed = r.optional<std::uint64_t>("noise.seed", 1);
  c.rom_rel_tol = r.optional<double>("rom.rel_tol", 0.0);
  c.basis_kind = r.optional<std::string>("basis.kind", "hats");
  c.basis_spacing = r.maybe<double>("basis.spacing");
  c.z_first = r.maybe<double>("basis.z_first");
  c.z_last = r.maybe<double>("basis.z_last");
  c.x_first = r.maybe<double>("basis.x_first");
  c.x_last = r.maybe<double>("basis.x_last");
  c.psf_tol = r.optional<double>("basis.psf_tol", 0.02);
  c.method = r.optional<std::string>("inversion.method", "rom-gn");
  c.max_iter = r.optional<int>("inversion.max_iter", 5);
  c.svd_cutoff = r.optional<double>("inversion.svd_cutoff", 0.0);
  c.fd_step = r.optional<double>("inversion.fd_step", 1e-4);
  c.output_dir = r.optional<std::string>("output.dir", ".");
  c.csv = r.optional<bool>("output.csv", true);

  if (c.nx < 1) throw ConfigError("config key 'grid.nx' must be at least 1");
  if (c.nz < 2) throw ConfigError("config key 'grid.nz' must be at least 2");
  positive(c.h, "grid.h");
  positive(c.c0, "medium.c0");
  positive(c.wavelength, "pulse.wavelength");
  positive(c.samples_per_period, "time.samples_per_period");
  if (c.tau) positive(*c.tau, "time.tau");
  if (c.m < 1) throw ConfigError("config key 'array.m' must be at least 1");
  if (c.pitch < 1) throw ConfigError("config key 'array.pitch' must be at least 1");
  if (c.n < 1) throw ConfigError("config key 'time.n' must be at least 1");
  if (c.noise_level < 0.0) throw ConfigError("config key 'noise.level' must be non-negative");
  if (c.rom_rel_tol < 0.0) throw ConfigError("config key 'rom.rel_tol' must be non-negative");
  if (c.method != "rom-gn" && c.method != "ls-rtm") {
    throw ConfigError("config key 'inversion.method' must be rom-gn or ls-rtm");
  }
  if (c.basis_kind != "hats" && c.basis_kind != "regular" && c.basis_kind != "psf") {
    throw ConfigError("config key 'basis.kind' must be hats, regular or psf");
  }
  if (c.phantom == "file" && c.medium_file.empty()) throw ConfigError("missing config key 'medium.file'");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

Field RunConfig::speed() const {
  const Grid2D g = grid();
  return phantom == "fractures" ? fractures_speed(g, c0) : Field(g, c0);
}

ForwardSetup RunConfig::forward_setup() const {
  ForwardSetup s;
  s.c = speed();
  s.array = ArrayGeometry::linear(grid(), m, pitch, row);
  s.pulse = pulse();
  s.tau = tau ? *tau : s.pulse.tau_for(samples_per_period);
  s.nsteps = 2 * n;
  s.substeps = substeps;
  return s;
}

Field RunConfig::reflectivity() const {
  const Grid2D g = grid();
  Field q(g, 0.0);
  if (phantom == "file") {
    q = load_field(medium_file);
    if (!(q.grid() == g)) throw ConfigError("medium.file grid does not match [grid]");
  } else if (phantom == "homogeneous" || phantom == "boxes" || phantom == "fractures") {
    q = make_phantom(phantom, g, g.z(row) + collar(), contrast);
  } else if (phantom != "custom") {
    throw ConfigError("config key 'medium.phantom' must be homogeneous, boxes, fractures, custom or file");
  }
  for (const BoxSpec& b : boxes) add_box(q, b.x0, b.x1, b.z0, b.z1, b.value);
  const ArrayGeometry array = ArrayGeometry::linear(g, m, pitch, row);
  if (!collar_is_clear(q, array, collar())) {
    throw ConfigError("reflectivity is nonzero inside the sensor collar (medium.collar = " +
                      std::to_string(collar_wavelengths) + " wavelengths)");
  }
  return q;
}

SearchBasis RunConfig::basis(const ForwardModel& model, MeshReport* report) const {
  const Grid2D g = grid();
  const double spacing = basis_spacing ? *basis_spacing : model.tau() * c0;
  positive(spacing, "basis.spacing");
  const double zf = z_first ? *z_first : g.z(row) + collar();
  const double zl = z_last ? *z_last : g.z(g.nz - 1) - wavelength;
  if (g.dim() == 1) {
    if (basis_kind != "hats") throw ConfigError("config key 'basis.kind' must be hats on a 1D grid");
    return SearchBasis::range_hats(g, range_line_depths(zf, zl, spacing));
  }
  const double xf = x_first ? *x_first : g.x(0) + wavelength;
  const double xl = x_last ? *x_last : g.x(g.nx - 1) - wavelength;
  const std::vector<double> ranges = range_line_depths(zf, zl, spacing);
  const std::vector<double> xs = steps(xf, xl, spacing);
  if (ranges.empty() || xs.empty()) throw ConfigError("[basis] extent holds no nodes");
  if (basis_kind == "regular") {
    return SearchBasis::from_rows(g, ranges, std::vector<std::vector<double>>(ranges.size(), xs), spacing);
  }
  if (basis_kind != "psf") throw ConfigError("config key 'basis.kind' must be regular or psf on a 2D grid");
  const ReferenceProjection ref = reference_projection(model, rom_rel_tol);
  std::vector<RangeLinePsf> lines(ranges.size());
  const int per_line = static_cast<int>(xs.size());
  std::vector<PsfField> fields(ranges.size() * xs.size());
  parallel_for(static_cast<int>(fields.size()), [&](int k) {
    fields[static_cast<std::size_t>(k)] =
        point_spread(ref, model, xs[static_cast<std::size_t>(k % per_line)],
                     ranges[static_cast<std::size_t>(k / per_line)], 1.0, rom_rel_tol);
  });
  for (std::size_t r = 0; r < ranges.size(); ++r) {
    lines[r].z = ranges[r];
    lines[r].xs = xs;
    for (std::size_t k = 0; k < xs.size(); ++k) lines[r].psf.push_back(std::move(fields[r * xs.size() + k]));
  }
  return partition_of_unity_mesh(g, lines, psf_tol, spacing, report);
}

}  // namespace romscat::cli
