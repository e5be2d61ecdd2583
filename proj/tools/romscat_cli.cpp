// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

// romscat command line tool. Exit codes: 0 success, 1 invariant violation or
// numerical failure, 2 usage or configuration error, 3 IO or format error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "manifest.hpp"
#include "romscat/romscat.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace romscat;
using namespace romscat::cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

// Tolerances of the ROM invariant checks.
constexpr double kTolDataFit = 1e-8;
constexpr double kTolOffTridiagonal = 1e-8;
constexpr double kTolSpectrum = 1e-8;
constexpr double kTolFactor = 1e-8;
constexpr double kTolDual = 1e-8;
constexpr double kTolLanczos = 1e-8;
constexpr double kWaveFactorFloor = 1e-13;

struct Options {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string data;
  std::string ref;
  std::string basis;
  std::string truth;
  std::string method;
  std::vector<std::string> centers;
  double rel_tol = 0.0;
  bool raw = false;
  bool csv = false;
};

void log(const std::string& msg) { std::cerr << "romscat: " << msg << '\n'; }

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

RunConfig config_from(const Options& o) {
  if (o.config.empty()) throw ConfigError("missing --config");
  RunConfig c = load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  return c;
}

std::string prepare_dir(const Options& o, const RunConfig* c) {
  const std::string dir = !o.out_dir.empty() ? o.out_dir : (c ? c->output_dir : ".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw FormatError("cannot create output directory '" + dir + "': " + ec.message());
  return dir;
}

std::string path_in(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

Manifest manifest_for(const std::string& command, const Options& o, const RunConfig* c, int argc, char** argv) {
  Manifest m;
  m.command = command;
  m.config_path = o.config;
  if (c) {
    m.config_text = c->text;
  } else {
    for (int i = 1; i < argc; ++i) m.config_text += std::string(argv[i]) + '\n';
  }
  if (c) {
    m.parameters["seed"] = std::to_string(c->seed);
    m.tolerances["rom_rel_tol"] = c->rom_rel_tol;
    m.tolerances["svd_cutoff"] = c->svd_cutoff;
    m.tolerances["fd_step"] = c->fd_step;
    m.tolerances["partition_tol"] = c->psf_tol;
  }
  m.tolerances["wave_factor_floor"] = kWaveFactorFloor;
  return m;
}

void save_field_outputs(const std::string& dir, const std::string& stem, const Field& f, bool csv, Manifest& m) {
  save_field(path_in(dir, stem + ".bin"), f);
  write_pgm(path_in(dir, stem + ".pgm"), f);
  m.outputs.push_back(stem + ".bin");
  m.outputs.push_back(stem + ".pgm");
  if (csv) {
    write_field_csv(path_in(dir, stem + ".csv"), f);
    m.outputs.push_back(stem + ".csv");
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot write '" + path + "'");
  os << text;
}

void check_data_matches(const DataCube& d, const ForwardModel& model) {
  if (d.m != model.m() || d.nsteps != model.nsteps()) {
    throw ConfigError(fmt("data file has m = %d, nsteps = %d but the config gives array.m = %d, 2 time.n = %d", d.m,
                          d.nsteps, model.m(), model.nsteps()));
  }
  if (std::abs(d.tau - model.tau()) > 1e-12 * model.tau()) {
    throw ConfigError(fmt("data file has tau = %.17g but the config gives %.17g", d.tau, model.tau()));
  }
}

DataCube simulate_from(const RunConfig& c, const ForwardModel& model, const Field& q) {
  DataCube d = model.data(q);
  return c.noise_level > 0.0 ? add_noise(d, c.noise_level, c.seed) : d;
}

// ROM invariant report; returns true when every applicable check passes.
bool rom_report(const Rom& rom, const DataCube& data, std::string& text) {
  const RomInvariants inv = check_rom(rom, data);
  const bool clipped = rom.regularization.clipped > 0;
  std::ostringstream os;
  os << std::setprecision(6);
  os << "[rom]\nn = " << rom.n << "\nm = " << rom.m << "\ntau = " << rom.tau
     << "\nmass_condition = " << rom.regularization.condition << "\nclipped_eigenvalues = " << rom.regularization.clipped
     << "\nwave_factor_clipped = " << rom.wave_factor_clipped << "\n[invariants]\n";
  bool ok = true;
  auto line = [&](const char* name, double value, double bound, bool applies) {
    const bool pass = !applies || value <= bound;
    ok = ok && pass;
    os << name << " = " << fmt("%.3e", value);
    if (applies) {
      os << fmt(" (<= %.0e) ", bound) << (pass ? "ok" : "VIOLATED");
    } else {
      os << " (not checked: mass matrix was clipped)";
    }
    os << '\n';
  };
  line("data_fit", inv.data_fit, kTolDataFit, !clipped);
  line("off_tridiagonal", inv.off_tridiagonal, kTolOffTridiagonal, true);
  line("spectrum_excess", std::max(0.0, std::max(-1.0 - inv.spectrum_min, inv.spectrum_max - 1.0)), kTolSpectrum,
       true);
  const bool pd = inv.min_eig_I_minus_P > 0.0;
  ok = ok && pd;
  os << "min_eig_I_minus_P = " << fmt("%.3e", inv.min_eig_I_minus_P) << " (> 0) " << (pd ? "ok" : "VIOLATED") << '\n';
  line("factor_residual", inv.factor_residual, kTolFactor, true);
  line("dual_lower", inv.dual_lower, kTolDual, true);
  line("lanczos_residual", inv.lanczos_residual, kTolLanczos, true);
  os << "status = " << (ok ? "ok" : "violated") << '\n';
  text = os.str();
  return ok;
}

double relative_error(const Field& est, const Field& truth) {
  double e = 0.0, n = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    e += (est[i] - truth[i]) * (est[i] - truth[i]);
    n += truth[i] * truth[i];
  }
  return n > 0.0 ? std::sqrt(e / n) : std::sqrt(e);
}

GaussNewtonOptions gn_options(const RunConfig& c) {
  GaussNewtonOptions g;
  g.max_iter = c.max_iter;
  g.svd_rel_cutoff = c.svd_cutoff;
  g.fd_step = c.fd_step;
  return g;
}

// Runs the selected method and writes the estimate and its report.
Field run_inversion(const RunConfig& c, const std::string& method, bool raw, const ForwardModel& model,
                    const DataCube& data, const SearchBasis& basis, const std::string& dir, Manifest& m,
                    std::string& report) {
  GaussNewtonResult r;
  if (method == "rom-gn") {
    r = gauss_newton_rom(model, data, basis, gn_options(c), c.rom_rel_tol);
  } else if (method == "ls-rtm") {
    GaussNewtonOptions g = gn_options(c);
    g.max_iter = 1;
    if (raw) {
      r = ls_rtm(model, data, basis, g);
    } else {
      const DataCube d0 = model.data(Field(model.grid(), 0.0));
      const DataCube bd = born_data(BornInputs::from_roms(d0, rom_build(d0, c.rom_rel_tol), rom_build(data, c.rom_rel_tol)));
      r = ls_rtm(model, bd, basis, g);
    }
  } else {
    throw ConfigError("--method must be rom-gn or ls-rtm");
  }
  m.parameters["method"] = method;
  m.parameters["unknowns"] = std::to_string(basis.size());
  const Field est = basis.evaluate(std::span<const double>(r.coeffs.data(), static_cast<std::size_t>(r.coeffs.size())));
  save_field_outputs(dir, "q_est", est, c.csv, m);
  report = "method = " + method + "\nunknowns = " + std::to_string(basis.size()) + "\n" + r.report.to_text();
  write_text(path_in(dir, "inversion_report.txt"), report);
  m.outputs.push_back("inversion_report.txt");
  return est;
}

int cmd_simulate(const Options& o, int argc, char** argv) {
  const RunConfig c = config_from(o);
  const std::string dir = prepare_dir(o, &c);
  Manifest m = manifest_for("simulate", o, &c, argc, argv);
  const ForwardModel model(c.forward_setup());
  const Field q = c.reflectivity();
  const DataCube d = simulate_from(c, model, q);
  save_data(path_in(dir, "data.bin"), d);
  m.outputs.push_back("data.bin");
  if (c.csv || o.csv) {
    write_data_csv(path_in(dir, "data.csv"), d);
    m.outputs.push_back("data.csv");
  }
  save_field_outputs(dir, "q_true", q, c.csv, m);
  m.parameters["m"] = std::to_string(d.m);
  m.parameters["nsteps"] = std::to_string(d.nsteps);
  m.parameters["tau"] = fmt("%.17g", d.tau);
  m.parameters["substeps"] = std::to_string(model.substeps());
  m.parameters["noise_level"] = fmt("%.17g", c.noise_level);
  m.write(dir);
  std::cout << fmt("data: m = %d, nsteps = %d, tau = %.17g, substeps = %d\n", d.m, d.nsteps, d.tau, model.substeps());
  return kExitOk;
}

int cmd_rom(const Options& o, bool check_only, int argc, char** argv) {
  if (o.data.empty()) throw ConfigError("missing --data");
  const DataCube d = load_data(o.data);
  const std::string dir = prepare_dir(o, nullptr);
  Manifest m = manifest_for(check_only ? "rom check" : "rom build", o, nullptr, argc, argv);
  m.tolerances = {{"rom_rel_tol", o.rel_tol},       {"data_fit", kTolDataFit},   {"off_tridiagonal", kTolOffTridiagonal},
                  {"spectrum", kTolSpectrum},       {"factor", kTolFactor},      {"dual_lower", kTolDual},
                  {"lanczos", kTolLanczos},         {"wave_factor_floor", kWaveFactorFloor}};
  const Rom rom = rom_build(d, o.rel_tol);
  std::string text;
  const bool ok = rom_report(rom, d, text);
  std::cout << text;
  if (!check_only) {
    save_rom(path_in(dir, "rom.bin"), rom);
    write_text(path_in(dir, "rom_report.txt"), text);
    m.outputs = {"rom.bin", "rom_report.txt"};
  }
  m.parameters["status"] = ok ? "ok" : "violated";
  m.write(dir);
  return check_only && !ok ? kExitInvariant : kExitOk;
}

int cmd_born(const Options& o, int argc, char** argv) {
  if (o.data.empty()) throw ConfigError("missing --data");
  if (o.ref.empty()) throw ConfigError("missing --ref");
  const DataCube d = load_data(o.data);
  const DataCube d0 = load_data(o.ref);
  if (d.m != d0.m || d.nsteps != d0.nsteps || d.tau != d0.tau) {
    throw ConfigError("--data and --ref differ in m, nsteps or tau");
  }
  const std::string dir = prepare_dir(o, nullptr);
  Manifest m = manifest_for("born", o, nullptr, argc, argv);
  m.tolerances["rom_rel_tol"] = o.rel_tol;
  const DataCube bd = born_data(BornInputs::from_roms(d0, rom_build(d0, o.rel_tol), rom_build(d, o.rel_tol)));
  save_data(path_in(dir, "born.bin"), bd);
  m.outputs.push_back("born.bin");
  if (o.csv) {
    write_data_csv(path_in(dir, "born.csv"), bd);
    m.outputs.push_back("born.csv");
  }
  m.write(dir);
  return kExitOk;
}

int cmd_psf(const Options& o, int argc, char** argv) {
  const RunConfig c = config_from(o);
  if (o.centers.empty()) throw ConfigError("missing --center");
  const std::string dir = prepare_dir(o, &c);
  Manifest m = manifest_for("psf", o, &c, argc, argv);
  const ForwardModel model(c.forward_setup());
  const ReferenceProjection ref = reference_projection(model, c.rom_rel_tol);
  std::ostringstream rep;
  for (std::size_t k = 0; k < o.centers.size(); ++k) {
    double x = 0.0, z = 0.0;
    char comma = 0;
    std::istringstream is(o.centers[k]);
    if (!(is >> x >> comma >> z) || comma != ',') throw ConfigError("--center expects x,z, got '" + o.centers[k] + "'");
    const PsfField p = point_spread(ref, model, x, z, 1.0, c.rom_rel_tol);
    const std::string stem = "psf_" + std::to_string(k);
    save_field_outputs(dir, stem, p.psi, c.csv, m);
    std::size_t imax = 0;
    for (std::size_t i = 0; i < p.psi.size(); ++i) {
      if (p.psi[i] > p.psi[imax]) imax = i;
    }
    const Grid2D& g = model.grid();
    rep << "[" << stem << "]\ncenter = " << x << ", " << z << "\npeak = " << g.x(static_cast<int>(imax) % g.nx) << ", "
        << g.z(static_cast<int>(imax) / g.nx) << "\nmain_lobe_second_moment = "
        << cross_range_second_moment(p.psi, x, z) << "\n";
    if (p.clipped) {
      rep << "warning = bump support clipped by the grid boundary\n";
      log("warning: PSF bump at " + o.centers[k] + " clipped by the grid boundary");
    }
  }
  write_text(path_in(dir, "psf_report.txt"), rep.str());
  m.outputs.push_back("psf_report.txt");
  m.write(dir);
  std::cout << rep.str();
  return kExitOk;
}

int cmd_mesh(const Options& o, int argc, char** argv) {
  const RunConfig c = config_from(o);
  const std::string dir = prepare_dir(o, &c);
  Manifest m = manifest_for("mesh", o, &c, argc, argv);
  const ForwardModel model(c.forward_setup());
  MeshReport report;
  const SearchBasis basis = c.basis(model, &report);
  save_basis(path_in(dir, "basis.bin"), basis);
  std::ostringstream rep;
  rep << "kind = " << c.basis_kind << "\nactive_nodes = " << basis.size() << "\n";
  for (std::size_t k = 0; k < report.lines.size(); ++k) {
    const PartitionLine& l = report.lines[k];
    rep << "line " << k << ": selected = " << l.selected.size() << ", residual = " << l.residual
        << ", tol = " << l.tol_used << "\n";
  }
  write_text(path_in(dir, "mesh_report.txt"), rep.str());
  m.outputs = {"basis.bin", "mesh_report.txt"};
  m.parameters["basis_kind"] = c.basis_kind;
  m.parameters["active_nodes"] = std::to_string(basis.size());
  m.write(dir);
  std::cout << rep.str();
  return kExitOk;
}

int cmd_invert(const Options& o, int argc, char** argv) {
  const RunConfig c = config_from(o);
  if (o.data.empty()) throw ConfigError("missing --data");
  const std::string dir = prepare_dir(o, &c);
  Manifest m = manifest_for("invert", o, &c, argc, argv);
  const ForwardModel model(c.forward_setup());
  const DataCube d = load_data(o.data);
  check_data_matches(d, model);
  const SearchBasis basis = o.basis.empty() ? c.basis(model) : load_basis(o.basis);
  if (!(basis.grid() == model.grid())) throw ConfigError("--basis grid does not match [grid]");
  std::string report;
  const Field est = run_inversion(c, o.method.empty() ? c.method : o.method, o.raw, model, d, basis, dir, m, report);
  std::cout << report;
  if (!o.truth.empty()) {
    const double err = relative_error(est, load_field(o.truth));
    m.parameters["relative_error"] = fmt("%.6e", err);
    std::cout << fmt("relative_error = %.6e\n", err);
  }
  m.write(dir);
  return kExitOk;
}

int cmd_pipeline(const Options& o, int argc, char** argv) {
  const RunConfig c = config_from(o);
  const std::string dir = prepare_dir(o, &c);
  Manifest m = manifest_for("pipeline", o, &c, argc, argv);
  const auto t0 = std::chrono::steady_clock::now();
  const ForwardModel model(c.forward_setup());
  const Field q = c.reflectivity();
  const DataCube d = simulate_from(c, model, q);
  save_data(path_in(dir, "data.bin"), d);
  m.outputs.push_back("data.bin");
  save_field_outputs(dir, "q_true", q, c.csv, m);
  log(fmt("simulated m = %d, nsteps = %d, tau = %.6g", d.m, d.nsteps, d.tau));

  std::string rom_text;
  const Rom rom = rom_build(d, c.rom_rel_tol);
  rom_report(rom, d, rom_text);
  write_text(path_in(dir, "rom_report.txt"), rom_text);
  m.outputs.push_back("rom_report.txt");

  const SearchBasis basis = c.basis(model);
  save_basis(path_in(dir, "basis.bin"), basis);
  m.outputs.push_back("basis.bin");
  log(fmt("search basis: %s, %d unknowns", c.basis_kind.c_str(), basis.size()));

  std::string report;
  const std::string method = o.method.empty() ? c.method : o.method;
  const Field est = run_inversion(c, method, o.raw, model, d, basis, dir, m, report);
  const double err = relative_error(est, q);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.parameters["relative_error"] = fmt("%.6e", err);
  m.write(dir);
  log(fmt("pipeline finished in %.2f s", secs));
  std::cout << report << fmt("relative_error = %.6e\n", err);
  return kExitOk;
}

// Small dense instances checked against exact spectral formulas.
int cmd_oracle(const Options& o, int argc, char** argv) {
  const std::string dir = prepare_dir(o, nullptr);
  Manifest m = manifest_for("oracle", o, nullptr, argc, argv);
  int failed = 0;
  auto report = [&](bool pass, const std::string& what) {
    std::cout << (pass ? "PASS " : "FAIL ") << what << '\n';
    if (!pass) ++failed;
  };

  Grid2D g(1, 40, 1.0);
  const auto ops = assemble_operators(Medium::homogeneous(g, 1.0));
  const Pulse pulse = Pulse::ricker(1.0 / 6.0);
  const DenseOperator dense(ops.A);
  const ArrayGeometry array = ArrayGeometry::linear(g, 1, 1, 1);
  const Matrix b_exact =
      dense.apply_function([&](double l) { return pulse.half_spectrum(std::sqrt(std::max(l, 0.0))); }) *
      sensor_functions(ops, array, Pulse::flat()).b;
  const auto sf = sensor_functions(ops, array, pulse);
  const double eb = (sf.b - b_exact).norm() / b_exact.norm();
  report(eb <= 1e-8, fmt("sensor function vs dense spectral filter: %.3e (<= 1e-08)", eb));

  const int n = 6;
  const Matrix P = dense_propagator(dense, 1.0);
  const DataCube d = chebyshev_data(P, sf.b, 2 * n, g.cell_weight(), 1.0);
  const auto u = chebyshev_snapshots(P, sf.b, n);
  Matrix U(g.size(), n);
  for (int j = 0; j < n; ++j) U.col(j) = u[j];
  const Matrix M = g.cell_weight() * U.transpose() * U;
  const Matrix S = g.cell_weight() * U.transpose() * P * U;
  const double em = (mass_matrix(d) - M).norm() / M.norm();
  const double es = (stiffness_matrix(d) - S).norm() / S.norm();
  report(em <= 1e-10 && es <= 1e-10, fmt("Gram matrices vs snapshot products: M %.3e, S %.3e (<= 1e-10)", em, es));

  // Leapfrog against the dense cosine propagator, layered 24-cell medium.
  Grid2D g2(1, 24, 1.0);
  Field q2(g2, 0.0);
  add_box(q2, 0, 0, 10, 14, 0.1);
  const auto ops2 = assemble_operators(Medium(Field(g2, 1.0), q2));
  const auto sf2 = sensor_functions(ops2, ArrayGeometry::linear(g2, 1, 1, 1), Pulse::ricker(1.0 / 8.0));
  const int count = 10;
  const auto exact = chebyshev_snapshots(dense_propagator(DenseOperator(ops2.A), 1.0), sf2.b, count);
  auto leapfrog_error = [&](int substeps) {
    const auto v = simulate_snapshots(ops2, sf2.b, 1.0, count, substeps);
    double e = 0.0, nn = 0.0;
    for (int j = 0; j < count; ++j) {
      e += (v[j] - exact[j]).squaredNorm();
      nn += exact[j].squaredNorm();
    }
    return std::sqrt(e / nn);
  };
  const double e32 = leapfrog_error(32), e64 = leapfrog_error(64);
  report(e64 <= 1e-4, fmt("leapfrog vs dense cosine propagator at 64 substeps: %.3e (<= 1e-04)", e64));
  report(std::abs(e32 / e64 - 4.0) <= 0.4, fmt("leapfrog error ratio under substep doubling: %.3f (4 +- 0.4)", e32 / e64));

  const Rom rom = rom_build(d);
  const RomInvariants inv = check_rom(rom, d);
  report(inv.data_fit <= kTolDataFit, fmt("ROM reproduces its data: %.3e (<= 1e-08)", inv.data_fit));

  m.tolerances["sensor_function"] = 1e-8;
  m.tolerances["gram"] = 1e-10;
  m.tolerances["leapfrog"] = 1e-4;
  m.tolerances["data_fit"] = kTolDataFit;
  m.parameters["failed"] = std::to_string(failed);
  m.write(dir);
  return failed == 0 ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"romscat: array scattering data, data-driven ROMs and ROM-based reflectivity inversion"};
  app.set_version_flag("--version", ROMSCAT_VERSION);
  app.require_subcommand(1);
  Options o;

  auto add_out = [&](CLI::App* sc) { sc->add_option("-o,--out-dir", o.out_dir, "Output directory"); };
  auto add_config = [&](CLI::App* sc, bool required) {
    auto* opt = sc->add_option("-c,--config", o.config, "Run configuration (INI)");
    if (required) opt->required();
    sc->add_option("--seed", o.seed, "Override noise.seed from the config");
  };

  auto* simulate = app.add_subcommand("simulate", "Simulate array data for the configured medium");
  add_config(simulate, true);
  add_out(simulate);
  simulate->add_flag("--csv", o.csv, "Also write data.csv");

  auto* rom = app.add_subcommand("rom", "Build or check a data-driven ROM");
  rom->require_subcommand(1);
  auto* rom_build_cmd = rom->add_subcommand("build", "Build a ROM from a data cube and report its invariants");
  auto* rom_check_cmd = rom->add_subcommand("check", "Check ROM invariants; exit 1 on violation");
  for (auto* sc : {rom_build_cmd, rom_check_cmd}) {
    sc->add_option("-d,--data", o.data, "Data cube (ROMDATA1)")->required();
    sc->add_option("--rel-tol", o.rel_tol, "Spectral clipping tolerance of the mass matrix")->check(CLI::NonNegativeNumber);
    add_out(sc);
  }

  auto* born = app.add_subcommand("born", "Born-transform a data cube using reference data");
  born->add_option("-d,--data", o.data, "Measured data cube")->required();
  born->add_option("-r,--ref", o.ref, "Reference data cube (q = 0)")->required();
  born->add_option("--rel-tol", o.rel_tol, "Spectral clipping tolerance")->check(CLI::NonNegativeNumber);
  born->add_flag("--csv", o.csv, "Also write born.csv");
  add_out(born);

  auto* psf = app.add_subcommand("psf", "Point spread functions at given centers");
  add_config(psf, true);
  psf->add_option("--center", o.centers, "Center as x,z (repeatable)")->required();
  add_out(psf);

  auto* mesh = app.add_subcommand("mesh", "Build the search basis described by [basis]");
  add_config(mesh, true);
  add_out(mesh);

  auto* invert = app.add_subcommand("invert", "Estimate the reflectivity from a data cube");
  add_config(invert, true);
  invert->add_option("-d,--data", o.data, "Data cube")->required();
  invert->add_option("--method", o.method, "rom-gn or ls-rtm")->check(CLI::IsMember({"rom-gn", "ls-rtm"}));
  invert->add_option("--basis", o.basis, "Search basis file (default: built from [basis])");
  invert->add_option("--truth", o.truth, "True reflectivity field, for the error report");
  invert->add_flag("--raw", o.raw, "ls-rtm: fit the raw data instead of Born-transformed data");
  add_out(invert);

  auto* pipeline = app.add_subcommand("pipeline", "Simulate, build the basis and invert in one run");
  add_config(pipeline, true);
  pipeline->add_option("--method", o.method, "Override inversion.method")->check(CLI::IsMember({"rom-gn", "ls-rtm"}));
  pipeline->add_flag("--raw", o.raw, "ls-rtm: fit the raw data");
  add_out(pipeline);

  auto* oracle = app.add_subcommand("oracle", "Validate the simulator and ROM against dense spectral oracles");
  add_out(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(o, argc, argv);
    if (rom_build_cmd->parsed()) return cmd_rom(o, false, argc, argv);
    if (rom_check_cmd->parsed()) return cmd_rom(o, true, argc, argv);
    if (born->parsed()) return cmd_born(o, argc, argv);
    if (psf->parsed()) return cmd_psf(o, argc, argv);
    if (mesh->parsed()) return cmd_mesh(o, argc, argv);
    if (invert->parsed()) return cmd_invert(o, argc, argv);
    if (pipeline->parsed()) return cmd_pipeline(o, argc, argv);
    if (oracle->parsed()) return cmd_oracle(o, argc, argv);
  } catch (const ConfigError& e) {
    log(std::string("configuration error: ") + e.what());
    return kExitUsage;
  } catch (const ArgumentError& e) {
    log(std::string("invalid argument: ") + e.what());
    return kExitUsage;
  } catch (const FormatError& e) {
    log(std::string("IO/format error: ") + e.what());
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    log(std::string("IO error: ") + e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    log(std::string("error: ") + e.what());
    return kExitInvariant;
  }
  return kExitUsage;
}
