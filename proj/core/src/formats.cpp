// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include "romscat/formats.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "romscat/error.hpp"

namespace romscat {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(Bytes& out, T v) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
  out.insert(out.end(), raw, raw + sizeof(T));
}

void put_u32(Bytes& out, std::size_t v) {
  if (v > 0xffffffffu) throw ArgumentError("value does not fit the u32 header field");
  put<std::uint32_t>(out, static_cast<std::uint32_t>(v));
}

void put_matrix(Bytes& out, const Matrix& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) put<double>(out, a(i, j));
  }
}

void put_magic(Bytes& out, const char* magic) {
  out.insert(out.end(), magic, magic + std::strlen(magic));
}

class Reader {
 public:
  Reader(const Bytes& b, const char* what) : b_(b), what_(what) {}

  void magic(const char* expected) {
    const std::size_t n = std::strlen(expected);
    need(n);
    const std::string found(reinterpret_cast<const char*>(b_.data() + pos_), n);
    if (found != expected) {
      std::ostringstream msg;
      msg << what_ << ": magic mismatch, expected '" << expected << "', found '";
      for (char ch : found) msg << (std::isprint(static_cast<unsigned char>(ch)) ? ch : '?');
      msg << "'";
      throw FormatError(msg.str());
    }
    pos_ += n;
  }

  template <class T>
  T get() {
    need(sizeof(T));
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, b_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    pos_ += sizeof(T);
    T v;
    std::memcpy(&v, raw, sizeof(T));
    return v;
  }

  std::uint32_t u32() { return get<std::uint32_t>(); }
  double f64() { return get<double>(); }

  Matrix matrix(std::size_t rows, std::size_t cols) {
    need(rows * cols * 8);
    Matrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) a(i, j) = f64();
    }
    return a;
  }

  /// Throws unless `count` items of `size` bytes remain.
  void need_items(std::size_t count, std::size_t size) {
    if (size != 0 && count > (b_.size() - pos_) / size) truncated();
  }

  void finish() const {
    if (pos_ != b_.size()) {
      std::ostringstream msg;
      msg << what_ << ": " << b_.size() - pos_ << " unexpected trailing bytes";
      throw FormatError(msg.str());
    }
  }

 private:
  void need(std::size_t n) {
    if (b_.size() - pos_ < n) truncated();
  }
  [[noreturn]] void truncated() const {
    std::ostringstream msg;
    msg << what_ << ": truncated file (" << b_.size() << " bytes)";
    throw FormatError(msg.str());
  }

  const Bytes& b_;
  const char* what_;
  std::size_t pos_ = 0;
};

void put_grid(Bytes& out, const Grid2D& g) {
  put_u32(out, static_cast<std::size_t>(g.nx));
  put_u32(out, static_cast<std::size_t>(g.nz));
  put<double>(out, g.h);
  put<double>(out, g.origin_x);
  put<double>(out, g.origin_z);
}

Grid2D get_grid(Reader& r) {
  const std::uint32_t nx = r.u32();
  const std::uint32_t nz = r.u32();
  const double h = r.f64();
  const double ox = r.f64();
  const double oz = r.f64();
  if (nx == 0 || nz < 2 || nx > (1u << 24) || nz > (1u << 24) || !(h > 0.0)) {
    throw FormatError("invalid grid header");
  }
  return Grid2D(static_cast<int>(nx), static_cast<int>(nz), h, ox, oz);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open '" + path + "' for writing");
  return os;
}

}  // namespace

Bytes encode_field(const Field& f) {
  Bytes out;
  put_magic(out, kFieldMagic);
  put_grid(out, f.grid());
  for (double v : f.values()) put<double>(out, v);
  return out;
}

Field decode_field(const Bytes& bytes) {
  Reader r(bytes, "ROMGRID1");
  r.magic(kFieldMagic);
  const Grid2D g = get_grid(r);
  r.need_items(static_cast<std::size_t>(g.size()), 8);
  std::vector<double> v(static_cast<std::size_t>(g.size()));
  for (double& x : v) x = r.f64();
  r.finish();
  return Field(g, std::move(v));
}

Bytes encode_data(const DataCube& d) {
  d.validate();
  Bytes out;
  put_magic(out, kDataMagic);
  put_u32(out, static_cast<std::size_t>(d.m));
  put_u32(out, static_cast<std::size_t>(d.nsteps));
  put<double>(out, d.tau);
  for (const auto& D : d.D) put_matrix(out, D);
  return out;
}

DataCube decode_data(const Bytes& bytes) {
  Reader r(bytes, "ROMDATA1");
  r.magic(kDataMagic);
  const std::uint32_t m = r.u32();
  const std::uint32_t nsteps = r.u32();
  const double tau = r.f64();
  if (m == 0 || nsteps == 0) throw FormatError("ROMDATA1: empty data cube");
  r.need_items(static_cast<std::size_t>(m) * m, 8 * static_cast<std::size_t>(nsteps));
  DataCube d(static_cast<int>(m), static_cast<int>(nsteps), tau);
  for (auto& D : d.D) D = r.matrix(m, m);
  r.finish();
  return d;
}

Bytes encode_rom(const Rom& rom) {
  const Eigen::Index N = static_cast<Eigen::Index>(rom.n) * rom.m;
  if (rom.R.rows() != N || rom.P.rows() != N || rom.L.rows() != N || rom.b.rows() != N || rom.b.cols() != rom.m) {
    throw ArgumentError("ROM matrices do not match n m");
  }
  Bytes out;
  put_magic(out, kRomMagic);
  put_u32(out, static_cast<std::size_t>(rom.n));
  put_u32(out, static_cast<std::size_t>(rom.m));
  put<double>(out, rom.tau);
  put_matrix(out, rom.R);
  put_matrix(out, rom.P);
  put_matrix(out, rom.b);
  put_matrix(out, rom.L);
  return out;
}

Rom decode_rom(const Bytes& bytes) {
  Reader r(bytes, "ROMROM1");
  r.magic(kRomMagic);
  Rom rom;
  const std::uint32_t n = r.u32();
  const std::uint32_t m = r.u32();
  rom.tau = r.f64();
  if (n == 0 || m == 0 || static_cast<std::uint64_t>(n) * m > 100000) throw FormatError("ROMROM1: bad sizes");
  const std::size_t N = static_cast<std::size_t>(n) * m;
  r.need_items(3 * N * N + N * m, 8);
  rom.n = static_cast<int>(n);
  rom.m = static_cast<int>(m);
  rom.R = r.matrix(N, N);
  rom.P = r.matrix(N, N);
  rom.b = r.matrix(N, m);
  rom.L = r.matrix(N, N);
  r.finish();
  return rom;
}

Bytes encode_basis(const SearchBasis& b) {
  Bytes out;
  put_magic(out, kBasisMagic);
  put_grid(out, b.grid());
  put_u32(out, b.nodes().size());
  put_u32(out, static_cast<std::size_t>(b.size()));
  put_u32(out, b.triangles().size());
  for (const auto& nd : b.nodes()) {
    put<double>(out, nd.x);
    put<double>(out, nd.z);
  }
  for (const auto& t : b.triangles()) {
    for (int v : t.v) put_u32(out, static_cast<std::size_t>(v));
  }
  return out;
}

SearchBasis decode_basis(const Bytes& bytes) {
  Reader r(bytes, "ROMBASIS");
  r.magic(kBasisMagic);
  const Grid2D g = get_grid(r);
  const std::uint32_t count = r.u32();
  const std::uint32_t active = r.u32();
  const std::uint32_t ntri = r.u32();
  r.need_items(count, 16);
  std::vector<MeshNode> nodes(count);
  for (auto& nd : nodes) {
    nd.x = r.f64();
    nd.z = r.f64();
  }
  r.need_items(ntri, 12);
  std::vector<Triangle> tris(ntri);
  for (auto& t : tris) {
    for (int& v : t.v) v = static_cast<int>(r.u32());
  }
  r.finish();
  try {
    return SearchBasis::from_mesh(g, std::move(nodes), static_cast<int>(active), std::move(tris));
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("ROMBASIS: ") + e.what());
  }
}

Bytes read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open '" + path + "'");
  return Bytes(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const Bytes& bytes) {
  auto os = open_out(path);
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw FormatError("failed writing '" + path + "'");
}

void save_field(const std::string& path, const Field& f) { write_file(path, encode_field(f)); }
Field load_field(const std::string& path) { return decode_field(read_file(path)); }
void save_data(const std::string& path, const DataCube& d) { write_file(path, encode_data(d)); }
DataCube load_data(const std::string& path) { return decode_data(read_file(path)); }
void save_rom(const std::string& path, const Rom& r) { write_file(path, encode_rom(r)); }
Rom load_rom(const std::string& path) { return decode_rom(read_file(path)); }
void save_basis(const std::string& path, const SearchBasis& b) { write_file(path, encode_basis(b)); }
SearchBasis load_basis(const std::string& path) { return decode_basis(read_file(path)); }

void write_field_csv(const std::string& path, const Field& f) {
  auto os = open_out(path);
  os << std::setprecision(17);
  os << "ix,iz,x,z,value\n";
  const Grid2D& g = f.grid();
  for (int iz = 0; iz < g.nz; ++iz) {
    for (int ix = 0; ix < g.nx; ++ix) {
      os << ix << ',' << iz << ',' << g.x(ix) << ',' << g.z(iz) << ',' << f.at(ix, iz) << '\n';
    }
  }
}

void write_data_csv(const std::string& path, const DataCube& d) {
  auto os = open_out(path);
  os << std::setprecision(17);
  for (int j = 0; j < d.nsteps; ++j) {
    for (int r = 0; r < d.m; ++r) {
      for (int s = 0; s < d.m; ++s) os << j << ',' << r << ',' << s << ',' << d.D[j](r, s) << '\n';
    }
  }
}

void write_pgm(const std::string& path, const Field& f) {
  auto os = open_out(path);
  const Grid2D& g = f.grid();
  os << "P5\n" << g.nx << ' ' << g.nz << "\n255\n";
  const double lo = f.min();
  const double hi = f.max();
  for (int iz = 0; iz < g.nz; ++iz) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double t = hi > lo ? (f.at(ix, iz) - lo) / (hi - lo) : 0.0;
      os.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t))));
    }
  }
}

}  // namespace romscat
