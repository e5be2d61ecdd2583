// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include "romscat/wavesim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "romscat/error.hpp"

namespace romscat {

namespace {

using Triplet = Eigen::Triplet<double>;

struct FaceBuilder {
  std::vector<Triplet> trips;
  int rows = 0;

  // Face between cell i (upper/left) and cell k (lower/right). k < 0 marks a
  // sound-soft ghost beyond the boundary.
  void face(const Medium& med, int i, int k, double h) {
    const double ci = med.c[i];
    if (k < 0) {
      trips.emplace_back(rows, i, -ci / h);
    } else {
      const double ck = med.c[k];
      const double cf = 0.5 * (ci + ck);
      const double sf = std::sqrt(cf);
      const double dq = 0.25 * cf * (med.q[k] - med.q[i]) / h;
      trips.emplace_back(rows, i, -sf * std::sqrt(ci) / h + dq);
      trips.emplace_back(rows, k, sf * std::sqrt(ck) / h + dq);
    }
    ++rows;
  }
};

}  // namespace

DataCube::DataCube(int m_, int nsteps_, double tau_)
    : m(m_), nsteps(nsteps_), tau(tau_), D(static_cast<std::size_t>(std::max(nsteps_, 0)),
                                             Matrix::Zero(std::max(m_, 0), std::max(m_, 0))) {}

void DataCube::validate() const {
  if (m < 1 || nsteps < 1) throw ArgumentError("data cube needs m >= 1 and nsteps >= 1");
  if (static_cast<int>(D.size()) != nsteps) throw ArgumentError("data cube step count mismatch");
  for (const auto& d : D) {
    if (d.rows() != m || d.cols() != m) throw ArgumentError("data cube block has wrong size");
  }
}

double DataCube::max_norm() const {
  double v = 0.0;
  for (const auto& d : D) v = std::max(v, d.norm());
  return v;
}

double DataCube::rms() const {
  double s = 0.0;
  for (const auto& d : D) s += d.squaredNorm();
  const double count = static_cast<double>(nsteps) * m * m;
  return count > 0 ? std::sqrt(s / count) : 0.0;
}

bool DataCube::operator==(const DataCube& o) const {
  if (m != o.m || nsteps != o.nsteps || tau != o.tau || D.size() != o.D.size()) return false;
  for (std::size_t j = 0; j < D.size(); ++j) {
    if (D[j] != o.D[j]) return false;
  }
  return true;
}

DiscreteOperators assemble_operators(const Medium& med) {
  const Grid2D& g = med.grid();
  FaceBuilder fb;
  // Range faces: below each cell. No face above row 0 (sound hard).
  for (int iz = 0; iz < g.nz; ++iz) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const int i = g.index(ix, iz);
      fb.face(med, i, iz + 1 < g.nz ? g.index(ix, iz + 1) : -1, g.h);
    }
  }
  if (g.nx > 1) {
    for (int iz = 0; iz < g.nz; ++iz) {
      // Left ghost face, then interior faces, then right ghost face.
      fb.face(med, g.index(0, iz), -1, g.h);
      for (int ix = 0; ix + 1 < g.nx; ++ix) fb.face(med, g.index(ix, iz), g.index(ix + 1, iz), g.h);
      fb.face(med, g.index(g.nx - 1, iz), -1, g.h);
    }
  }
  DiscreteOperators ops;
  ops.grid = g;
  ops.Lt = SparseMatrix(fb.rows, g.size());
  ops.Lt.setFromTriplets(fb.trips.begin(), fb.trips.end());
  ops.L = ops.Lt.transpose();
  ops.A = ops.L * ops.Lt;
  double top = 0.0;
  for (int ix = 0; ix < g.nx; ++ix) top += med.c.at(ix, 0);
  ops.c_ref = top / g.nx;
  ops.c_max = med.c.max();
  return ops;
}

double estimate_spectral_radius(const SparseMatrix& A, const Grid2D& grid, int iterations) {
  Vector x(A.rows());
  for (int iz = 0; iz < grid.nz; ++iz) {
    for (int ix = 0; ix < grid.nx; ++ix) x[grid.index(ix, iz)] = ((ix + iz) % 2 == 0) ? 1.0 : -1.0;
  }
  x.normalize();
  double est = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector y = A * x;
    est = x.dot(y);
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    x = y / ny;
  }
  return est;
}

namespace {

double gershgorin_bound(const SparseMatrix& A) {
  double bound = 0.0;
  for (int r = 0; r < A.outerSize(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(A, r); it; ++it) s += std::abs(it.value());
    bound = std::max(bound, s);
  }
  return bound;
}

}  // namespace

SensorFunctions sensor_functions(const DiscreteOperators& ops, const ArrayGeometry& array,
                                 const Pulse& pulse, int cheb_order) {
  if (cheb_order < 8) throw ArgumentError("cheb_order must be at least 8");
  const Grid2D& g = ops.grid;
  array.validate(g);
  const int m = array.m();
  const int N = g.size();

  SensorFunctions out;
  out.cheb_order = cheb_order;
  Matrix delta = Matrix::Zero(N, m);
  for (int s = 0; s < m; ++s) {
    delta(g.index(array.positions[s].ix, array.positions[s].iz), s) = 1.0 / g.cell_weight();
  }
  if (pulse.kind() == Pulse::Kind::Flat) {
    out.b = delta;
    return out;
  }

  const double hi = std::min(1.05 * estimate_spectral_radius(ops.A, g), gershgorin_bound(ops.A));
  out.interval = hi;

  // Chebyshev interpolation of theta -> s(sqrt(theta)) at the K + 1 Chebyshev
  // points of [0, hi].
  const int K = cheb_order;
  std::vector<double> vals(K + 1);
  for (int k = 0; k <= K; ++k) {
    const double t = std::cos(std::numbers::pi * (k + 0.5) / (K + 1));
    const double theta = 0.5 * hi * (1.0 + t);
    vals[k] = pulse.half_spectrum(std::sqrt(std::max(theta, 0.0)));
    if (vals[k] < 0.0) {
      std::ostringstream msg;
      msg << "pulse half spectrum is negative (" << vals[k] << ") at omega = " << std::sqrt(theta);
      throw DomainError(msg.str());
    }
  }
  std::vector<double> coef(K + 1);
  for (int j = 0; j <= K; ++j) {
    double acc = 0.0;
    for (int k = 0; k <= K; ++k) acc += vals[k] * std::cos(std::numbers::pi * j * (k + 0.5) / (K + 1));
    coef[j] = (j == 0 ? 1.0 : 2.0) * acc / (K + 1);
  }

  // Recursion on As = (2/hi) A - I, whose spectrum lies in [-1, 1].
  auto apply = [&](const Matrix& x) -> Matrix { return (2.0 / hi) * (ops.A * x) - x; };
  Matrix t_prev = delta;
  Matrix t_cur = apply(delta);
  Matrix b = coef[0] * t_prev + coef[1] * t_cur;
  for (int j = 2; j <= K; ++j) {
    Matrix t_next = 2.0 * apply(t_cur) - t_prev;
    b += coef[j] * t_next;
    t_prev = std::move(t_cur);
    t_cur = std::move(t_next);
  }
  out.b = std::move(b);
  return out;
}

int required_substeps(const DiscreteOperators& ops, double tau) {
  if (!(tau > 0.0)) throw ArgumentError("tau must be positive");
  const double dt_max = 0.5 * ops.grid.h / ops.c_max;
  return std::max(1, static_cast<int>(std::ceil(tau / dt_max * (1.0 - 1e-12))));
}

namespace {

void check_cfl(const DiscreteOperators& ops, double tau, int substeps) {
  if (substeps < 1) throw ArgumentError("substeps must be at least 1");
  const double dt = tau / substeps;
  if (dt > 0.5 * ops.grid.h / ops.c_max * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "CFL violated: dt = " << dt << " exceeds 0.5 h / max(c) = " << 0.5 * ops.grid.h / ops.c_max
        << "; need substeps >= " << required_substeps(ops, tau);
    throw ConfigError(msg.str());
  }
}

/// Leapfrog driver calling `sink(j, u)` at every t = j tau.
template <class Sink>
void leapfrog(const DiscreteOperators& ops, const Matrix& b, double tau, int count, int substeps,
              Sink&& sink) {
  check_cfl(ops, tau, substeps);
  if (count < 1) throw ArgumentError("snapshot count must be at least 1");
  const double dt = tau / substeps;
  const double dt2 = dt * dt;
  sink(0, b);
  if (count == 1) return;
  Matrix prev = b;
  Matrix cur = b - (0.5 * dt2) * (ops.A * b);
  int step = 1;
  const int last = (count - 1) * substeps;
  while (true) {
    if (step % substeps == 0) sink(step / substeps, cur);
    if (step == last) break;
    Matrix next = 2.0 * cur - prev - dt2 * (ops.A * cur);
    prev = std::move(cur);
    cur = std::move(next);
    ++step;
  }
}

Matrix symmetric_part(const Matrix& d, double& asym) {
  const double nd = d.norm();
  if (nd > 0.0) asym = std::max(asym, (d - d.transpose()).norm() / nd);
  Matrix s = d;
  symmetrize(s);
  return s;
}

}  // namespace

std::vector<Matrix> simulate_snapshots(const DiscreteOperators& ops, const Matrix& b, double tau,
                                       int count, int substeps) {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  leapfrog(ops, b, tau, count, substeps, [&](int, const Matrix& u) { out.push_back(u); });
  return out;
}

DataCube record_data(const Matrix& b, const std::vector<Matrix>& snapshots, double weight,
                     double tau, double* asymmetry) {
  DataCube d(static_cast<int>(b.cols()), static_cast<int>(snapshots.size()), tau);
  double asym = 0.0;
  for (std::size_t j = 0; j < snapshots.size(); ++j) {
    d.D[j] = symmetric_part(weight * (b.transpose() * snapshots[j]), asym);
  }
  if (asymmetry) *asymmetry = asym;
  return d;
}

DataCube simulate_data(const DiscreteOperators& ops, const Matrix& b, double tau, int nsteps,
                       int substeps, double* asymmetry) {
  DataCube d(static_cast<int>(b.cols()), nsteps, tau);
  const double w = ops.grid.cell_weight();
  double asym = 0.0;
  leapfrog(ops, b, tau, nsteps, substeps, [&](int j, const Matrix& u) {
    d.D[j] = symmetric_part(w * (b.transpose() * u), asym);
  });
  if (asymmetry) *asymmetry = asym;
  return d;
}

namespace {

/// Standard normal deviates from raw 64-bit Mersenne twister output by the
/// Box-Muller transform, so the stream does not depend on the standard
/// library's distribution implementation.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : gen_(seed) {}
  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  double uniform_open() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

DataCube add_noise(const DataCube& data, double level, std::uint64_t seed) {
  if (!(level >= 0.0)) throw ArgumentError("noise level must be non-negative");
  data.validate();
  if (level == 0.0) return data;
  const double sigma = level * data.rms();
  NormalStream rng(seed);
  DataCube out = data;
  for (int j = 0; j < data.nsteps; ++j) {
    for (int r = 0; r < data.m; ++r) {
      for (int s = r; s < data.m; ++s) {
        const double e = sigma * rng.next();
        out.D[j](r, s) += e;
        if (s != r) out.D[j](s, r) += e;
      }
    }
  }
  return out;
}

}  // namespace romscat
