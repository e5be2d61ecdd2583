// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "romscat/error.hpp"
#include "romscat/forward_model.hpp"
#include "romscat/phantoms.hpp"
#include "romscat/spectral_oracle.hpp"
#include "romscat/wavesim.hpp"

using namespace romscat;

namespace {

Matrix dense(const SparseMatrix& s) { return Matrix(s); }

Field random_field(const Grid2D& g, double amp, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amp, amp);
  Field f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = u(rng);
  return f;
}

Matrix delta_columns(const Grid2D& g, const ArrayGeometry& a) {
  Matrix d = Matrix::Zero(g.size(), a.m());
  for (int s = 0; s < a.m(); ++s) d(g.index(a.positions[s].ix, a.positions[s].iz), s) = 1.0 / g.cell_weight();
  return d;
}

}  // namespace

TEST(Pulse, RickerIsNonNegativeAndPeaksAtCentre) {
  Pulse p = Pulse::ricker(0.125);
  const double wp = p.peak_angular_frequency();
  EXPECT_NEAR(wp, 2.0 * M_PI * 0.125, 1e-15);
  for (double w = 0.0; w < 10.0 * wp; w += 0.01 * wp) EXPECT_GE(p.half_spectrum(w), 0.0);
  EXPECT_NEAR(p.half_spectrum(wp), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(p.spectrum(wp), std::exp(-2.0), 1e-15);
  EXPECT_DOUBLE_EQ(p.wavelength(2.0), 16.0);
}

TEST(Pulse, SamplingIntervalFrozen) {
  EXPECT_NEAR(Pulse::ricker(1.0 / 8.9).tau_for(2.5), 1.8156382584305055, 1e-12);
  EXPECT_NEAR(Pulse::ricker(1.0 / 8.0).tau_for(2.5), 1.6320343896004545, 1e-12);
  const Pulse p = Pulse::ricker(1.0 / 8.0);
  const double wc = p.cutoff_angular_frequency(0.05);
  EXPECT_NEAR(p.spectrum(wc) / p.spectrum(p.peak_angular_frequency()), 0.05, 1e-10);
  EXPECT_NEAR(p.tau_for(2.5), 2.0 * M_PI / (2.5 * wc), 1e-14);
}

TEST(Operators, OneDimensionalStencil) {
  const double c0 = 2.0, h = 0.5;
  Grid2D g(1, 3, h);
  auto ops = assemble_operators(Medium::homogeneous(g, c0));
  Matrix expect(3, 3);
  expect << 1, -1, 0, -1, 2, -1, 0, -1, 2;
  expect *= c0 * c0 / (h * h);
  EXPECT_LT((dense(ops.A) - expect).norm(), 1e-13);
  EXPECT_DOUBLE_EQ(ops.c_ref, c0);
  EXPECT_DOUBLE_EQ(ops.c_max, c0);
}

TEST(Operators, TransposeIsExact) {
  Grid2D g(9, 7, 1.0);
  Field c = random_field(g, 0.3, 1);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += 1.5;
  auto ops = assemble_operators(Medium(c, random_field(g, 0.2, 2)));
  EXPECT_EQ((dense(ops.L) - dense(ops.Lt).transpose()).norm(), 0.0);
  EXPECT_LT((dense(ops.A) - dense(ops.L) * dense(ops.Lt)).norm(), 1e-12 * dense(ops.A).norm());

  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  Vector u(ops.Lt.rows()), v(ops.Lt.cols());
  for (auto& x : u) x = n01(rng);
  for (auto& x : v) x = n01(rng);
  const double lhs = (ops.L * u).dot(v);
  const double rhs = u.dot(ops.Lt * v);
  EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(lhs));
}

TEST(Operators, ConstantReflectivityDropsOut) {
  Grid2D g(6, 5, 1.0);
  auto a = assemble_operators(Medium(Field(g, 1.0), Field(g, 0.0)));
  auto b = assemble_operators(Medium(Field(g, 1.0), Field(g, 0.37)));
  EXPECT_EQ((dense(a.Lt) - dense(b.Lt)).norm(), 0.0);
}

TEST(Operators, PositiveDefinite) {
  Grid2D g(6, 6, 1.0);
  auto ops = assemble_operators(Medium(Field(g, 1.0), random_field(g, 0.2, 9)));
  Eigen::SelfAdjointEigenSolver<Matrix> es(dense(ops.A));
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  const double rho = estimate_spectral_radius(ops.A, ops.grid);
  EXPECT_LE(rho, es.eigenvalues().maxCoeff() * (1 + 1e-12));
  EXPECT_GT(rho, 0.9 * es.eigenvalues().maxCoeff());
}

TEST(Operators, SpectralRadiusFrozen) {
  auto ops = assemble_operators(Medium::homogeneous(Grid2D(1, 12, 1.0), 1.0));
  EXPECT_NEAR(estimate_spectral_radius(ops.A, ops.grid), 3.9371660607310655, 1e-12);
}

TEST(SensorFunctions, FlatPulseGivesScaledDelta) {
  Grid2D g(8, 6, 0.5);
  auto ops = assemble_operators(Medium::homogeneous(g, 1.0));
  ArrayGeometry a = ArrayGeometry::linear(g, 3, 2, 1);
  auto sf = sensor_functions(ops, a, Pulse::flat());
  EXPECT_EQ(sf.b, delta_columns(g, a));
}

TEST(SensorFunctions, RejectsLowOrderAndNegativeSpectrum) {
  Grid2D g(1, 12, 1.0);
  auto ops = assemble_operators(Medium::homogeneous(g, 1.0));
  ArrayGeometry a = ArrayGeometry::linear(g, 1, 1, 1);
  EXPECT_THROW(sensor_functions(ops, a, Pulse::ricker(0.1), 7), ArgumentError);
  Pulse bad = Pulse::custom([](double w) { return std::cos(w); }, 0.1);
  EXPECT_THROW(sensor_functions(ops, a, bad), DomainError);
}

TEST(SensorFunctions, MatchesDenseOracle) {
  Grid2D g(1, 12, 1.0);
  auto ops = assemble_operators(Medium::homogeneous(g, 1.0));
  ArrayGeometry a = ArrayGeometry::linear(g, 1, 1, 1);
  Pulse p = Pulse::ricker(1.0 / 4.0);
  auto sf = sensor_functions(ops, a, p, 128);
  DenseOperator A(ops.A);
  Matrix expect = A.apply_function([&](double t) { return p.half_spectrum(std::sqrt(std::max(t, 0.0))); }) *
                  delta_columns(g, a);
  EXPECT_LE((sf.b - expect).norm(), 1e-8 * expect.norm());
}

TEST(SensorFunctions, CompactSupport) {
  Grid2D g(1, 200, 1.0);
  auto ops = assemble_operators(Medium::homogeneous(g, 1.0));
  ArrayGeometry a = ArrayGeometry::linear(g, 1, 1, 1);
  Pulse p = Pulse::ricker(1.0 / 8.0);
  auto sf = sensor_functions(ops, a, p);
  const double radius = 3.0 * p.wavelength(1.0);
  double inside = 0.0, outside = 0.0;
  for (int iz = 0; iz < g.nz; ++iz) {
    const double e = sf.b(iz, 0) * sf.b(iz, 0);
    (std::abs(g.z(iz) - g.z(1)) <= radius ? inside : outside) += e;
  }
  EXPECT_LE(outside, 1e-6 * (inside + outside));
}

TEST(Leapfrog, SingleSnapshotIsInitialCondition) {
  Grid2D g(1, 20, 1.0);
  auto ops = assemble_operators(Medium::homogeneous(g, 1.0));
  Matrix b = Matrix::Random(g.size(), 2);
  auto u = simulate_snapshots(ops, b, 1.0, 1, 2);
  ASSERT_EQ(u.size(), 1u);
  EXPECT_EQ(u[0], b);
}

TEST(Leapfrog, CflViolationNamesSubsteps) {
  Grid2D g(1, 20, 1.0);
  auto ops = assemble_operators(Medium::homogeneous(g, 1.0));
  EXPECT_EQ(required_substeps(ops, 1.6), 4);
  Matrix b = Matrix::Random(g.size(), 1);
  try {
    simulate_snapshots(ops, b, 1.6, 3, 2);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("4"), std::string::npos) << e.what();
  }
}

TEST(Leapfrog, ConvergesToOracleAtSecondOrder) {
  Grid2D g(1, 24, 1.0);
  Field q(g, 0.0);
  add_box(q, 0, 0, 10, 14, 0.1);
  auto ops = assemble_operators(Medium(Field(g, 1.0), q));
  ArrayGeometry a = ArrayGeometry::linear(g, 1, 1, 1);
  auto sf = sensor_functions(ops, a, Pulse::ricker(1.0 / 8.0));
  const double tau = 1.0;
  const int count = 10;
  Matrix P = dense_propagator(DenseOperator(ops.A), tau);
  auto exact = chebyshev_snapshots(P, sf.b, count);
  auto error = [&](int substeps) {
    auto u = simulate_snapshots(ops, sf.b, tau, count, substeps);
    double e = 0.0, n = 0.0;
    for (int j = 0; j < count; ++j) {
      e += (u[j] - exact[j]).squaredNorm();
      n += exact[j].squaredNorm();
    }
    return std::sqrt(e / n);
  };
  const double e16 = error(16), e32 = error(32), e64 = error(64);
  EXPECT_LE(e64, 1e-4);
  EXPECT_NEAR(e16 / e32, 4.0, 0.4);
  EXPECT_NEAR(e32 / e64, 4.0, 0.4);
}

TEST(Leapfrog, DiscreteEnergyConserved) {
  Grid2D g(10, 12, 1.0);
  auto ops = assemble_operators(Medium::homogeneous(g, 1.0));
  ArrayGeometry a = ArrayGeometry::linear(g, 1, 1, 1);
  auto sf = sensor_functions(ops, a, Pulse::ricker(1.0 / 6.0));
  const double dt = 0.25;
  auto u = simulate_snapshots(ops, sf.b, dt, 120, 1);
  // Leapfrog conserves E_{k+1/2} = |(u_{k+1} - u_k)/dt|^2 / 2 + <Lt u_{k+1}, Lt u_k> / 2.
  auto energy = [&](int k) {
    const Matrix v = (u[k + 1] - u[k]) / dt;
    const Matrix w1 = ops.Lt * u[k + 1], w0 = ops.Lt * u[k];
    return 0.5 * v.squaredNorm() + 0.5 * (w1.array() * w0.array()).sum();
  };
  const double e0 = energy(0);
  for (int k = 1; k + 1 < 120; ++k) EXPECT_NEAR(energy(k), e0, 1e-6 * std::abs(e0));
}

TEST(RecordData, FirstSampleIsGram) {
  Grid2D g(12, 10, 1.0);
  auto ops = assemble_operators(Medium::homogeneous(g, 1.0));
  ArrayGeometry a = ArrayGeometry::linear(g, 3, 3, 1);
  auto sf = sensor_functions(ops, a, Pulse::ricker(1.0 / 6.0));
  double asym = 1.0;
  DataCube d = simulate_data(ops, sf.b, 1.0, 6, 2, &asym);
  EXPECT_LE(asym, 1e-8);
  Matrix g0 = g.cell_weight() * sf.b.transpose() * sf.b;
  EXPECT_LT((d.D[0] - g0).norm(), 1e-14 * g0.norm());
  Eigen::SelfAdjointEigenSolver<Matrix> es(d.D[0]);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  for (const auto& D : d.D) EXPECT_EQ(D, D.transpose());
  // The fused path agrees with snapshots + record.
  auto u = simulate_snapshots(ops, sf.b, 1.0, 6, 2);
  DataCube d2 = record_data(sf.b, u, g.cell_weight(), 1.0);
  for (int j = 0; j < 6; ++j) EXPECT_LT((d.D[j] - d2.D[j]).norm(), 1e-14 * d.max_norm());
}

TEST(RecordData, MatchesOracleChebyshevData) {
  Grid2D g(1, 30, 1.0);
  auto ops = assemble_operators(Medium::homogeneous(g, 1.0));
  ArrayGeometry a = ArrayGeometry::linear(g, 1, 1, 1);
  auto sf = sensor_functions(ops, a, Pulse::ricker(1.0 / 6.0));
  DataCube d = simulate_data(ops, sf.b, 1.0, 10, 64);
  DataCube o = chebyshev_data(dense_propagator(DenseOperator(ops.A), 1.0), sf.b, 10, g.cell_weight(), 1.0);
  for (int j = 0; j < 10; ++j) EXPECT_LE((d.D[j] - o.D[j]).norm(), 1e-4 * o.max_norm());
}

TEST(RecordData, FrozenOneDimensional) {
  Grid2D g(1, 40, 1.0);
  ForwardSetup s;
  s.c = Field(g, 1.0);
  s.array = ArrayGeometry::linear(g, 1, 1, 1);
  s.pulse = Pulse::ricker(1.0 / 8.0);
  s.tau = s.pulse.tau_for(2.5);
  s.nsteps = 8;
  ForwardModel model(s);
  EXPECT_EQ(model.substeps(), 4);
  Field q(g, 0.0);
  add_box(q, 0, 0, 14, 20, 0.1);
  DataCube d = model.data(q);
  const double expect[8] = {0.014771175786589399,   0.004337772422214857,   -0.0026690338929939773,
                            -0.005907241488010433,  -0.0072245745248273978, -0.00019158528684915476,
                            0.0026667693112336138,  0.0012897822712390921};
  for (int j = 0; j < 8; ++j) EXPECT_NEAR(d.D[j](0, 0), expect[j], 1e-12 * d.max_norm()) << "j=" << j;
}

TEST(RecordData, FrozenTwoDimensional) {
  Grid2D g(12, 10, 1.0);
  ForwardSetup s;
  s.c = Field(g, 1.0);
  s.array = ArrayGeometry::linear(g, 3, 2, 1);
  s.pulse = Pulse::ricker(1.0 / 8.0);
  s.tau = s.pulse.tau_for(2.5);
  s.nsteps = 4;
  DataCube d = ForwardModel(s).data(Field(g, 0.0));
  const double diag[4] = {0.012467693510596775, 0.001387260089055089, -0.006411276846121583,
                          -0.0018490236570208904};
  const double off[4] = {0.00089088858917157866, 0.0021869559990373077, 0.000385015255306713,
                         -0.003005810235555381};
  for (int j = 0; j < 4; ++j) {
    EXPECT_NEAR(d.D[j](0, 0), diag[j], 1e-12 * d.max_norm());
    EXPECT_NEAR(d.D[j](0, 1), off[j], 1e-12 * d.max_norm());
  }
}

TEST(Noise, ZeroLevelIsIdentity) {
  DataCube d(2, 4, 1.0);
  for (auto& D : d.D) D = Matrix::Identity(2, 2);
  EXPECT_EQ(add_noise(d, 0.0, 1), d);
  EXPECT_THROW(add_noise(d, -0.1, 1), ArgumentError);
}

TEST(Noise, ReproducibleSymmetricAndCalibrated) {
  DataCube d(50, 110, 1.0);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  for (auto& D : d.D) {
    D.resize(50, 50);
    for (int i = 0; i < 50; ++i)
      for (int k = 0; k <= i; ++k) D(i, k) = D(k, i) = n01(rng);
  }
  DataCube a = add_noise(d, 0.05, 42), b = add_noise(d, 0.05, 42), c = add_noise(d, 0.05, 43);
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == c);
  double sq = 0.0;
  std::size_t count = 0;
  for (int j = 0; j < d.nsteps; ++j) {
    EXPECT_EQ(a.D[j], a.D[j].transpose());
    sq += (a.D[j] - d.D[j]).squaredNorm();
    count += 2500;
  }
  const double ratio = std::sqrt(sq / count) / d.rms();
  EXPECT_GE(ratio, 0.045);
  EXPECT_LE(ratio, 0.055);
}
