// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "romscat/error.hpp"
#include "romscat/forward_model.hpp"
#include "romscat/phantoms.hpp"
#include "romscat/rom.hpp"
#include "romscat/spectral_oracle.hpp"

using namespace romscat;

namespace {

DataCube scalar_cube(std::initializer_list<double> values) {
  DataCube d(1, static_cast<int>(values.size()), 1.0);
  int j = 0;
  for (double v : values) d.D[j++] = Matrix::Constant(1, 1, v);
  return d;
}

Matrix random_orthogonal(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Matrix X(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) X(i, j) = n01(rng);
  Eigen::HouseholderQR<Matrix> qr(X);
  return qr.householderQ();
}

// Noiseless 1D data: one inclusion, m = 1.
DataCube one_dimensional_data(int n) {
  Grid2D g(1, 300, 1.0);
  ForwardSetup s;
  s.c = Field(g, 1.0);
  s.array = ArrayGeometry::linear(g, 1, 1, 1);
  s.pulse = Pulse::ricker(1.0 / 8.9);
  s.tau = s.pulse.tau_for(2.5);
  s.nsteps = 2 * n;
  Field q(g, 0.0);
  add_box(q, 0, 0, 12, 18, 0.2);
  return ForwardModel(s).data(q);
}

// Noiseless 2D data: one box, three sensors.
DataCube two_dimensional_data(int n) {
  Grid2D g(40, 40, 1.0);
  ForwardSetup s;
  s.c = Field(g, 1.0);
  s.array = ArrayGeometry::linear(g, 3, 4, 1);
  s.pulse = Pulse::ricker(1.0 / 8.0);
  s.tau = s.pulse.tau_for(2.5);
  s.nsteps = 2 * n;
  Field q(g, 0.0);
  add_box(q, 16, 22, 14, 20, 0.2);
  return ForwardModel(s).data(q);
}

}  // namespace

TEST(Gram, MassBlocks) {
  DataCube d(2, 6, 1.0);
  for (int j = 0; j < 6; ++j) {
    d.D[j] = Matrix::Random(2, 2);
    symmetrize(d.D[j]);
  }
  Matrix M = mass_matrix(d);
  EXPECT_EQ(M.block(0, 0, 2, 2), d.D[0]);
  EXPECT_EQ(M.block(0, 2, 2, 2), d.D[1]);
  EXPECT_EQ(M, M.transpose());
  DataCube odd(1, 5, 1.0);
  for (auto& D : odd.D) D = Matrix::Ones(1, 1);
  EXPECT_THROW(mass_matrix(odd), ArgumentError);
}

TEST(Gram, StiffnessBlocks) {
  DataCube d(2, 6, 1.0);
  for (int j = 0; j < 6; ++j) {
    d.D[j] = Matrix::Random(2, 2);
    symmetrize(d.D[j]);
  }
  Matrix S = stiffness_matrix(d);
  EXPECT_EQ(S.block(0, 0, 2, 2), d.D[1]);
  EXPECT_LT((S.block(2, 0, 2, 2) - 0.5 * (d.D[0] + d.D[2])).norm(), 1e-15);
  EXPECT_EQ(S, S.transpose());
}

TEST(Gram, MatchesOracleSnapshotGram) {
  Grid2D g(1, 40, 1.0);
  auto ops = assemble_operators(Medium::homogeneous(g, 1.0));
  auto sf = sensor_functions(ops, ArrayGeometry::linear(g, 1, 1, 1), Pulse::ricker(1.0 / 6.0));
  const double tau = 1.0;
  const int n = 6;
  Matrix P = dense_propagator(DenseOperator(ops.A), tau);
  DataCube d = chebyshev_data(P, sf.b, 2 * n, g.cell_weight(), tau);
  auto u = chebyshev_snapshots(P, sf.b, n);
  Matrix U(g.size(), n);
  for (int j = 0; j < n; ++j) U.col(j) = u[j];
  Matrix M = g.cell_weight() * U.transpose() * U;
  Matrix S = g.cell_weight() * U.transpose() * P * U;
  EXPECT_LT((mass_matrix(d) - M).norm(), 1e-10 * M.norm());
  EXPECT_LT((stiffness_matrix(d) - S).norm(), 1e-10 * S.norm());
}

TEST(Regularize, WellConditionedPassesThrough) {
  GramPair g;
  g.M = Matrix::Identity(4, 4) * 2.0;
  g.S = Matrix::Identity(4, 4);
  RegularizationReport rep;
  GramPair out = regularize_gram(g, 1e-8, &rep);
  EXPECT_EQ(out.M, g.M);
  EXPECT_EQ(out.S, g.S);
  EXPECT_EQ(rep.clipped, 0);
  EXPECT_DOUBLE_EQ(rep.condition, 1.0);
  EXPECT_THROW(regularize_gram(g, 1.0), ArgumentError);
  EXPECT_THROW(regularize_gram(g, -1e-3), ArgumentError);
}

TEST(Regularize, ClipsOneTinyEigenvalue) {
  std::mt19937_64 rng(8);
  Matrix Q = random_orthogonal(5, rng);
  Vector ev(5);
  ev << 1e-16, 0.5, 1.0, 2.0, 3.0;
  GramPair g;
  g.M = Q * ev.asDiagonal() * Q.transpose();
  g.S = Matrix::Identity(5, 5);
  RegularizationReport rep;
  GramPair out = regularize_gram(g, 1e-10, &rep);
  EXPECT_EQ(rep.clipped, 1);
  EXPECT_NEAR(rep.floor, 3e-10, 1e-22);
  EXPECT_EQ(out.S, g.S);
  Eigen::SelfAdjointEigenSolver<Matrix> es(out.M);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  EXPECT_NEAR(es.eigenvalues().minCoeff(), 3e-10, 1e-14);
}

TEST(BlockCholesky, Identity) {
  EXPECT_LT((block_cholesky(Matrix::Identity(6, 6), 2) - Matrix::Identity(6, 6)).norm(), 1e-15);
}

TEST(BlockCholesky, HandExample) {
  Matrix M(2, 2);
  M << 4, 2, 2, 5;
  Matrix expect(2, 2);
  expect << 2, 1, 0, 2;
  EXPECT_LT((block_cholesky(M, 1) - expect).norm(), 1e-15);
}

TEST(BlockCholesky, RandomSpdConvention) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n01;
  Matrix X(12, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) X(i, j) = n01(rng);
  Matrix M = X * X.transpose() + Matrix::Identity(12, 12);
  Matrix R = block_cholesky(M, 3);
  EXPECT_LT((R.transpose() * R - M).norm(), 1e-12 * M.norm());
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < i; ++j) EXPECT_EQ(block_norm(R, 3, i, j), 0.0);
    Matrix Rjj = R.block(3 * i, 3 * i, 3, 3);
    for (int a = 0; a < 3; ++a) {
      EXPECT_GT(Rjj(a, a), 0.0);
      for (int b = 0; b < a; ++b) EXPECT_EQ(Rjj(a, b), 0.0);
    }
  }
}

TEST(BlockCholesky, IndefiniteNamesBlock) {
  Matrix M = Matrix::Identity(6, 6);
  M(4, 4) = -1.0;
  try {
    block_cholesky(M, 2);
    FAIL() << "expected FactorizationError";
  } catch (const FactorizationError& e) {
    EXPECT_EQ(e.block(), 2);
  }
}

TEST(RomBuild, ScalarSingleBlock) {
  DataCube d = scalar_cube({4.0, 1.0});
  Rom r = rom_build(d);
  EXPECT_NEAR(r.R(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(r.P(0, 0), 0.25, 1e-15);
  EXPECT_NEAR(r.b(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(r.L(0, 0), std::sqrt(2.0 * (1.0 - 0.25)), 1e-15);
}

TEST(RomBuild, FirstSampleReproduced) {
  DataCube d = two_dimensional_data(6);
  Rom r = rom_build(d);
  EXPECT_LT((r.b.transpose() * r.b - d.D[0]).norm(), 1e-12 * d.D[0].norm());
}

TEST(WaveFactor, ZeroPropagator) {
  Matrix L = rom_wave_factor(Matrix::Zero(4, 4), 1.0, 2);
  EXPECT_LT((L - std::sqrt(2.0) * Matrix::Identity(4, 4)).norm(), 1e-15);
}

TEST(WaveFactor, Scalar) {
  Matrix P = Matrix::Constant(1, 1, 0.3);
  EXPECT_NEAR(rom_wave_factor(P, 0.5, 1)(0, 0), std::sqrt(2.0 * 0.7 / 0.25), 1e-14);
}

TEST(WaveFactor, IndefiniteThrows) {
  Matrix P = Matrix::Identity(2, 2) * 1.5;
  EXPECT_THROW(rom_wave_factor(P, 1.0, 1), FactorizationError);
}

TEST(WaveFactor, ReconstructsAndIsBidiagonal) {
  Rom r = rom_build(two_dimensional_data(6));
  const Matrix target = (2.0 / (r.tau * r.tau)) * (Matrix::Identity(r.P.rows(), r.P.cols()) - r.P);
  EXPECT_LT((r.L * r.L.transpose() - target).norm(), 1e-10 * target.norm());
  for (int i = 0; i < r.n; ++i)
    for (int j = 0; j < r.n; ++j)
      if (j > i || i - j > 1) {
        EXPECT_EQ(block_norm(r.L, r.m, i, j), 0.0);
      }
}

TEST(RomTimestep, SnapshotsReproduceFactor) {
  Rom r = rom_build(two_dimensional_data(6));
  auto u = rom_timestep(r, r.n);
  Matrix U(r.n * r.m, r.n * r.m);
  for (int j = 0; j < r.n; ++j) U.middleCols(j * r.m, r.m) = u[j];
  EXPECT_LT((U - r.R).norm(), 1e-10 * r.R.norm());
  auto one = rom_timestep(r, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], r.b);
}

TEST(RomTimestep, ScalarChebyshev) {
  DataCube d = scalar_cube({4.0, 1.0});
  Rom r = rom_build(d);
  auto u = rom_timestep(r, 6);
  const double theta = std::acos(0.25);
  for (int j = 0; j < 6; ++j) EXPECT_NEAR(u[j](0, 0), 2.0 * std::cos(j * theta), 1e-13);
}

TEST(RomPredict, DataFitOneDimensional) {
  DataCube d = one_dimensional_data(10);
  Rom r = rom_build(d);
  DataCube p = rom_predict_data(r, d.nsteps);
  EXPECT_EQ(p.D[0], r.b.transpose() * r.b);
  RomInvariants inv = check_rom(r, d);
  EXPECT_LE(inv.data_fit, 1e-8);
  EXPECT_LE(inv.off_tridiagonal, 1e-8);
  EXPECT_GE(inv.spectrum_min, -1.0 - 1e-8);
  EXPECT_LE(inv.spectrum_max, 1.0 + 1e-8);
  EXPECT_GT(inv.min_eig_I_minus_P, 0.0);
  EXPECT_LE(inv.factor_residual, 1e-10);
  EXPECT_LE(inv.dual_lower, 1e-8);
  EXPECT_LE(inv.lanczos_residual, 1e-8);
  EXPECT_LE(inv.b_rom_tail, 1e-12);
}

TEST(RomPredict, TwoDimensionalStructure) {
  DataCube d = two_dimensional_data(8);
  Rom r = rom_build(d);
  RomInvariants inv = check_rom(r, d);
  EXPECT_LE(inv.data_fit, 1e-8);
  EXPECT_LE(inv.off_tridiagonal, 1e-8);
  EXPECT_LE(inv.dual_lower, 1e-8);
  EXPECT_LE(inv.lanczos_residual, 1e-8);
}

TEST(DualSnapshots, ScalarFirstEntry) {
  DataCube d = scalar_cube({4.0, 1.0});
  Rom r = rom_build(d);
  Matrix Rh = dual_rom_snapshots(r);
  EXPECT_NEAR(Rh(0, 0), 0.5 * r.tau * r.L(0, 0) * 2.0, 1e-15);
}

TEST(DualSnapshots, FirstOrderSystem) {
  Rom r = rom_build(one_dimensional_data(10));
  Matrix Rh = dual_rom_snapshots(r);
  auto u = rom_timestep(r, r.n + 1);
  for (int j = 0; j < r.n; ++j) {
    Matrix lhs = (u[j + 1] - u[j]) / r.tau;
    Matrix rhs = -r.L * Rh.middleCols(j * r.m, r.m);
    EXPECT_LT((lhs - rhs).norm(), 1e-10 * std::max(1.0, rhs.norm())) << "j=" << j;
  }
}

TEST(Lanczos, HandExample) {
  Matrix L(2, 2);
  L << 2, 0, -1, 3;
  LanczosSteps s = extract_lanczos_steps(L, Matrix::Identity(1, 1), 1);
  ASSERT_EQ(s.Gamma.size(), 2u);
  EXPECT_NEAR(s.GammaHat[0](0, 0), 1.0, 1e-15);
  EXPECT_NEAR(s.Gamma[0](0, 0), 0.5, 1e-15);
  EXPECT_NEAR(s.GammaHat[1](0, 0), 2.0, 1e-15);
  EXPECT_NEAR(s.gamma[0](0, 0), 0.25, 1e-15);
  EXPECT_NEAR(s.gammaHat[0](0, 0), 1.0, 1e-15);
  EXPECT_NEAR(s.gammaHat[1](0, 0), 4.0, 1e-15);
  EXPECT_LT((reconstruct_wave_factor(s) - L).norm(), 1e-15);
}

TEST(Lanczos, ScalarHomogeneous) {
  DataCube d = scalar_cube({4.0, 1.0});
  Rom r = rom_build(d);
  LanczosSteps s = extract_lanczos_steps(r, d.D[0]);
  EXPECT_NEAR(s.gammaHat[0](0, 0), 0.25, 1e-15);
  EXPECT_NEAR(s.Gamma[0](0, 0), 1.0 / (s.GammaHat[0](0, 0) * r.L(0, 0)), 1e-15);
}

TEST(Lanczos, ProductsArePositiveDefinite) {
  DataCube d = two_dimensional_data(6);
  Rom r = rom_build(d);
  LanczosSteps s = extract_lanczos_steps(r, d.D[0]);
  for (int j = 0; j < r.n; ++j) {
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix>(s.gamma[j]).eigenvalues().minCoeff(), 0.0);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix>(s.gammaHat[j]).eigenvalues().minCoeff(), 0.0);
  }
  EXPECT_LT((reconstruct_wave_factor(s) - r.L).norm(), 1e-8 * r.L.norm());
}

TEST(Lanczos, SingularBlockThrows) {
  Matrix L = Matrix::Zero(2, 2);
  EXPECT_THROW(extract_lanczos_steps(L, Matrix::Identity(1, 1), 1), ExtractionError);
}

TEST(OrthogonalFamily, IdentityLeavesRomUnchanged) {
  Rom r = rom_build(two_dimensional_data(5));
  Rom t = orthogonal_transform(r, Matrix::Identity(r.P.rows(), r.P.cols()));
  EXPECT_LT((t.P - r.P).norm(), 1e-14 * r.P.norm());
  EXPECT_LT((t.b - r.b).norm(), 1e-14 * r.b.norm());
  EXPECT_LT((t.L - r.L).norm(), 1e-12 * r.L.norm());
}

TEST(OrthogonalFamily, RandomBlocksPreserveDataAndSpectrum) {
  DataCube d = two_dimensional_data(5);
  Rom r = rom_build(d);
  DataCube base = rom_predict_data(r, d.nsteps);
  Eigen::SelfAdjointEigenSolver<Matrix> es0(r.P);
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix Y = Matrix::Zero(r.P.rows(), r.P.cols());
    for (int j = 0; j < r.n; ++j) Y.block(j * r.m, j * r.m, r.m, r.m) = random_orthogonal(r.m, rng);
    Rom t = orthogonal_transform(r, Y);
    DataCube p = rom_predict_data(t, d.nsteps);
    for (int j = 0; j < d.nsteps; ++j) EXPECT_LT((p.D[j] - base.D[j]).norm(), 1e-12 * base.max_norm());
    Eigen::SelfAdjointEigenSolver<Matrix> es(t.P);
    EXPECT_LT((es.eigenvalues() - es0.eigenvalues()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(OrthogonalFamily, RejectsNonOrthogonal) {
  Rom r = rom_build(two_dimensional_data(3));
  Matrix Y = Matrix::Identity(r.P.rows(), r.P.cols()) * 1.1;
  EXPECT_THROW(orthogonal_transform(r, Y), ArgumentError);
}
