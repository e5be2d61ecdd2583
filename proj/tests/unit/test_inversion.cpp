// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <numeric>

#include "romscat/error.hpp"
#include "romscat/forward_model.hpp"
#include "romscat/inversion.hpp"
#include "romscat/parallel.hpp"
#include "romscat/phantoms.hpp"
#include "romscat/simplex.hpp"

using namespace romscat;

namespace {

double relative_error(const Vector& a, const Vector& b) { return (a - b).norm() / b.norm(); }

// One sensor at the top of a 1D column, range hats one sampling interval apart.
struct Desk1D {
  Grid2D g{1, 120, 1.0};
  std::unique_ptr<ForwardModel> model;
  std::unique_ptr<SearchBasis> basis;

  Desk1D() {
    ForwardSetup s;
    s.c = Field(g, 1.0);
    s.array = ArrayGeometry::linear(g, 1, 1, 1);
    s.pulse = Pulse::ricker(1.0 / 8.9);
    s.tau = s.pulse.tau_for(2.5);
    const int n = static_cast<int>(std::ceil(64.0 / s.tau)) + 2;
    s.nsteps = 2 * n;
    model = std::make_unique<ForwardModel>(s);
    const double lam = model->wavelength();
    basis = std::make_unique<SearchBasis>(
        SearchBasis::range_hats(g, range_line_depths(g.z(1) + lam, 60.0, s.tau)));
  }

  Vector truth() const {
    Vector c = Vector::Zero(basis->size());
    for (int k = 4; k <= 11; ++k) c[k] = 0.2;
    for (int k = 17; k <= 23; ++k) c[k] = -0.15;
    return c;
  }

  Field field(const Vector& c) const { return basis->evaluate(std::span<const double>(c.data(), c.size())); }
};

}  // namespace

TEST(Simplex, TextbookOptimum) {
  Vector c(2);
  c << -1, -1;
  Matrix A(2, 2);
  A << 1, 2, 3, 1;
  Vector b(2);
  b << 4, 6;
  auto r = solve_linear_program(c, A, b);
  ASSERT_EQ(r.status, LinearProgramResult::Status::Optimal);
  EXPECT_NEAR(r.x[0], 1.6, 1e-12);
  EXPECT_NEAR(r.x[1], 1.2, 1e-12);
  EXPECT_NEAR(r.objective, -2.8, 1e-12);
}

TEST(Simplex, InfeasibleAndUnbounded) {
  Vector c = Vector::Ones(1);
  Matrix A = Matrix::Constant(1, 1, 1.0);
  Vector b = Vector::Constant(1, -1.0);
  EXPECT_EQ(solve_linear_program(c, A, b).status, LinearProgramResult::Status::Infeasible);
  Vector c2 = -Vector::Ones(1);
  Matrix A2 = Matrix::Constant(1, 1, -1.0);
  Vector b2 = Vector::Ones(1);
  EXPECT_EQ(solve_linear_program(c2, A2, b2).status, LinearProgramResult::Status::Unbounded);
}

TEST(Simplex, Deterministic) {
  Matrix A = Matrix::Random(6, 5).cwiseAbs();
  Vector b = Vector::Ones(6);
  Vector c = -Vector::Ones(5);
  auto r1 = solve_linear_program(c, A, b), r2 = solve_linear_program(c, A, b);
  EXPECT_EQ(r1.x, r2.x);
  EXPECT_EQ(r1.pivots, r2.pivots);
}

TEST(Partition, SingleConstantCandidate) {
  Matrix psi = Matrix::Ones(7, 1);
  PartitionLine line = solve_partition_line(psi, 0.02);
  ASSERT_EQ(line.selected.size(), 1u);
  EXPECT_NEAR(line.alpha[0], 1.0, 1e-12);
  EXPECT_LE(line.residual, 1e-12);
}

TEST(Partition, DuplicateCandidatesMergeToLowestIndex) {
  Matrix psi(5, 3);
  psi.col(0) = Vector::LinSpaced(5, 0.1, 0.3);
  psi.col(1) = Vector::Constant(5, 1.0);
  psi.col(2) = Vector::Constant(5, 1.0);
  PartitionLine line = solve_partition_line(psi, 0.02);
  ASSERT_EQ(line.selected.size(), 1u);
  EXPECT_EQ(line.selected[0], 1);
  EXPECT_NEAR(line.alpha[1], 1.0, 1e-12);
  EXPECT_EQ(line.alpha[2], 0.0);
}

TEST(Partition, ResidualWithinTolerance) {
  // Hats of half-width 2 at unit spacing: every other hat already sums to one.
  const int samples = 41, cands = 9;
  Matrix psi(samples, cands);
  for (int p = 0; p < samples; ++p) {
    const double x = 8.0 * p / (samples - 1);
    for (int j = 0; j < cands; ++j) psi(p, j) = std::max(0.0, 1.0 - std::abs(x - j) / 2.0);
  }
  PartitionLine line = solve_partition_line(psi, 0.02);
  EXPECT_LE(line.residual, line.tol_used + 1e-12);
  EXPECT_DOUBLE_EQ(line.tol_used, 0.02);
  EXPECT_LT(line.selected.size(), static_cast<std::size_t>(cands));
}

TEST(Partition, InfeasibleAfterRelaxationThrows) {
  Matrix psi = Matrix::Zero(4, 2);
  psi(0, 0) = 1.0;
  EXPECT_THROW(solve_partition_line(psi, 0.02), NumericalError);
  EXPECT_THROW(solve_partition_line(psi, 0.0), ArgumentError);
}

TEST(Partition, NodesThinOutWithDepth) {
  Grid2D g(60, 60, 1.0);
  std::vector<RangeLinePsf> lines;
  for (double z : {10.0, 20.0, 30.0, 40.0}) {
    RangeLinePsf line;
    line.z = z;
    const double width = 0.4 * z;
    for (double x = 10.0; x <= 50.0; x += 4.0) {
      PsfField f;
      f.x = x;
      f.z = z;
      f.psi = Field(g, 0.0);
      for (int iz = 0; iz < g.nz; ++iz)
        for (int ix = 0; ix < g.nx; ++ix) f.psi.at(ix, iz) = std::exp(-std::pow((g.x(ix) - x) / width, 2));
      line.xs.push_back(x);
      line.psf.push_back(std::move(f));
    }
    lines.push_back(std::move(line));
  }
  MeshReport rep;
  SearchBasis b = partition_of_unity_mesh(g, lines, 0.02, 0.0, &rep);
  ASSERT_EQ(rep.lines.size(), 4u);
  for (std::size_t k = 1; k < rep.lines.size(); ++k) {
    EXPECT_LE(rep.lines[k].selected.size(), rep.lines[k - 1].selected.size());
  }
  for (const auto& line : rep.lines) EXPECT_LE(line.residual, line.tol_used + 1e-12);
  std::size_t total = 0;
  for (const auto& line : rep.lines) total += line.selected.size();
  EXPECT_EQ(static_cast<std::size_t>(b.size()), total);
}

TEST(RangeLines, UniformSpacing) {
  auto z = range_line_depths(2.0, 3.0, 0.25);
  ASSERT_EQ(z.size(), 5u);
  EXPECT_DOUBLE_EQ(z.back(), 3.0);
  EXPECT_THROW(range_line_depths(0, 1, 0), ArgumentError);
}

TEST(Psf, BumpIntegratesToAmplitude) {
  Grid2D g(40, 40, 0.5);
  bool clipped = true;
  Field b = psf_bump(g, 10.0, 8.0, 4.0, 2.5, &clipped);
  EXPECT_FALSE(clipped);
  double sum = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_GE(b[i], 0.0);
    sum += b[i];
  }
  EXPECT_NEAR(sum * g.cell_weight(), 2.5, 1e-12);
  psf_bump(g, 0.5, 8.0, 4.0, 1.0, &clipped);
  EXPECT_TRUE(clipped);
}

TEST(Psf, SecondMomentOfSyntheticRow) {
  Grid2D g(101, 3, 1.0);
  Field f(g, 0.0);
  for (int ix = 0; ix < g.nx; ++ix) f.at(ix, 1) = std::exp(-0.5 * std::pow((ix - 50.0) / 4.0, 2));
  EXPECT_NEAR(cross_range_second_moment(f, 50.0, 1.0, 0.0), 16.0, 1e-6);
  // Main lobe above half maximum: |x| <= 4 sqrt(2 ln 2).
  EXPECT_LT(cross_range_second_moment(f, 50.0, 1.0, 0.5), 16.0);
  Field wide(g, 0.0);
  for (int ix = 0; ix < g.nx; ++ix) wide.at(ix, 1) = std::exp(-0.5 * std::pow((ix - 50.0) / 8.0, 2));
  EXPECT_GT(cross_range_second_moment(wide, 50.0, 1.0), cross_range_second_moment(f, 50.0, 1.0));
}

TEST(ReferenceProjectionTest, OrthonormalAndConsistent) {
  Grid2D g(30, 30, 1.0);
  ForwardSetup s;
  s.c = Field(g, 1.0);
  s.array = ArrayGeometry::linear(g, 3, 4, 1);
  s.pulse = Pulse::ricker(1.0 / 8.0);
  s.tau = s.pulse.tau_for(2.5);
  s.nsteps = 10;
  ForwardModel model(s);
  ReferenceProjection ref = reference_projection(model);
  const int N = static_cast<int>(ref.V0.cols());
  EXPECT_LT((ref.weight * ref.V0.transpose() * ref.V0 - Matrix::Identity(N, N)).norm(), 1e-8);
  EXPECT_LT((ref.V0 * ref.rom0.R - ref.U0).norm(), 1e-10 * ref.U0.norm());
  Matrix v0 = model.sensors().b * ref.rom0.R.topLeftCorner(3, 3).inverse();
  EXPECT_LT((ref.V0.leftCols(3) - v0).norm(), 1e-10 * v0.norm());
}

TEST(PointSpread, ZeroAmplitudeAndShallowPeak1D) {
  Desk1D d;
  ReferenceProjection ref = reference_projection(*d.model);
  const double lam = d.model->wavelength();
  PsfField zero = point_spread(ref, *d.model, 0.0, 30.0, 0.0);
  EXPECT_EQ(zero.psi.max(), 0.0);
  PsfField p = point_spread(ref, *d.model, 0.0, 30.0);
  EXPECT_GE(p.psi.min(), 0.0);
  int best = 0;
  for (int iz = 0; iz < d.g.nz; ++iz)
    if (p.psi[iz] > p.psi[best]) best = iz;
  EXPECT_LE(std::abs(d.g.z(best) - 30.0), lam / 2);
}

TEST(GaussNewton, ConditioningReport) {
  Vector sv = jacobian_conditioning_report(Matrix::Identity(4, 4));
  EXPECT_LT((sv - Vector::Ones(4)).norm(), 1e-15);
  EXPECT_DOUBLE_EQ(condition_number(sv), 1.0);
  Matrix J = Matrix::Random(6, 3);
  J.col(2) = J.col(1);
  Vector s2 = jacobian_conditioning_report(J);
  EXPECT_LT(s2[2], 1e-12);
  EXPECT_TRUE(std::isinf(condition_number(s2)) || condition_number(s2) > 1e12);
}

TEST(GaussNewton, BidiagonalBlocks) {
  Matrix L = Matrix::Zero(6, 6);
  L.block(0, 0, 2, 2) = Matrix::Constant(2, 2, 1.0);
  L.block(2, 0, 2, 2) = Matrix::Constant(2, 2, 2.0);
  L.block(4, 4, 2, 2) = Matrix::Constant(2, 2, 3.0);
  Vector v = bidiagonal_blocks(L, 2);
  EXPECT_EQ(v.size(), 5 * 4);
  EXPECT_DOUBLE_EQ(v.sum(), 4 * (1 + 2 + 3));
}

TEST(GaussNewton, StallsWithoutDescent) {
  ResidualFunction f = [](const Vector& x) { return Vector::Constant(1, std::abs(x[0] - 0.3) + 1.0); };
  GaussNewtonResult r = gauss_newton(f, Vector::Constant(1, 0.3), {});
  EXPECT_EQ(r.report.status, "stalled");
  EXPECT_DOUBLE_EQ(r.coeffs[0], 0.3);
}

TEST(GaussNewton, ScaleInvariantIterates) {
  ResidualFunction f = [](const Vector& x) {
    Vector r(3);
    r << x[0] * x[0] + x[1] - 1.0, x[0] - 2.0 * x[1] + 0.5, std::sin(x[0]) - 0.2;
    return r;
  };
  ResidualFunction g = [&](const Vector& x) { return Vector(4.0 * f(x)); };
  GaussNewtonOptions o;
  o.fd_step = 1e-7;
  GaussNewtonResult a = gauss_newton(f, Vector::Zero(2), o), b = gauss_newton(g, Vector::Zero(2), o);
  ASSERT_EQ(a.report.iterates.size(), b.report.iterates.size());
  for (std::size_t k = 0; k < a.report.iterates.size(); ++k) {
    EXPECT_LT((a.report.iterates[k] - b.report.iterates[k]).norm(), 1e-12);
  }
}

TEST(GaussNewton, ReportHasOneSectionPerIteration) {
  ResidualFunction f = [](const Vector& x) { return Vector(x.array() - 1.0); };
  GaussNewtonResult r = gauss_newton(f, Vector::Zero(3), {});
  EXPECT_EQ(r.report.status, "converged");
  EXPECT_LT((r.coeffs - Vector::Ones(3)).norm(), 1e-8);
  const std::string text = r.report.to_text();
  EXPECT_NE(text.find("[iteration 1]"), std::string::npos);
  EXPECT_NE(text.find("status = converged"), std::string::npos);
}

TEST(RomObjective, ExactAtTruthPositiveAtZero) {
  Desk1D d;
  Vector ct = d.truth();
  DataCube data = d.model->data(d.field(ct));
  Rom rd = rom_build(data);
  ResidualFunction f = rom_residual(*d.model, *d.basis, rd.L);
  EXPECT_LE(objective_value(f(ct)), 1e-16 * rd.L.squaredNorm());
  EXPECT_GT(objective_value(f(Vector::Zero(ct.size()))), 0.0);
}

TEST(RomObjective, RecoversRepresentableTruth) {
  Desk1D d;
  Vector ct = d.truth();
  DataCube data = d.model->data(d.field(ct));
  GaussNewtonResult r = gauss_newton_rom(*d.model, data, *d.basis);
  EXPECT_LE(relative_error(r.coeffs, ct), 1e-3);
  EXPECT_LE(r.report.ranks.size(), 5u);
  for (std::size_t k = 1; k < r.report.objectives.size(); ++k) {
    EXPECT_LE(r.report.objectives[k], r.report.objectives[k - 1]);
  }
}

TEST(RomObjective, ZeroScattererStaysAtZero) {
  Desk1D d;
  DataCube data = d.model->data(Field(d.g, 0.0));
  GaussNewtonResult r = gauss_newton_rom(*d.model, data, *d.basis);
  EXPECT_LT(r.coeffs.norm(), 1e-8);
  EXPECT_EQ(r.report.status, "converged");
  GaussNewtonResult l = ls_rtm(*d.model, data, *d.basis);
  EXPECT_LT(l.coeffs.norm(), 1e-8);
}

TEST(LsRtm, TruncationReported) {
  Desk1D d;
  DataCube data = d.model->data(d.field(d.truth()));
  GaussNewtonOptions o;
  o.max_iter = 1;
  o.svd_rel_cutoff = 1e-2;
  GaussNewtonResult r = ls_rtm(*d.model, data, *d.basis, o);
  ASSERT_EQ(r.report.ranks.size(), 1u);
  EXPECT_GT(r.report.ranks[0], 0);
  EXPECT_LT(r.report.ranks[0], d.basis->size());
}

TEST(Parallel, EveryIndexOnceAndLowestErrorWins) {
  std::vector<std::atomic<int>> hits(50);
  parallel_for(50, [&](int i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  try {
    parallel_for(20, [](int i) {
      if (i == 7 || i == 13) throw ArgumentError("index " + std::to_string(i));
    });
    FAIL() << "expected rethrow";
  } catch (const ArgumentError& e) {
    EXPECT_STREQ(e.what(), "index 7");
  }
}
