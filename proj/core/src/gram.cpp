// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include "romscat/rom.hpp"

#include <cmath>
#include <limits>

#include "romscat/error.hpp"

namespace romscat {

namespace {

void check_even(const DataCube& data) {
  data.validate();
  if (data.nsteps % 2 != 0) throw ArgumentError("data cube needs an even number of steps (2n)");
}

}  // namespace

Matrix mass_matrix(const DataCube& data) {
  check_even(data);
  const int n = data.n();
  const int m = data.m;
  Matrix M(n * m, n * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      M.block(i * m, j * m, m, m) = 0.5 * (data.D[i + j] + data.D[std::abs(i - j)]);
    }
  }
  symmetrize(M);
  return M;
}

Matrix stiffness_matrix(const DataCube& data) {
  check_even(data);
  const int n = data.n();
  const int m = data.m;
  Matrix S(n * m, n * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      S.block(i * m, j * m, m, m) =
          0.25 * (data.D[i + j + 1] + data.D[std::abs(i - j + 1)] + data.D[std::abs(i + j - 1)] +
                  data.D[std::abs(i - j - 1)]);
    }
  }
  symmetrize(S);
  return S;
}

GramPair gram_from_data(const DataCube& data) {
  GramPair g;
  g.M = mass_matrix(data);
  g.S = stiffness_matrix(data);
  g.n = data.n();
  g.m = data.m;
  g.tau = data.tau;
  return g;
}

GramPair regularize_gram(const GramPair& gram, double rel_tol, RegularizationReport* report) {
  if (!(rel_tol >= 0.0 && rel_tol < 1.0)) throw ArgumentError("rel_tol must lie in [0, 1)");
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram.M);
  if (es.info() != Eigen::Success) throw NumericalError("mass matrix eigendecomposition failed");
  const Vector& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  const double bottom = ev.minCoeff();
  RegularizationReport rep;
  rep.floor = rel_tol * top;
  rep.condition = bottom > 0.0 ? top / bottom : std::numeric_limits<double>::infinity();
  GramPair out = gram;
  if (bottom < rep.floor) {
    Vector clipped = ev;
    for (Eigen::Index i = 0; i < clipped.size(); ++i) {
      if (clipped[i] < rep.floor) {
        clipped[i] = rep.floor;
        ++rep.clipped;
      }
    }
    out.M = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
    symmetrize(out.M);
  }
  if (report) *report = rep;
  return out;
}

}  // namespace romscat
