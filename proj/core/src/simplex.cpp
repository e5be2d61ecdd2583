// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include "romscat/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "romscat/error.hpp"

namespace romscat {

namespace {

constexpr double kEps = 1e-11;
// Pivot elements below this are never used; tiny pivots from nearly
// collinear columns blow the tableau up.
constexpr double kPivot = 1e-9;
// Primal slack of the two-pass ratio test.
constexpr double kFeas = 1e-9;

struct Tableau {
  Matrix T;                // rows 0..m-1 constraints, row m objective; last column rhs
  std::vector<int> basis;  // basic variable per row
  int pivots = 0;

  int rows() const { return static_cast<int>(T.rows()) - 1; }
  int rhs() const { return static_cast<int>(T.cols()) - 1; }

  void pivot(int r, int col) {
    T.row(r) /= T(r, col);
    for (int i = 0; i < T.rows(); ++i) {
      if (i != r && T(i, col) != 0.0) T.row(i) -= T(i, col) * T.row(r);
    }
    basis[r] = col;
    ++pivots;
  }

  /// Minimizes the objective row over columns [0, allowed). Returns false if
  /// unbounded.
  bool run(int allowed) {
    const int nr = rows();
    const int rc = rhs();
    while (true) {
      int enter = -1;
      for (int j = 0; j < allowed; ++j) {
        if (T(nr, j) < -kEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      // Two-pass ratio test: bound the step with a small feasibility slack,
      // then take the largest pivot among rows within the bound.
      double bound = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < nr; ++i) {
        const double col = T(i, enter);
        if (col > kPivot) bound = std::min(bound, (std::max(T(i, rc), 0.0) + kFeas) / col);
      }
      int leave = -1;
      for (int i = 0; i < static_cast<int>(T.rows()) - 1; ++i) {
        const double col = T(i, enter);
        if (col <= kPivot || std::max(T(i, rc), 0.0) / col > bound) continue;
        if (leave < 0 || col > T(leave, enter) ||
            (col == T(leave, enter) && basis[i] < basis[leave])) {
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LinearProgramResult solve_linear_program(const Vector& c, const Matrix& A, const Vector& b) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (c.size() != n || b.size() != m) throw ArgumentError("linear program dimensions disagree");

  std::vector<int> art_row;
  for (int i = 0; i < m; ++i) {
    if (b[i] < 0.0) art_row.push_back(i);
  }
  const int na = static_cast<int>(art_row.size());
  const int cols = n + m + na;
  Tableau tab;
  tab.T = Matrix::Zero(m + 1, cols + 1);
  tab.basis.assign(static_cast<std::size_t>(m), -1);
  int a = 0;
  for (int i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    tab.T.row(i).head(n) = sign * A.row(i);
    tab.T(i, n + i) = sign;
    tab.T(i, cols) = sign * b[i];
    if (b[i] < 0.0) {
      tab.T(i, n + m + a) = 1.0;
      tab.basis[i] = n + m + a;
      ++a;
    } else {
      tab.basis[i] = n + i;
    }
  }

  LinearProgramResult res;
  if (na > 0) {
    // Phase 1: minimize the sum of artificials, expressed in non-basic terms.
    for (int r : art_row) tab.T.row(m) -= tab.T.row(r);
    for (int k = 0; k < na; ++k) tab.T(m, n + m + k) = 0.0;
    tab.run(n + m);
    if (-tab.T(m, cols) > 1e-9 * std::max(1.0, b.cwiseAbs().maxCoeff())) {
      res.status = LinearProgramResult::Status::Infeasible;
      res.pivots = tab.pivots;
      return res;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] >= n + m) {
        for (int j = 0; j < n + m; ++j) {
          if (std::abs(tab.T(i, j)) > kPivot) {
            tab.pivot(i, j);
            break;
          }
        }
      }
    }
  }

  // Phase 2 objective in terms of the current basis.
  tab.T.row(m).setZero();
  tab.T.row(m).head(n) = c.transpose();
  for (int i = 0; i < m; ++i) {
    const int bv = tab.basis[i];
    if (bv < n && c[bv] != 0.0) tab.T.row(m) -= c[bv] * tab.T.row(i);
  }
  if (!tab.run(n + m)) {
    res.status = LinearProgramResult::Status::Unbounded;
    res.pivots = tab.pivots;
    return res;
  }
  res.status = LinearProgramResult::Status::Optimal;
  // The tableau accumulates roundoff over many pivots, so the basic solution
  // is recomputed from the original constraints with the optimal basis.
  Matrix basic(m, m);
  Vector rhs(m);
  for (int i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    rhs[i] = sign * b[i];
    for (int r = 0; r < m; ++r) {
      const int bv = tab.basis[static_cast<std::size_t>(r)];
      double v = 0.0;
      if (bv < n) {
        v = sign * A(i, bv);
      } else if (bv < n + m) {
        v = bv - n == i ? sign : 0.0;
      } else {
        v = art_row[static_cast<std::size_t>(bv - n - m)] == i ? 1.0 : 0.0;
      }
      basic(i, r) = v;
    }
  }
  const Vector xb = basic.partialPivLu().solve(rhs);
  res.x = Vector::Zero(n);
  for (int i = 0; i < m; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] < n) res.x[tab.basis[static_cast<std::size_t>(i)]] = std::max(xb[i], 0.0);
  }
  res.objective = c.dot(res.x);
  res.pivots = tab.pivots;
  return res;
}

}  // namespace romscat
