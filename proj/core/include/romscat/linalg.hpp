// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace romscat {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// (A + A^T) / 2, in place.
inline void symmetrize(Matrix& a) {
  const Matrix t = a.transpose();
  a = 0.5 * (a + t);
}

/// Frobenius norm of the block (i, j) of an nm x nm matrix with m x m blocks.
inline double block_norm(const Matrix& a, int m, int i, int j) {
  return a.block(i * m, j * m, m, m).norm();
}

}  // namespace romscat
