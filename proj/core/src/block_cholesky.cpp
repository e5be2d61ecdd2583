// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include "romscat/rom.hpp"

#include <cmath>
#include <sstream>

#include "romscat/error.hpp"

namespace romscat {

Matrix block_cholesky(const Matrix& M, int m) {
  if (m < 1 || M.rows() != M.cols() || M.rows() % m != 0) {
    throw ArgumentError("block_cholesky: matrix size must be a multiple of the block size");
  }
  const int n = static_cast<int>(M.rows()) / m;
  Matrix R = Matrix::Zero(M.rows(), M.cols());
  for (int j = 0; j < n; ++j) {
    Matrix pivot = M.block(j * m, j * m, m, m);
    for (int k = 0; k < j; ++k) {
      const auto Rkj = R.block(k * m, j * m, m, m);
      pivot.noalias() -= Rkj.transpose() * Rkj;
    }
    symmetrize(pivot);
    Eigen::LLT<Matrix> llt(pivot);
    bool ok = llt.info() == Eigen::Success;
    Matrix U;
    if (ok) {
      U = llt.matrixU();
      for (int d = 0; d < m; ++d) ok = ok && U(d, d) > 0.0 && std::isfinite(U(d, d));
    }
    if (!ok) {
      std::ostringstream msg;
      msg << "block Cholesky pivot " << j << " is not positive definite";
      throw FactorizationError(msg.str(), j);
    }
    R.block(j * m, j * m, m, m) = U;
    const auto Ut = U.transpose().triangularView<Eigen::Lower>();
    for (int i = j + 1; i < n; ++i) {
      Matrix rhs = M.block(j * m, i * m, m, m);
      for (int k = 0; k < j; ++k) {
        rhs.noalias() -= R.block(k * m, j * m, m, m).transpose() * R.block(k * m, i * m, m, m);
      }
      R.block(j * m, i * m, m, m) = Ut.solve(rhs);
    }
  }
  return R;
}

}  // namespace romscat
