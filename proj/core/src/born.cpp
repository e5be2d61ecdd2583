// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include "romscat/born.hpp"

#include "romscat/error.hpp"

namespace romscat {

BornInputs BornInputs::from_roms(const DataCube& data_ref, const Rom& rom_ref, const Rom& rom_measured) {
  BornInputs in;
  in.data_ref = data_ref;
  in.L_q = rom_measured.L;
  in.L_0 = rom_ref.L;
  in.b_rom0 = rom_ref.b;
  in.tau = rom_ref.tau;
  in.n = rom_ref.n;
  in.m = rom_ref.m;
  return in;
}

std::vector<Matrix> chebyshev_derivative_series(const Matrix& P0, const Matrix& dP, const Matrix& b,
                                                int count) {
  if (P0.rows() != P0.cols() || dP.rows() != P0.rows() || dP.cols() != P0.cols() ||
      b.rows() != P0.rows()) {
    throw ArgumentError("chebyshev derivative: dimension mismatch");
  }
  std::vector<Matrix> out;
  if (count < 1) return out;
  const Eigen::Index m = b.cols();
  out.push_back(Matrix::Zero(m, m));
  if (count == 1) return out;
  Matrix u_prev = b;
  Matrix u_cur = P0 * b;
  Matrix w_prev = Matrix::Zero(b.rows(), m);
  Matrix w_cur = dP * b;
  out.push_back(b.transpose() * w_cur);
  for (int j = 2; j < count; ++j) {
    Matrix w_next = 2.0 * (dP * u_cur) + 2.0 * (P0 * w_cur) - w_prev;
    Matrix u_next = 2.0 * (P0 * u_cur) - u_prev;
    out.push_back(b.transpose() * w_next);
    w_prev = std::move(w_cur);
    w_cur = std::move(w_next);
    u_prev = std::move(u_cur);
    u_cur = std::move(u_next);
  }
  return out;
}

Matrix chebyshev_directional_derivative(const Matrix& P0, const Matrix& dP, const Matrix& b, int j) {
  if (j < 0) throw ArgumentError("Chebyshev index must be non-negative");
  return chebyshev_derivative_series(P0, dP, b, j + 1).back();
}

DataCube born_data(const BornInputs& in) {
  in.data_ref.validate();
  const Eigen::Index N = static_cast<Eigen::Index>(in.n) * in.m;
  if (in.L_q.rows() != N || in.L_q.cols() != N || in.L_0.rows() != N || in.L_0.cols() != N) {
    throw ArgumentError("born_data: wave factors do not match n m");
  }
  if (in.b_rom0.rows() != N || in.b_rom0.cols() != in.m || in.data_ref.m != in.m) {
    throw ArgumentError("born_data: b_rom or reference data do not match m");
  }
  const double s = 0.5 * in.tau * in.tau;
  const Matrix dL = in.L_q - in.L_0;
  Matrix dP = -s * (dL * in.L_0.transpose() + in.L_0 * dL.transpose());
  Matrix P0 = Matrix::Identity(N, N) - s * (in.L_0 * in.L_0.transpose());
  symmetrize(dP);
  symmetrize(P0);
  const auto deriv = chebyshev_derivative_series(P0, dP, in.b_rom0, in.data_ref.nsteps);
  DataCube out = in.data_ref;
  for (int j = 0; j < out.nsteps; ++j) {
    out.D[j] = in.data_ref.D[j] + deriv[j];
    symmetrize(out.D[j]);
  }
  return out;
}

}  // namespace romscat
