// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include "romscat/rom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "romscat/error.hpp"

namespace romscat {

namespace {

/// Reverses the index order inside every m x m block.
Matrix reverse_within_blocks(const Matrix& X, int m) {
  const Eigen::Index N = X.rows();
  Eigen::VectorXi perm(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    const Eigen::Index blk = i / m;
    perm[i] = static_cast<int>(blk * m + (m - 1 - i % m));
  }
  Matrix Y(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = 0; j < N; ++j) Y(i, j) = X(perm[i], perm[j]);
  }
  return Y;
}

}  // namespace

Matrix rom_wave_factor(const Matrix& P, double tau, int m, int* clipped) {
  if (P.rows() != P.cols() || m < 1 || P.rows() % m != 0) throw ArgumentError("rom_wave_factor: bad sizes");
  if (!(tau > 0.0)) throw ArgumentError("rom_wave_factor: tau must be positive");
  const Eigen::Index N = P.rows();
  Matrix B = (2.0 / (tau * tau)) * (Matrix::Identity(N, N) - P);
  symmetrize(B);
  Eigen::SelfAdjointEigenSolver<Matrix> es(B);
  if (es.info() != Eigen::Success) throw NumericalError("wave factor eigendecomposition failed");
  const Vector& ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  const double floor = 1e-13 * top;
  int count = 0;
  if (ev.minCoeff() < floor) {
    if (ev.minCoeff() < -1e-8 * top) {
      std::ostringstream msg;
      msg << "I - P is indefinite: eigenvalue " << ev.minCoeff() * tau * tau / 2.0;
      throw FactorizationError(msg.str(), -1);
    }
    Vector fixed = ev;
    for (Eigen::Index i = 0; i < fixed.size(); ++i) {
      if (fixed[i] < floor) {
        fixed[i] = floor;
        ++count;
      }
    }
    B = es.eigenvectors() * fixed.asDiagonal() * es.eigenvectors().transpose();
    symmetrize(B);
  }
  if (clipped) *clipped = count;
  // With J the within-block reversal, J B J = R'^T R' gives B = L L^T for
  // L = J R'^T J, which is block lower and has upper triangular diagonal
  // blocks with positive diagonal.
  const Matrix Rp = block_cholesky(reverse_within_blocks(B, m), m);
  Matrix L = reverse_within_blocks(Rp.transpose(), m);
  // Zero the structurally empty blocks left over from round-off.
  const int n = static_cast<int>(N) / m;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j > i || j < i - 1) L.block(i * m, j * m, m, m).setZero();
    }
  }
  return L;
}

Rom rom_build(const DataCube& data, double rel_tol) {
  const GramPair raw = gram_from_data(data);
  Rom rom;
  const GramPair g = regularize_gram(raw, rel_tol, &rom.regularization);
  rom.n = g.n;
  rom.m = g.m;
  rom.tau = data.tau;
  rom.R = block_cholesky(g.M, g.m);
  const Matrix Rt = rom.R.transpose();
  const auto Lo = Rt.triangularView<Eigen::Lower>();
  // P = R^{-T} S R^{-1}: X = R^{-T} S, then P = (R^{-T} X^T)^T.
  const Matrix X = Lo.solve(g.S);
  rom.P = Lo.solve(X.transpose()).transpose();
  symmetrize(rom.P);
  rom.b = rom.R.leftCols(g.m);
  rom.L = rom_wave_factor(rom.P, rom.tau, rom.m, &rom.wave_factor_clipped);
  return rom;
}

std::vector<Matrix> rom_timestep(const Rom& rom, int steps) {
  if (steps < 1) throw ArgumentError("rom_timestep needs steps >= 1");
  std::vector<Matrix> u;
  u.push_back(rom.b);
  if (steps > 1) u.push_back(rom.n > 1 ? Matrix(rom.R.middleCols(rom.m, rom.m)) : Matrix(rom.P * rom.b));
  for (int j = 2; j < steps; ++j) u.push_back(2.0 * (rom.P * u[j - 1]) - u[j - 2]);
  return u;
}

DataCube rom_predict_data(const Rom& rom, int nsteps) {
  DataCube d(rom.m, nsteps, rom.tau);
  Matrix prev = rom.b;
  Matrix cur = rom.P * rom.b;
  for (int j = 0; j < nsteps; ++j) {
    const Matrix& u = j == 0 ? prev : cur;
    d.D[j] = rom.b.transpose() * u;
    symmetrize(d.D[j]);
    if (j >= 1) {
      Matrix next = 2.0 * (rom.P * cur) - prev;
      prev = std::move(cur);
      cur = std::move(next);
    }
  }
  return d;
}

Matrix dual_rom_snapshots(const Rom& rom) {
  const int n = rom.n;
  const int m = rom.m;
  // Chebyshev snapshots u_j = T_j(P) b.
  std::vector<Matrix> u;
  u.push_back(rom.b);
  if (n > 1) u.push_back(rom.P * rom.b);
  for (int j = 2; j < n; ++j) u.push_back(2.0 * (rom.P * u[j - 1]) - u[j - 2]);
  Matrix Rh(n * m, n * m);
  const Matrix Lt = rom.L.transpose();
  Matrix uh = (0.5 * rom.tau) * (Lt * rom.b);
  Rh.leftCols(m) = uh;
  for (int j = 1; j < n; ++j) {
    uh += rom.tau * (Lt * u[j]);
    Rh.middleCols(j * m, m) = uh;
  }
  return Rh;
}

Rom orthogonal_transform(const Rom& rom, const Matrix& Y) {
  const int n = rom.n;
  const int m = rom.m;
  if (Y.rows() != n * m || Y.cols() != n * m) throw ArgumentError("Y has the wrong size");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto blk = Y.block(i * m, j * m, m, m);
      if (i != j) {
        if (blk.cwiseAbs().maxCoeff() > 1e-12) throw ArgumentError("Y is not block diagonal");
      } else if ((blk.transpose() * blk - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-12) {
        std::ostringstream msg;
        msg << "diagonal block " << i << " of Y is not orthogonal";
        throw ArgumentError(msg.str());
      }
    }
  }
  Rom out = rom;
  out.P = Y.transpose() * rom.P * Y;
  symmetrize(out.P);
  out.b = Y.transpose() * rom.b;
  out.R = Y.transpose() * rom.R;
  out.L = rom_wave_factor(out.P, rom.tau, m, &out.wave_factor_clipped);
  return out;
}

double off_tridiagonal_ratio(const Matrix& P, int m) {
  const int n = static_cast<int>(P.rows()) / m;
  double off = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (std::abs(i - j) >= 2) off += P.block(i * m, j * m, m, m).squaredNorm();
    }
  }
  const double total = P.norm();
  return total > 0.0 ? std::sqrt(off) / total : 0.0;
}

double lower_block_ratio(const Matrix& X, int m) {
  const int n = static_cast<int>(X.rows()) / m;
  double low = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) low += X.block(i * m, j * m, m, m).squaredNorm();
  }
  const double total = X.norm();
  return total > 0.0 ? std::sqrt(low) / total : 0.0;
}

RomInvariants check_rom(const Rom& rom, const DataCube& data) {
  RomInvariants inv;
  const int N = rom.n * rom.m;
  const DataCube pred = rom_predict_data(rom, data.nsteps);
  double misfit = 0.0;
  for (int j = 0; j < data.nsteps; ++j) misfit = std::max(misfit, (pred.D[j] - data.D[j]).norm());
  const double scale = data.max_norm();
  inv.data_fit = scale > 0.0 ? misfit / scale : misfit;
  inv.off_tridiagonal = off_tridiagonal_ratio(rom.P, rom.m);
  const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(rom.P, Eigen::EigenvaluesOnly).eigenvalues();
  inv.spectrum_min = ev.minCoeff();
  inv.spectrum_max = ev.maxCoeff();
  const Matrix IminusP = Matrix::Identity(N, N) - rom.P;
  inv.min_eig_I_minus_P =
      Eigen::SelfAdjointEigenSolver<Matrix>(IminusP, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  const Matrix B = (2.0 / (rom.tau * rom.tau)) * IminusP;
  inv.factor_residual = (rom.L * rom.L.transpose() - B).norm() / B.norm();
  inv.dual_lower = lower_block_ratio(dual_rom_snapshots(rom), rom.m);
  try {
    const LanczosSteps steps = extract_lanczos_steps(rom, data.D[0]);
    inv.lanczos_residual = (reconstruct_wave_factor(steps) - rom.L).norm() / rom.L.norm();
  } catch (const ExtractionError&) {
    inv.lanczos_residual = std::numeric_limits<double>::infinity();
  }
  const double bn = rom.b.norm();
  inv.b_rom_tail = bn > 0.0 && rom.n > 1 ? rom.b.bottomRows(N - rom.m).norm() / bn : 0.0;
  return inv;
}

}  // namespace romscat
