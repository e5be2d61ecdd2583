// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include "romscat/rom.hpp"

#include <sstream>

#include "romscat/error.hpp"

namespace romscat {

namespace {

Matrix checked_inverse(const Matrix& X, int index, const char* what) {
  Eigen::FullPivLU<Matrix> lu(X);
  if (!lu.isInvertible()) {
    std::ostringstream msg;
    msg << "singular " << what << " block at step " << index;
    throw ExtractionError(msg.str(), index);
  }
  return lu.inverse();
}

}  // namespace

LanczosSteps extract_lanczos_steps(const Matrix& L, const Matrix& b_gram, int m) {
  if (m < 1 || L.rows() != L.cols() || L.rows() % m != 0) throw ArgumentError("bad wave factor size");
  if (b_gram.rows() != m || b_gram.cols() != m) throw ArgumentError("<b, b> must be m x m");
  const int n = static_cast<int>(L.rows()) / m;
  LanczosSteps out;
  // gammaHat_0 = <b,b>^{-1} = GammaHat_0 GammaHat_0^T with GammaHat_0 = R00^{-1}
  // upper triangular, where <b,b> = R00^T R00.
  Matrix g = b_gram;
  symmetrize(g);
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) throw ExtractionError("<b, b> is not positive definite", 0);
  const Matrix R00 = llt.matrixU();
  Matrix GammaHat = R00.triangularView<Eigen::Upper>().solve(Matrix::Identity(m, m));
  for (int j = 0; j < n; ++j) {
    const Matrix Ljj = L.block(j * m, j * m, m, m);
    // Gamma_j^{-T} = GammaHat_j L_jj.
    const Matrix GinvT = GammaHat * Ljj;
    const Matrix Gamma = checked_inverse(GinvT, j, "Gamma").transpose();
    out.GammaHat.push_back(GammaHat);
    out.Gamma.push_back(Gamma);
    out.gammaHat.push_back(GammaHat * GammaHat.transpose());
    out.gamma.push_back(Gamma * Gamma.transpose());
    if (j + 1 < n) {
      const Matrix Lsub = L.block((j + 1) * m, j * m, m, m);
      const Matrix GHinv = -Lsub * Gamma.transpose();
      GammaHat = checked_inverse(GHinv, j + 1, "GammaHat");
    }
  }
  return out;
}

LanczosSteps extract_lanczos_steps(const Rom& rom, const Matrix& b_gram) {
  return extract_lanczos_steps(rom.L, b_gram, rom.m);
}

Matrix reconstruct_wave_factor(const LanczosSteps& steps) {
  const int n = static_cast<int>(steps.Gamma.size());
  if (n == 0) return Matrix();
  const int m = static_cast<int>(steps.Gamma[0].rows());
  Matrix L = Matrix::Zero(n * m, n * m);
  for (int j = 0; j < n; ++j) {
    const Matrix GinvT = steps.Gamma[j].transpose().inverse();
    L.block(j * m, j * m, m, m) = steps.GammaHat[j].inverse() * GinvT;
    if (j + 1 < n) L.block((j + 1) * m, j * m, m, m) = -steps.GammaHat[j + 1].inverse() * GinvT;
  }
  return L;
}

}  // namespace romscat
