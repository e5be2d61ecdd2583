// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "romscat/data_cube.hpp"
#include "romscat/linalg.hpp"

namespace romscat {

struct GramPair {
  Matrix M;
  Matrix S;
  int n = 0;
  int m = 0;
  double tau = 0.0;
};

/// Block (i, j) = (D_{i+j} + D_{|i-j|}) / 2. Throws on odd nsteps.
Matrix mass_matrix(const DataCube& data);
/// Block (i, j) = (D_{i+j+1} + D_{|i-j+1|} + D_{|i+j-1|} + D_{|i-j-1|}) / 4.
Matrix stiffness_matrix(const DataCube& data);
GramPair gram_from_data(const DataCube& data);

struct RegularizationReport {
  int clipped = 0;
  /// Condition number of M before clipping (infinity if not positive).
  double condition = 1.0;
  double floor = 0.0;
};

/// Spectral clipping of M: eigenvalues below rel_tol * max are raised to that
/// floor. S is returned unchanged.
GramPair regularize_gram(const GramPair& gram, double rel_tol, RegularizationReport* report = nullptr);

/// M = R^T R with R block upper triangular and every diagonal block upper
/// triangular with positive diagonal. Throws FactorizationError naming the
/// failing block.
Matrix block_cholesky(const Matrix& M, int m);

struct Rom {
  int n = 0;
  int m = 0;
  double tau = 0.0;
  Matrix R;
  Matrix P;
  Matrix b;
  Matrix L;
  RegularizationReport regularization;
  /// Eigenvalues of (2/tau^2)(I - P) raised to the factorization floor.
  int wave_factor_clipped = 0;
};

Rom rom_build(const DataCube& data, double rel_tol = 0.0);

/// Block lower bidiagonal L with (2/tau^2)(I - P) = L L^T. Eigenvalues below
/// 1e-13 max are raised to that floor; ones below -1e-8 max throw.
Matrix rom_wave_factor(const Matrix& P, double tau, int m, int* clipped = nullptr);

/// u_0 = b, u_1 = R e_1 (P b when n = 1), u_{j+1} = 2 P u_j - u_{j-1}.
std::vector<Matrix> rom_timestep(const Rom& rom, int steps);
/// b^T T_j(P) b for j < nsteps.
DataCube rom_predict_data(const Rom& rom, int nsteps);
/// R_hat = (u_hat_0 .. u_hat_{n-1}).
Matrix dual_rom_snapshots(const Rom& rom);

struct LanczosSteps {
  std::vector<Matrix> Gamma;
  std::vector<Matrix> GammaHat;
  std::vector<Matrix> gamma;
  std::vector<Matrix> gammaHat;
};

/// Coefficients Gamma_j, GammaHat_j of the block finite-difference form of L.
LanczosSteps extract_lanczos_steps(const Matrix& L, const Matrix& b_gram, int m);
LanczosSteps extract_lanczos_steps(const Rom& rom, const Matrix& b_gram);
/// Rebuilds the block bidiagonal L from the coefficients.
Matrix reconstruct_wave_factor(const LanczosSteps& steps);

/// P' = Y^T P Y, b' = Y^T b, R' = Y^T R, L recomputed. Y block diagonal with
/// orthogonal blocks.
Rom orthogonal_transform(const Rom& rom, const Matrix& Y);

/// Diagnostics used by the invariant checks.
struct RomInvariants {
  double data_fit = 0.0;         // max_j ||Dhat_j - D_j|| / max_j ||D_j||
  double off_tridiagonal = 0.0;  // ||P outside block band||_F / ||P||_F
  double spectrum_min = 0.0;
  double spectrum_max = 0.0;
  double min_eig_I_minus_P = 0.0;
  double factor_residual = 0.0;  // ||L L^T - (2/tau^2)(I - P)|| / ||.||
  double dual_lower = 0.0;       // lower block mass of R_hat / ||R_hat||
  double lanczos_residual = 0.0;  // infinite when a singular block stops the extraction
  double b_rom_tail = 0.0;       // ||b rows below first block|| / ||b||
};

RomInvariants check_rom(const Rom& rom, const DataCube& data);

double off_tridiagonal_ratio(const Matrix& P, int m);
double lower_block_ratio(const Matrix& X, int m);

}  // namespace romscat
