// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "romscat/data_cube.hpp"
#include "romscat/linalg.hpp"
#include "romscat/rom.hpp"

namespace romscat {

struct BornInputs {
  DataCube data_ref;  // simulated with q = 0 in the known kinematic model
  Matrix L_q;         // wave factor from the measured data
  Matrix L_0;         // wave factor from the reference data
  Matrix b_rom0;      // b^ROM of the reference ROM
  double tau = 0.0;
  int n = 0;
  int m = 0;

  static BornInputs from_roms(const DataCube& data_ref, const Rom& rom_ref, const Rom& rom_measured);
};

/// b^T (d/de) T_j(P0 + e dP) b at e = 0 for j = 0..count-1.
std::vector<Matrix> chebyshev_derivative_series(const Matrix& P0, const Matrix& dP, const Matrix& b,
                                                int count);
Matrix chebyshev_directional_derivative(const Matrix& P0, const Matrix& dP, const Matrix& b, int j);

DataCube born_data(const BornInputs& in);

}  // namespace romscat
