// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "romscat/data_cube.hpp"
#include "romscat/grid.hpp"
#include "romscat/linalg.hpp"
#include "romscat/pulse.hpp"

namespace romscat {

/// Staggered finite-difference realization of the first-order operators.
///
/// Scalars live at cell centres, vectors on cell faces. Lt maps cells to
/// faces and is the discrete L(q)^T; L is its exact transpose and A = L Lt.
/// The top face row (z = 0) is sound hard and is simply absent; bottom and
/// side faces are sound soft (zero ghost value beyond the boundary).
struct DiscreteOperators {
  Grid2D grid;
  SparseMatrix Lt;
  SparseMatrix L;
  SparseMatrix A;
  double c_ref = 1.0;
  double c_max = 1.0;
};

DiscreteOperators assemble_operators(const Medium& medium);

struct SensorFunctions {
  /// grid cells x m, column s is b^(s).
  Matrix b;
  /// Upper end of the Chebyshev interval.
  double interval = 0.0;
  int cheb_order = 0;
};

/// Largest eigenvalue estimate of A by 50 power iterations from a fixed
/// checkerboard start.
double estimate_spectral_radius(const SparseMatrix& A, const Grid2D& grid, int iterations = 50);

/// b^(s) = p(A) delta_s with p the Chebyshev interpolant of
/// theta -> s(sqrt(theta)) on [0, 1.05 lambda_max].
SensorFunctions sensor_functions(const DiscreteOperators& ops, const ArrayGeometry& array,
                                 const Pulse& pulse, int cheb_order = 256);

/// Smallest substep count meeting dt <= 0.5 h / max(c).
int required_substeps(const DiscreteOperators& ops, double tau);

/// Leapfrog for u'' + A u = 0, u(0) = b, u'(0) = 0. Returns u at t = j tau for
/// j = 0..count-1.
std::vector<Matrix> simulate_snapshots(const DiscreteOperators& ops, const Matrix& b, double tau,
                                       int count, int substeps);

/// D_j = h^d b^T u_j, symmetrized. If `asymmetry` is given it receives the
/// largest ||D_j - D_j^T|| / ||D_j|| seen before symmetrization.
DataCube record_data(const Matrix& b, const std::vector<Matrix>& snapshots, double weight,
                     double tau, double* asymmetry = nullptr);

/// simulate_snapshots followed by record_data without storing the snapshots.
DataCube simulate_data(const DiscreteOperators& ops, const Matrix& b, double tau, int nsteps,
                       int substeps, double* asymmetry = nullptr);

/// Adds symmetric white Gaussian noise of standard deviation level * rms(data).
DataCube add_noise(const DataCube& data, double level, std::uint64_t seed);

}  // namespace romscat
