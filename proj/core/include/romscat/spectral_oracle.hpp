// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "romscat/data_cube.hpp"
#include "romscat/grid.hpp"
#include "romscat/linalg.hpp"

namespace romscat {

/// Dense symmetric operator with its eigendecomposition. Small problems only.
class DenseOperator {
 public:
  static constexpr int kMaxDof = 2000;

  /// Throws NumericalError above kMaxDof or when an eigenvalue is below
  /// -1e-10 lambda_max.
  explicit DenseOperator(const Matrix& A);
  explicit DenseOperator(const SparseMatrix& A);

  int size() const { return static_cast<int>(values_.size()); }
  const Matrix& matrix() const { return A_; }
  const Vector& eigenvalues() const { return values_; }
  const Matrix& eigenvectors() const { return vectors_; }

  /// Y f(Lambda) Y^T, with negative round-off eigenvalues set to zero.
  Matrix apply_function(const std::function<double(double)>& f) const;

 private:
  Matrix A_;
  Vector values_;
  Matrix vectors_;
};

/// P = cos(tau sqrt(A)).
Matrix dense_propagator(const DenseOperator& A, double tau);

/// T_0(P) b .. T_{count-1}(P) b by the three-term recursion.
std::vector<Matrix> chebyshev_snapshots(const Matrix& P, const Matrix& b, int count);

/// D_j = weight * b^T T_j(P) b. Requires ||P||_2 <= 1 + 1e-8.
DataCube chebyshev_data(const Matrix& P, const Matrix& b, int nsteps, double weight = 1.0,
                        double tau = 0.0);

using DataPipeline = std::function<DataCube(const Field& q)>;

/// D(0) + [D(eps q) - D(0)] / eps.
DataCube oracle_born_data(const DataPipeline& pipeline, const Field& q, double eps = 1e-3);

}  // namespace romscat
