// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>
#include <vector>

#include "romscat/grid.hpp"
#include "romscat/linalg.hpp"

namespace romscat {

struct MeshNode {
  double x = 0.0;
  double z = 0.0;
  bool operator==(const MeshNode&) const = default;
};

struct Triangle {
  std::array<int, 3> v{};
  bool operator==(const Triangle&) const = default;
};

/// Continuous piecewise linear hat functions psi_j on a non-uniform mesh.
///
/// The mesh carries a ring of ghost nodes (coefficient fixed at zero) around
/// the active nodes so that every psi_j is continuous with compact support.
/// Active nodes come first in `nodes()`, ghosts after them. In 1D (grid.nx
/// == 1) the mesh is a sorted set of depths and there are no triangles.
class SearchBasis {
 public:
  SearchBasis() = default;

  /// 1D hats at the given depths (strictly increasing). Ghost nodes sit one
  /// neighbour spacing beyond each end.
  static SearchBasis range_hats(const Grid2D& grid, std::vector<double> depths);

  /// 2D mesh from range lines: row r sits at depth ranges[r] and carries the
  /// sorted cross-range positions xs[r]. `lateral_pad` is the ghost spacing
  /// used for rows with a single node.
  static SearchBasis from_rows(const Grid2D& grid, const std::vector<double>& ranges,
                               const std::vector<std::vector<double>>& xs,
                               double lateral_pad);

  /// Rebuild from explicit nodes/triangles (file loading).
  static SearchBasis from_mesh(const Grid2D& grid, std::vector<MeshNode> nodes, int active,
                               std::vector<Triangle> triangles);

  const Grid2D& grid() const { return grid_; }
  /// N^S, the number of active nodes.
  int size() const { return active_; }
  const std::vector<MeshNode>& nodes() const { return nodes_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }

  /// psi_j sampled on the grid.
  Field psi(int j) const;
  /// q^S = sum_j coeffs_j psi_j on the grid. Throws ArgumentError on a
  /// length mismatch.
  Field evaluate(std::span<const double> coeffs) const;
  /// Value of sum_j coeffs_j psi_j at an arbitrary point.
  double evaluate_at(std::span<const double> coeffs, double x, double z) const;
  /// Least-squares coefficients of a grid field in the span of the basis.
  Vector project(const Field& f) const;

  /// Sparse (grid cells x N^S) interpolation matrix.
  const SparseMatrix& interpolation() const { return interp_; }

 private:
  void build_interpolation();
  /// Weights of the active nodes at (x, z); empty when outside the mesh.
  std::vector<std::pair<int, double>> weights_at(double x, double z) const;

  Grid2D grid_;
  std::vector<MeshNode> nodes_;
  std::vector<Triangle> triangles_;
  int active_ = 0;
  SparseMatrix interp_;
};

}  // namespace romscat
