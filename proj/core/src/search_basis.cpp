// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include "romscat/search_basis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "romscat/error.hpp"

namespace romscat {

namespace {

constexpr double kBaryTol = 1e-12;

double distance(const MeshNode& a, const MeshNode& b) {
  return std::hypot(a.x - b.x, a.z - b.z);
}

/// Strip triangulation between two sorted rows of node indices. For a single
/// quadrilateral this splits along the shorter diagonal; ties go to the node
/// with the lower index.
void zip_rows(const std::vector<MeshNode>& nodes, const std::vector<int>& top,
              const std::vector<int>& bottom, std::vector<Triangle>& out) {
  std::size_t i = 0;
  std::size_t k = 0;
  while (i + 1 < top.size() || k + 1 < bottom.size()) {
    bool advance_top;
    if (i + 1 == top.size()) {
      advance_top = false;
    } else if (k + 1 == bottom.size()) {
      advance_top = true;
    } else {
      const double d_top = distance(nodes[top[i + 1]], nodes[bottom[k]]);
      const double d_bottom = distance(nodes[top[i]], nodes[bottom[k + 1]]);
      if (d_top < d_bottom) {
        advance_top = true;
      } else if (d_bottom < d_top) {
        advance_top = false;
      } else {
        advance_top = top[i + 1] < bottom[k + 1];
      }
    }
    if (advance_top) {
      out.push_back({{top[i], top[i + 1], bottom[k]}});
      ++i;
    } else {
      out.push_back({{top[i], bottom[k + 1], bottom[k]}});
      ++k;
    }
  }
}

}  // namespace

SearchBasis SearchBasis::range_hats(const Grid2D& grid, std::vector<double> depths) {
  if (grid.nx != 1) throw ArgumentError("range_hats needs a 1D grid (nx == 1)");
  if (depths.empty()) throw ArgumentError("search basis needs at least one node");
  for (std::size_t i = 1; i < depths.size(); ++i) {
    if (!(depths[i] > depths[i - 1])) throw ArgumentError("1D node depths must increase");
  }
  SearchBasis b;
  b.grid_ = grid;
  b.active_ = static_cast<int>(depths.size());
  const double x0 = grid.x(0);
  for (double z : depths) b.nodes_.push_back({x0, z});
  const double top_gap = depths.size() > 1 ? depths[1] - depths[0] : grid.h;
  const double bottom_gap =
      depths.size() > 1 ? depths.back() - depths[depths.size() - 2] : grid.h;
  b.nodes_.push_back({x0, depths.front() - top_gap});
  b.nodes_.push_back({x0, depths.back() + bottom_gap});
  b.build_interpolation();
  return b;
}

SearchBasis SearchBasis::from_rows(const Grid2D& grid, const std::vector<double>& ranges,
                                   const std::vector<std::vector<double>>& xs,
                                   double lateral_pad) {
  if (grid.nx < 2) throw ArgumentError("from_rows needs a 2D grid");
  if (ranges.empty() || ranges.size() != xs.size()) {
    throw ArgumentError("from_rows: one cross-range list per range line is required");
  }
  for (std::size_t r = 1; r < ranges.size(); ++r) {
    if (!(ranges[r] > ranges[r - 1])) throw ArgumentError("range lines must increase");
  }
  SearchBasis b;
  b.grid_ = grid;

  std::vector<std::vector<double>> rows = xs;
  for (auto& row : rows) {
    if (row.empty()) throw ArgumentError("every range line needs at least one node");
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }

  // Active nodes, row by row.
  std::vector<std::vector<int>> full(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (double x : rows[r]) {
      full[r].push_back(static_cast<int>(b.nodes_.size()));
      b.nodes_.push_back({x, ranges[r]});
    }
  }
  b.active_ = static_cast<int>(b.nodes_.size());

  auto add_ghost = [&b](double x, double z) {
    b.nodes_.push_back({x, z});
    return static_cast<int>(b.nodes_.size()) - 1;
  };

  // Lateral ghosts close every row.
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const double left_gap = row.size() > 1 ? row[1] - row[0] : lateral_pad;
    const double right_gap = row.size() > 1 ? row.back() - row[row.size() - 2] : lateral_pad;
    const int left = add_ghost(row.front() - left_gap, ranges[r]);
    const int right = add_ghost(row.back() + right_gap, ranges[r]);
    full[r].insert(full[r].begin(), left);
    full[r].push_back(right);
  }

  // Ghost range lines above the first and below the last row.
  const double top_gap = ranges.size() > 1 ? ranges[1] - ranges[0] : lateral_pad;
  const double bottom_gap =
      ranges.size() > 1 ? ranges.back() - ranges[ranges.size() - 2] : lateral_pad;
  std::vector<int> top_row;
  for (int idx : full.front()) top_row.push_back(add_ghost(b.nodes_[idx].x, ranges.front() - top_gap));
  std::vector<int> bottom_row;
  for (int idx : full.back()) {
    bottom_row.push_back(add_ghost(b.nodes_[idx].x, ranges.back() + bottom_gap));
  }

  zip_rows(b.nodes_, top_row, full.front(), b.triangles_);
  for (std::size_t r = 0; r + 1 < full.size(); ++r) zip_rows(b.nodes_, full[r], full[r + 1], b.triangles_);
  zip_rows(b.nodes_, full.back(), bottom_row, b.triangles_);

  b.build_interpolation();
  return b;
}

SearchBasis SearchBasis::from_mesh(const Grid2D& grid, std::vector<MeshNode> nodes, int active,
                                   std::vector<Triangle> triangles) {
  if (active < 1 || active > static_cast<int>(nodes.size())) {
    throw ArgumentError("active node count out of range");
  }
  for (const auto& t : triangles) {
    for (int v : t.v) {
      if (v < 0 || v >= static_cast<int>(nodes.size())) throw ArgumentError("triangle index out of range");
    }
  }
  if (grid.nx == 1 && !triangles.empty()) throw ArgumentError("1D basis carries no triangles");
  if (grid.nx > 1 && triangles.empty()) throw ArgumentError("2D basis needs triangles");
  SearchBasis b;
  b.grid_ = grid;
  b.nodes_ = std::move(nodes);
  b.active_ = active;
  b.triangles_ = std::move(triangles);
  b.build_interpolation();
  return b;
}

std::vector<std::pair<int, double>> SearchBasis::weights_at(double x, double z) const {
  std::vector<std::pair<int, double>> w;
  if (triangles_.empty()) {
    // 1D: piecewise linear through the depth-sorted nodes.
    std::vector<int> order(nodes_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [this](int a, int b) { return nodes_[a].z < nodes_[b].z; });
    for (std::size_t s = 0; s + 1 < order.size(); ++s) {
      const double z0 = nodes_[order[s]].z;
      const double z1 = nodes_[order[s + 1]].z;
      if (z >= z0 && z <= z1) {
        const double t = (z - z0) / (z1 - z0);
        if (order[s] < active_ && t < 1.0) w.emplace_back(order[s], 1.0 - t);
        if (order[s + 1] < active_ && t > 0.0) w.emplace_back(order[s + 1], t);
        return w;
      }
    }
    return w;
  }
  for (const auto& tri : triangles_) {
    const MeshNode& a = nodes_[tri.v[0]];
    const MeshNode& b = nodes_[tri.v[1]];
    const MeshNode& c = nodes_[tri.v[2]];
    const double det = (b.x - a.x) * (c.z - a.z) - (c.x - a.x) * (b.z - a.z);
    if (std::abs(det) < 1e-300) continue;
    const double l1 = ((x - a.x) * (c.z - a.z) - (c.x - a.x) * (z - a.z)) / det;
    const double l2 = ((b.x - a.x) * (z - a.z) - (x - a.x) * (b.z - a.z)) / det;
    const double l0 = 1.0 - l1 - l2;
    if (l0 < -kBaryTol || l1 < -kBaryTol || l2 < -kBaryTol) continue;
    const double lam[3] = {std::max(l0, 0.0), std::max(l1, 0.0), std::max(l2, 0.0)};
    for (int k = 0; k < 3; ++k) {
      if (tri.v[k] < active_ && lam[k] > 0.0) w.emplace_back(tri.v[k], lam[k]);
    }
    return w;
  }
  return w;
}

void SearchBasis::build_interpolation() {
  std::vector<Eigen::Triplet<double>> trips;
  for (int iz = 0; iz < grid_.nz; ++iz) {
    for (int ix = 0; ix < grid_.nx; ++ix) {
      for (const auto& [node, weight] : weights_at(grid_.x(ix), grid_.z(iz))) {
        trips.emplace_back(grid_.index(ix, iz), node, weight);
      }
    }
  }
  interp_ = SparseMatrix(grid_.size(), active_);
  interp_.setFromTriplets(trips.begin(), trips.end());
}

Field SearchBasis::psi(int j) const {
  if (j < 0 || j >= active_) throw ArgumentError("basis index out of range");
  Vector e = Vector::Zero(active_);
  e[j] = 1.0;
  return evaluate(std::span<const double>(e.data(), static_cast<std::size_t>(active_)));
}

Field SearchBasis::evaluate(std::span<const double> coeffs) const {
  if (static_cast<int>(coeffs.size()) != active_) {
    std::ostringstream msg;
    msg << "expected " << active_ << " coefficients, got " << coeffs.size();
    throw ArgumentError(msg.str());
  }
  const Eigen::Map<const Vector> c(coeffs.data(), active_);
  const Vector f = interp_ * c;
  return Field(grid_, std::vector<double>(f.data(), f.data() + f.size()));
}

double SearchBasis::evaluate_at(std::span<const double> coeffs, double x, double z) const {
  if (static_cast<int>(coeffs.size()) != active_) throw ArgumentError("coefficient length mismatch");
  double v = 0.0;
  for (const auto& [node, weight] : weights_at(x, z)) v += weight * coeffs[node];
  return v;
}

Vector SearchBasis::project(const Field& f) const {
  const Matrix dense = Matrix(interp_);
  const Eigen::Map<const Vector> rhs(f.values().data(), static_cast<Eigen::Index>(f.size()));
  return dense.colPivHouseholderQr().solve(rhs);
}

}  // namespace romscat
