// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include "romscat/grid.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "romscat/error.hpp"

namespace romscat {

Grid2D::Grid2D(int nx_, int nz_, double h_, double ox, double oz)
    : nx(nx_), nz(nz_), h(h_), origin_x(ox), origin_z(oz) {
  if (nx < 1 || nz < 2 || !(h > 0.0)) {
    std::ostringstream msg;
    msg << "invalid grid: nx=" << nx << " nz=" << nz << " h=" << h;
    throw ArgumentError(msg.str());
  }
}

double Grid2D::cell_weight() const { return dim() == 1 ? h : h * h; }

Field::Field(const Grid2D& grid, double value)
    : grid_(grid), values_(static_cast<std::size_t>(grid.size()), value) {}

Field::Field(const Grid2D& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(grid.size())) {
    throw ArgumentError("field length does not match grid size");
  }
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

double Field::l2_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s * grid_.cell_weight());
}

Field reflectivity_from_impedance(const Field& sigma) {
  Field q(sigma.grid());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (!(sigma[i] > 0.0)) {
      const int nx = sigma.grid().nx;
      std::ostringstream msg;
      msg << "impedance must be positive; cell (ix=" << static_cast<int>(i) % nx
          << ", iz=" << static_cast<int>(i) / nx << ") has value " << sigma[i];
      throw DomainError(msg.str());
    }
    q[i] = std::log(std::sqrt(sigma[i]));
  }
  return q;
}

Field impedance_from_reflectivity(const Field& q) {
  Field sigma(q.grid());
  for (std::size_t i = 0; i < q.size(); ++i) sigma[i] = std::exp(2.0 * q[i]);
  return sigma;
}

Medium::Medium(Field c_, Field q_) : c(std::move(c_)), q(std::move(q_)) {
  if (!(c.grid() == q.grid())) throw ArgumentError("c and q live on different grids");
  if (!(c.min() > 0.0)) throw DomainError("wave speed must be positive everywhere");
}

Medium Medium::homogeneous(const Grid2D& grid, double c0) {
  return Medium(Field(grid, c0), Field(grid, 0.0));
}

Medium Medium::from_impedance(Field c, const Field& sigma) {
  return Medium(std::move(c), reflectivity_from_impedance(sigma));
}

Medium Medium::with_reflectivity(Field q_new) const { return Medium(c, std::move(q_new)); }

ArrayGeometry ArrayGeometry::linear(const Grid2D& grid, int m, int pitch, int row) {
  if (m < 1 || pitch < 1) throw ArgumentError("array needs m >= 1 and pitch >= 1");
  ArrayGeometry a;
  a.pitch = pitch;
  const int span = (m - 1) * pitch;
  const int first = (grid.nx - 1 - span) / 2;
  for (int s = 0; s < m; ++s) a.positions.push_back({first + s * pitch, row});
  a.validate(grid);
  return a;
}

void ArrayGeometry::validate(const Grid2D& grid) const {
  if (positions.empty()) throw ArgumentError("array has no sensors");
  std::set<std::pair<int, int>> seen;
  for (const auto& p : positions) {
    if (p.ix < 0 || p.ix >= grid.nx || p.iz < 0 || p.iz >= grid.nz) {
      std::ostringstream msg;
      msg << "sensor (" << p.ix << ", " << p.iz << ") lies outside the "
          << grid.nx << "x" << grid.nz << " grid";
      throw ArgumentError(msg.str());
    }
    if (!seen.insert({p.ix, p.iz}).second) throw ArgumentError("duplicate sensor position");
  }
}

bool collar_is_clear(const Field& q, const ArrayGeometry& array, double depth) {
  const Grid2D& g = q.grid();
  int row = 0;
  for (const auto& p : array.positions) row = std::max(row, p.iz);
  const int last = std::min(g.nz - 1, row + static_cast<int>(std::floor(depth / g.h)));
  for (int iz = 0; iz <= last; ++iz) {
    for (int ix = 0; ix < g.nx; ++ix) {
      if (q.at(ix, iz) != 0.0) return false;
    }
  }
  return true;
}

}  // namespace romscat
