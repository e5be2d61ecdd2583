// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace romscat {

/// Uniform square grid. x is cross-range (columns), z is range (rows); z = 0
/// is the accessible boundary where the array sits. nx == 1 is the 1D case.
struct Grid2D {
  int nx = 1;
  int nz = 2;
  double h = 1.0;
  double origin_x = 0.0;
  double origin_z = 0.0;

  Grid2D() = default;
  Grid2D(int nx, int nz, double h, double origin_x = 0.0, double origin_z = 0.0);

  int size() const { return nx * nz; }
  int dim() const { return nx == 1 ? 1 : 2; }
  /// Quadrature weight h^d of one cell.
  double cell_weight() const;
  int index(int ix, int iz) const { return iz * nx + ix; }
  double x(int ix) const { return origin_x + ix * h; }
  double z(int iz) const { return origin_z + iz * h; }

  bool operator==(const Grid2D&) const = default;
};

/// Scalar field on a grid, stored range-major (index = iz * nx + ix).
class Field {
 public:
  Field() = default;
  explicit Field(const Grid2D& grid, double value = 0.0);
  Field(const Grid2D& grid, std::vector<double> values);

  const Grid2D& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& at(int ix, int iz) { return values_[grid_.index(ix, iz)]; }
  double at(int ix, int iz) const { return values_[grid_.index(ix, iz)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double min() const;
  double max() const;
  /// Sum of |value|^2 times the cell weight, square-rooted.
  double l2_norm() const;

  bool operator==(const Field&) const = default;

 private:
  Grid2D grid_;
  std::vector<double> values_;
};

/// q = ln sqrt(sigma), pointwise. Throws DomainError naming the first
/// non-positive cell.
Field reflectivity_from_impedance(const Field& sigma);

/// sigma = exp(2 q), pointwise.
Field impedance_from_reflectivity(const Field& q);

/// Known kinematic model c together with the reflectivity q.
struct Medium {
  Field c;
  Field q;

  Medium() = default;
  Medium(Field c, Field q);

  static Medium homogeneous(const Grid2D& grid, double c0);
  static Medium from_impedance(Field c, const Field& sigma);

  const Grid2D& grid() const { return c.grid(); }
  Field sigma() const { return impedance_from_reflectivity(q); }
  Medium with_reflectivity(Field q_new) const;
};

struct SensorPosition {
  int ix = 0;
  int iz = 0;
  bool operator==(const SensorPosition&) const = default;
};

/// Sensors placed on one grid row next to the accessible boundary.
struct ArrayGeometry {
  std::vector<SensorPosition> positions;
  int pitch = 1;

  int m() const { return static_cast<int>(positions.size()); }

  /// m sensors centred in cross-range on row `row`, `pitch` cells apart.
  static ArrayGeometry linear(const Grid2D& grid, int m, int pitch, int row);
  /// Throws ArgumentError if a sensor is outside the grid or duplicated.
  void validate(const Grid2D& grid) const;
};

/// True if q vanishes at every cell whose range lies within `depth` (length
/// units) of the array row, i.e. the medium is known near the sensors.
bool collar_is_clear(const Field& q, const ArrayGeometry& array, double depth);

}  // namespace romscat
