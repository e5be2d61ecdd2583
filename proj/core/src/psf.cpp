// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "romscat/inversion.hpp"

namespace romscat {

Field psf_bump(const Grid2D& grid, double x, double z, double diameter, double amplitude, bool* clipped) {
  if (!(diameter > 0.0)) throw ArgumentError("bump diameter must be positive");
  const double r = 0.5 * diameter;
  Field f(grid, 0.0);
  double mass = 0.0;
  for (int iz = 0; iz < grid.nz; ++iz) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const double d = grid.dim() == 1 ? std::abs(grid.z(iz) - z)
                                       : std::hypot(grid.x(ix) - x, grid.z(iz) - z);
      const double v = std::max(0.0, 1.0 - d / r);
      f.at(ix, iz) = v;
      mass += v;
    }
  }
  mass *= grid.cell_weight();
  if (clipped) {
    const double half = 0.5 * grid.h;
    bool cut = z - r < grid.z(0) - half || z + r > grid.z(grid.nz - 1) + half;
    if (grid.dim() == 2) cut = cut || x - r < grid.x(0) - half || x + r > grid.x(grid.nx - 1) + half;
    *clipped = cut;
  }
  if (mass == 0.0) throw ArgumentError("bump does not cover any grid cell");
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= amplitude / mass;
  return f;
}

Field psf_from_wave_factor(const ReferenceProjection& ref, const Grid2D& grid, const Matrix& dL) {
  const Matrix W = ref.V0 * dL;
  const Vector norms = W.rowwise().norm();
  return Field(grid, std::vector<double>(norms.data(), norms.data() + norms.size()));
}

PsfField point_spread(const ReferenceProjection& ref, const ForwardModel& model, double x, double z,
                      double amplitude, double rel_tol) {
  PsfField out;
  out.x = x;
  out.z = z;
  const Field bump = psf_bump(model.grid(), x, z, 0.5 * model.wavelength(), amplitude, &out.clipped);
  const Rom rom = rom_build(model.data(bump), rel_tol);
  out.psi = psf_from_wave_factor(ref, model.grid(), rom.L - ref.rom0.L);
  return out;
}

double cross_range_second_moment(const Field& f, double x, double z, double level) {
  const Grid2D& g = f.grid();
  const int iz = std::clamp(static_cast<int>(std::lround((z - g.origin_z) / g.h)), 0, g.nz - 1);
  int lo = 0;
  int hi = g.nx - 1;
  if (level > 0.0) {
    int peak = 0;
    for (int ix = 1; ix < g.nx; ++ix) {
      if (f.at(ix, iz) > f.at(peak, iz)) peak = ix;
    }
    const double cut = level * f.at(peak, iz);
    lo = peak;
    hi = peak;
    while (lo > 0 && f.at(lo - 1, iz) >= cut) --lo;
    while (hi + 1 < g.nx && f.at(hi + 1, iz) >= cut) ++hi;
  }
  double mass = 0.0;
  double moment = 0.0;
  for (int ix = lo; ix <= hi; ++ix) {
    const double v = f.at(ix, iz);
    const double d = g.x(ix) - x;
    mass += v;
    moment += v * d * d;
  }
  return mass > 0.0 ? moment / mass : 0.0;
}

}  // namespace romscat
