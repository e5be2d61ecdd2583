// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include "romscat/phantoms.hpp"

#include <cmath>

#include "romscat/error.hpp"

namespace romscat {

void add_box(Field& q, double x0, double x1, double z0, double z1, double value) {
  const Grid2D& g = q.grid();
  const double eps = 1e-9 * g.h;
  for (int iz = 0; iz < g.nz; ++iz) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double x = g.x(ix);
      const double z = g.z(iz);
      const bool in_x = g.nx == 1 || (x >= x0 - eps && x <= x1 + eps);
      if (in_x && z >= z0 - eps && z <= z1 + eps) q.at(ix, iz) += value;
    }
  }
}

namespace {

struct Extent {
  double x0, width, z0, depth;
};

Extent search_extent(const Grid2D& g, double collar) {
  const double top = g.z(0) + collar;
  const double bottom = g.z(g.nz - 1);
  if (!(bottom > top)) throw ArgumentError("collar leaves no room for a phantom");
  return {g.x(0), g.x(g.nx - 1) - g.x(0), top, bottom - top};
}

}  // namespace

Field phantom_boxes(const Grid2D& g, double collar, double contrast) {
  const Extent e = search_extent(g, collar);
  Field q(g, 0.0);
  const struct {
    double cx, cz, wx, wz, v;
  } boxes[] = {
      {0.30, 0.25, 0.16, 0.10, 1.0},
      {0.65, 0.45, 0.20, 0.08, -0.75},
      {0.45, 0.70, 0.14, 0.12, 1.0},
  };
  for (const auto& b : boxes) {
    const double cx = e.x0 + b.cx * e.width;
    const double cz = e.z0 + b.cz * e.depth;
    add_box(q, cx - 0.5 * b.wx * e.width, cx + 0.5 * b.wx * e.width, cz - 0.5 * b.wz * e.depth,
            cz + 0.5 * b.wz * e.depth, b.v * contrast);
  }
  return q;
}

Field phantom_fractures(const Grid2D& g, double collar, double contrast) {
  const Extent e = search_extent(g, collar);
  Field q(g, 0.0);
  // Each strip: start point, slope dz/dx, length along x, all relative.
  const struct {
    double x, z, slope, len;
  } strips[] = {
      {0.15, 0.30, 0.25, 0.35},
      {0.55, 0.40, -0.30, 0.30},
      {0.30, 0.65, 0.10, 0.45},
  };
  const double half = 1.01 * g.h;
  for (const auto& s : strips) {
    const double xa = e.x0 + s.x * e.width;
    const double xb = xa + s.len * e.width;
    const double za = e.z0 + s.z * e.depth;
    for (int iz = 0; iz < g.nz; ++iz) {
      for (int ix = 0; ix < g.nx; ++ix) {
        const double x = g.x(ix);
        if (g.nx > 1 && (x < xa || x > xb)) continue;
        const double zc = za + s.slope * (g.nx > 1 ? x - xa : 0.0);
        if (std::abs(g.z(iz) - zc) <= half && g.z(iz) >= e.z0) q.at(ix, iz) = -contrast;
      }
    }
  }
  return q;
}

Field fractures_speed(const Grid2D& g, double c0) {
  Field c(g, c0);
  const double depth = g.z(g.nz - 1) - g.z(0);
  for (int iz = 0; iz < g.nz; ++iz) {
    const double t = (g.z(iz) - g.z(0)) / depth;
    for (int ix = 0; ix < g.nx; ++ix) {
      const double s = g.nx > 1 ? (g.x(ix) - g.x(0)) / (g.x(g.nx - 1) - g.x(0)) : 0.5;
      c.at(ix, iz) = c0 * (1.0 + 0.25 * t * t + 0.05 * std::sin(3.0 * s + 2.0 * t));
    }
  }
  return c;
}

Field layered(const Grid2D& g, const std::vector<double>& depths, const std::vector<double>& values) {
  if (depths.size() != values.size() + 1) throw ArgumentError("layered: need one more depth than values");
  Field q(g, 0.0);
  for (std::size_t k = 0; k < values.size(); ++k) {
    for (int iz = 0; iz < g.nz; ++iz) {
      const double z = g.z(iz);
      if (z >= depths[k] && z < depths[k + 1]) {
        for (int ix = 0; ix < g.nx; ++ix) q.at(ix, iz) = values[k];
      }
    }
  }
  return q;
}

Field make_phantom(const std::string& name, const Grid2D& grid, double collar, double contrast) {
  if (name == "homogeneous") return Field(grid, 0.0);
  if (name == "boxes") return phantom_boxes(grid, collar, contrast);
  if (name == "fractures") return phantom_fractures(grid, collar, contrast);
  throw ArgumentError("unknown phantom '" + name + "' (expected homogeneous, boxes or fractures)");
}

}  // namespace romscat
