// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "romscat/grid.hpp"

namespace romscat {

/// Adds `value` to q on the cells with x in [x0, x1] and z in [z0, z1].
void add_box(Field& q, double x0, double x1, double z0, double z1, double value);

/// Three rectangular inclusions below the collar.
Field phantom_boxes(const Grid2D& grid, double collar, double contrast = 0.2);

/// Thin slanted low-impedance strips below the collar.
Field phantom_fractures(const Grid2D& grid, double collar, double contrast = 0.2);
/// Smooth wave speed increasing with range, used with the fractures phantom.
Field fractures_speed(const Grid2D& grid, double c0);

/// Piecewise constant in range: values[k] on [depths[k], depths[k+1]) with
/// depths.size() == values.size() + 1.
Field layered(const Grid2D& grid, const std::vector<double>& depths, const std::vector<double>& values);

/// "homogeneous", "boxes" or "fractures".
Field make_phantom(const std::string& name, const Grid2D& grid, double collar, double contrast);

}  // namespace romscat
