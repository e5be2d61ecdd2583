// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "romscat/data_cube.hpp"
#include "romscat/grid.hpp"
#include "romscat/pulse.hpp"
#include "romscat/wavesim.hpp"

namespace romscat {

struct ForwardSetup {
  Field c;
  ArrayGeometry array;
  Pulse pulse = Pulse::ricker(0.1);
  double tau = 1.0;
  /// Number of recorded samples, 2n.
  int nsteps = 2;
  /// 0 picks the smallest CFL-stable value.
  int substeps = 0;
  int cheb_order = 256;
};

/// The map q -> DataCube in a fixed kinematic model.
///
/// Sensor functions are built once in the reference medium (q = 0) and reused
/// for every q: the medium next to the array is known, so they do not depend
/// on the unknown reflectivity.
class ForwardModel {
 public:
  explicit ForwardModel(ForwardSetup setup);

  const ForwardSetup& setup() const { return setup_; }
  const Grid2D& grid() const { return setup_.c.grid(); }
  const SensorFunctions& sensors() const { return sensors_; }
  const DiscreteOperators& reference_operators() const { return ops0_; }
  int substeps() const { return substeps_; }
  int m() const { return setup_.array.m(); }
  int nsteps() const { return setup_.nsteps; }
  double tau() const { return setup_.tau; }
  /// Central wavelength in the reference speed.
  double wavelength() const { return setup_.pulse.wavelength(ops0_.c_ref); }

  DataCube data(const Field& q, double* asymmetry = nullptr) const;
  std::vector<Matrix> snapshots(const Field& q, int count) const;

 private:
  DiscreteOperators operators(const Field& q) const;

  ForwardSetup setup_;
  DiscreteOperators ops0_;
  SensorFunctions sensors_;
  int substeps_ = 1;
};

}  // namespace romscat
