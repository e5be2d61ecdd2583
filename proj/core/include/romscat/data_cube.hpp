// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "romscat/linalg.hpp"

namespace romscat {

/// Time samples D_0..D_{nsteps-1} of the m x m scattering matrix.
struct DataCube {
  int m = 0;
  int nsteps = 0;
  double tau = 0.0;
  std::vector<Matrix> D;

  DataCube() = default;
  DataCube(int m, int nsteps, double tau);

  /// Number of ROM blocks, nsteps / 2.
  int n() const { return nsteps / 2; }
  /// Throws ArgumentError if sizes disagree.
  void validate() const;
  /// Largest Frobenius norm over j.
  double max_norm() const;
  /// Root mean square over all entries.
  double rms() const;

  bool operator==(const DataCube& o) const;
};

}  // namespace romscat
