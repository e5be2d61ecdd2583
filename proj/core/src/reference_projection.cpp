// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include "romscat/inversion.hpp"

namespace romscat {

ReferenceProjection reference_projection(const ForwardModel& model, double rel_tol) {
  if (model.nsteps() % 2 != 0) throw ArgumentError("reference projection needs 2n recorded steps");
  const int n = model.nsteps() / 2;
  const int m = model.m();
  const Field zero(model.grid(), 0.0);
  ReferenceProjection ref;
  ref.weight = model.grid().cell_weight();
  const auto snaps = model.snapshots(zero, n);
  ref.U0.resize(model.grid().size(), static_cast<Eigen::Index>(n) * m);
  for (int j = 0; j < n; ++j) ref.U0.middleCols(j * m, m) = snaps[j];
  ref.data0 = model.data(zero);
  ref.rom0 = rom_build(ref.data0, rel_tol);
  // V0 = U0 R0^{-1}, i.e. V0^T = R0^{-T} U0^T.
  const Matrix Rt = ref.rom0.R.transpose();
  ref.V0 = Rt.triangularView<Eigen::Lower>().solve(ref.U0.transpose()).transpose();
  return ref;
}

}  // namespace romscat
