// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include "romscat/forward_model.hpp"

#include "romscat/error.hpp"

namespace romscat {

ForwardModel::ForwardModel(ForwardSetup setup) : setup_(std::move(setup)) {
  const Grid2D& g = setup_.c.grid();
  if (setup_.nsteps < 1) throw ArgumentError("nsteps must be at least 1");
  if (!(setup_.tau > 0.0)) throw ArgumentError("tau must be positive");
  setup_.array.validate(g);
  ops0_ = assemble_operators(Medium(setup_.c, Field(g, 0.0)));
  substeps_ = setup_.substeps > 0 ? setup_.substeps : required_substeps(ops0_, setup_.tau);
  sensors_ = sensor_functions(ops0_, setup_.array, setup_.pulse, setup_.cheb_order);
}

DiscreteOperators ForwardModel::operators(const Field& q) const {
  if (!(q.grid() == grid())) throw ArgumentError("reflectivity grid differs from the model grid");
  return assemble_operators(Medium(setup_.c, q));
}

DataCube ForwardModel::data(const Field& q, double* asymmetry) const {
  return simulate_data(operators(q), sensors_.b, setup_.tau, setup_.nsteps, substeps_, asymmetry);
}

std::vector<Matrix> ForwardModel::snapshots(const Field& q, int count) const {
  return simulate_snapshots(operators(q), sensors_.b, setup_.tau, count, substeps_);
}

}  // namespace romscat
