// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "romscat/linalg.hpp"

namespace romscat {

struct LinearProgramResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  Vector x;
  double objective = 0.0;
  int pivots = 0;
};

/// min c^T x subject to A x <= b, x >= 0. Dense two-phase tableau simplex
/// with Bland's rule, so the result is deterministic.
LinearProgramResult solve_linear_program(const Vector& c, const Matrix& A, const Vector& b);

}  // namespace romscat
