// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

namespace romscat {

/// Worker count: ROMSCAT_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
int thread_count();

/// Calls body(i) for i in [0, count) on up to thread_count() threads. Each
/// index runs exactly once; if any call throws, the exception of the lowest
/// failing index is rethrown after all workers finish.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace romscat
