// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace halfspace {

/// Diagnostic sample times: 0, then t_first * 10^(k / per_decade) below
/// t_max, then t_max itself. Exact powers of ten are always included.
/// t_max = 0 yields {0}.
std::vector<double> geometric_times(double t_first, double t_max, int per_decade);

}  // namespace halfspace
