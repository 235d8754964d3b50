// SPDX-License-Identifier: Apache-2.0

#include "halfspace/schedule.hpp"

#include <cmath>

#include "halfspace/errors.hpp"

namespace halfspace {

std::vector<double> geometric_times(double t_first, double t_max, int per_decade) {
  if (!(t_max >= 0.0)) throw ConfigError("t_max must be non-negative");
  if (!(t_first > 0.0)) throw ConfigError("first sample time must be positive");
  if (per_decade < 1) throw ConfigError("samples per decade must be at least 1");
  std::vector<double> times{0.0};
  if (t_max == 0.0) return times;
  const double base = std::floor(std::log10(t_first));
  for (long k = 0;; ++k) {
    // snap decade boundaries to exact powers of ten
    const double e = base + static_cast<double>(k) / per_decade;
    const double t = (k % per_decade == 0) ? std::pow(10.0, std::round(e)) : std::pow(10.0, e);
    if (t < t_first * (1.0 - 1e-12)) continue;
    if (t >= t_max * (1.0 - 1e-12)) break;
    times.push_back(t);
  }
  times.push_back(t_max);
  return times;
}

}  // namespace halfspace
