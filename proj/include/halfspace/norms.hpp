// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <span>
#include <vector>

#include "halfspace/collision.hpp"
#include "halfspace/phase_grid.hpp"

namespace halfspace {

enum class VelocityWeight { One, InvSqrtM, InvM, Stretched };

/// Weighted Lebesgue norm  || f (<x1> + <v>)^k omega(v) ||_{L^p_{x,v}}.
struct WeightSpec {
  double p = 1.0;  // in [1, inf]; infinity selects the sup norm
  int k = 0;       // -1, 0 or 1
  VelocityWeight omega = VelocityWeight::One;
  double r = 0.0;  // Stretched: omega = exp(r <v>^s)
  double s = 0.0;
  double cap = 1e30;

  static WeightSpec lp(double p, int k = 0, VelocityWeight omega = VelocityWeight::One) {
    return WeightSpec{p, k, omega};
  }
  static constexpr double infinity() { return std::numeric_limits<double>::infinity(); }

  /// Throws ConfigError for p < 1, k outside {-1,0,1} or a non-admissible
  /// stretched exponent pair.
  void validate() const;
  /// Multiplier at (x, v); throws NumericalError above the cap.
  double evaluate(double x, double v, double equilibrium) const;
};

/// Discrete weighted norm by cell-volume quadrature (max over nodes for
/// p = infinity). `equilibrium` supplies M at the velocity nodes for the
/// M-dependent weights.
double weighted_norm(const DistributionField& f, const WeightSpec& w,
                     std::span<const double> equilibrium);

struct Moments {
  std::vector<double> rho;   // int f dv per cell
  std::vector<double> iota;  // int v1 f dv per cell
  double mass = 0.0;
  double first_x_moment = 0.0;  // int x1 rho dx
  double signed_moment = 0.0;   // int (x + v) f dx dv
};

Moments moments(const DistributionField& f);

/// ||f||^2 in L^2(M^{-1}).
double l2_Minv_squared(const DistributionField& f, std::span<const double> equilibrium);

}  // namespace halfspace
