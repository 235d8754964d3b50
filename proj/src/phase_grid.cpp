// SPDX-License-Identifier: Apache-2.0

#include "halfspace/phase_grid.hpp"

#include <algorithm>
#include <cmath>

#include "halfspace/errors.hpp"

namespace halfspace {

PhaseGrid::PhaseGrid(double x_max, double dx, VelocityDomain velocity)
    : x_max_(x_max), dx_(dx), nx_(0), velocity_(std::move(velocity)) {
  if (!(dx > 0.0)) throw ConfigError("grid spacing dx must be positive");
  if (!(x_max > dx)) throw ConfigError("x_max must exceed dx");
  const double cells = x_max / dx;
  nx_ = static_cast<std::size_t>(std::llround(cells));
  if (std::abs(cells - static_cast<double>(nx_)) > 1e-9 * cells)
    throw ConfigError("x_max must be an integer multiple of dx");
}

std::size_t PhaseGrid::far_region_begin() const {
  return nx_ - std::max<std::size_t>(1, nx_ / 10);
}

DistributionField::DistributionField(std::shared_ptr<const PhaseGrid> grid, double time)
    : grid_(std::move(grid)), nv_(grid_->nv()), values_(grid_->size(), 0.0), time_(time) {}

DistributionField DistributionField::sample(std::shared_ptr<const PhaseGrid> grid,
                                            const std::function<double(double, double)>& g,
                                            double time) {
  DistributionField f(std::move(grid), time);
  const auto& v = f.grid().velocity().v();
  for (std::size_t i = 0; i < f.grid().nx(); ++i) {
    const double x = f.grid().x(i);
    for (std::size_t j = 0; j < v.size(); ++j) f(i, j) = g(x, v[j]);
  }
  return f;
}

double DistributionField::max_abs() const {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

double DistributionField::min_value() const {
  return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

}  // namespace halfspace
