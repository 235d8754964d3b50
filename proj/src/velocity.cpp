// SPDX-License-Identifier: Apache-2.0

#include "halfspace/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "halfspace/errors.hpp"

namespace halfspace {

namespace {

void require_nodes(std::size_t nodes) {
  if (nodes == 0) throw ConfigError("velocity domain needs at least one node");
}

}  // namespace

VelocityDomain VelocityDomain::ball(double radius, std::size_t nodes) {
  require_nodes(nodes);
  if (!(radius > 0.0)) throw ConfigError("ball radius must be positive");
  VelocityDomain d;
  d.kind_ = VelocityKind::Ball;
  d.extent_ = radius;
  d.spacing_ = 2.0 * radius / static_cast<double>(nodes);
  d.v_.resize(nodes);
  d.w_.assign(nodes, d.spacing_);
  for (std::size_t j = 0; j < nodes; ++j)
    d.v_[j] = -radius + (static_cast<double>(j) + 0.5) * d.spacing_;
  return d;
}

VelocityDomain VelocityDomain::real_line(double v_max, std::size_t nodes) {
  VelocityDomain d = ball(v_max, nodes);
  d.kind_ = VelocityKind::RealLine;
  return d;
}

VelocityDomain VelocityDomain::circle(std::size_t nodes) {
  require_nodes(nodes);
  VelocityDomain d;
  d.kind_ = VelocityKind::Circle;
  d.extent_ = 1.0;
  d.spacing_ = 2.0 * std::numbers::pi / static_cast<double>(nodes);
  d.v_.resize(nodes);
  d.theta_.resize(nodes);
  d.w_.assign(nodes, d.spacing_);
  for (std::size_t j = 0; j < nodes; ++j) {
    d.theta_[j] = d.spacing_ * static_cast<double>(j);
    d.v_[j] = std::cos(d.theta_[j]);
  }
  return d;
}

double VelocityDomain::max_speed() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

double VelocityDomain::measure() const { return std::accumulate(w_.begin(), w_.end(), 0.0); }

}  // namespace halfspace
