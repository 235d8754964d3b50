// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace halfspace {

enum class VelocityKind { Ball, RealLine, Circle };

/// Velocity quadrature. `v` holds the first velocity component v1 at each
/// node; for the circle `theta` holds the angle and v1 = cos(theta).
///
/// Ball(radius) and RealLine(v_max) use the midpoint rule on [-R, R];
/// Circle uses the equispaced periodic rule on [0, 2*pi).
class VelocityDomain {
 public:
  static VelocityDomain ball(double radius, std::size_t nodes);
  static VelocityDomain real_line(double v_max, std::size_t nodes);
  static VelocityDomain circle(std::size_t nodes);

  VelocityKind kind() const { return kind_; }
  /// Radius for Ball, truncation V_max for RealLine, 1 for Circle.
  double extent() const { return extent_; }
  std::size_t size() const { return v_.size(); }
  const std::vector<double>& v() const { return v_; }
  const std::vector<double>& weights() const { return w_; }
  const std::vector<double>& theta() const { return theta_; }
  double spacing() const { return spacing_; }
  double max_speed() const;
  /// Sum of the quadrature weights (the domain measure).
  double measure() const;

 private:
  VelocityDomain() = default;

  VelocityKind kind_ = VelocityKind::Ball;
  double extent_ = 1.0;
  double spacing_ = 0.0;
  std::vector<double> v_;
  std::vector<double> w_;
  std::vector<double> theta_;
};

}  // namespace halfspace
