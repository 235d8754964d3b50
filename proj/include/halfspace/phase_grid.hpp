// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "halfspace/velocity.hpp"

namespace halfspace {

/// Cell-centred partition of [0, x_max] times a velocity quadrature.
/// Cell i covers [i dx, (i+1) dx]; the inflow boundary is the x = 0 face
/// restricted to nodes with v1 > 0.
class PhaseGrid {
 public:
  PhaseGrid(double x_max, double dx, VelocityDomain velocity);

  std::size_t nx() const { return nx_; }
  std::size_t nv() const { return velocity_.size(); }
  std::size_t size() const { return nx_ * velocity_.size(); }
  double dx() const { return dx_; }
  double x_max() const { return x_max_; }
  double x(std::size_t i) const { return (static_cast<double>(i) + 0.5) * dx_; }
  const VelocityDomain& velocity() const { return velocity_; }
  /// Phase-space volume of cell (i, j).
  double volume(std::size_t j) const { return dx_ * velocity_.weights()[j]; }
  /// Index of the first cell of the outer tenth of the domain.
  std::size_t far_region_begin() const;

 private:
  double x_max_;
  double dx_;
  std::size_t nx_;
  VelocityDomain velocity_;
};

/// Grid values of f(x, v) at one instant, row-major over x then v.
class DistributionField {
 public:
  explicit DistributionField(std::shared_ptr<const PhaseGrid> grid, double time = 0.0);

  /// Sample g(x, v) at cell centres and velocity nodes.
  static DistributionField sample(std::shared_ptr<const PhaseGrid> grid,
                                  const std::function<double(double, double)>& g,
                                  double time = 0.0);

  const PhaseGrid& grid() const { return *grid_; }
  const std::shared_ptr<const PhaseGrid>& grid_ptr() const { return grid_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  double& operator()(std::size_t i, std::size_t j) { return values_[i * nv_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * nv_ + j]; }
  double* row(std::size_t i) { return values_.data() + i * nv_; }
  const double* row(std::size_t i) const { return values_.data() + i * nv_; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double max_abs() const;
  double min_value() const;

 private:
  std::shared_ptr<const PhaseGrid> grid_;
  std::size_t nv_;
  std::vector<double> values_;
  double time_;
};

}  // namespace halfspace
