// SPDX-License-Identifier: Apache-2.0

#include "halfspace/tridiagonal.hpp"

#include <cmath>

#include "halfspace/errors.hpp"

namespace halfspace {

TridiagonalSolver::TridiagonalSolver(std::span<const double> lower, std::span<const double> diag,
                                     std::span<const double> upper)
    : lower_(lower.begin(), lower.end()), upper_mod_(diag.size()), inv_pivot_(diag.size()) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n) throw ConfigError("tridiagonal bands differ in size");
  double prev_upper = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pivot = diag[i] - (i > 0 ? lower[i] * prev_upper : 0.0);
    if (pivot == 0.0 || !std::isfinite(pivot)) throw NumericalError("tridiagonal pivot vanishes");
    inv_pivot_[i] = 1.0 / pivot;
    upper_mod_[i] = (i + 1 < n) ? upper[i] * inv_pivot_[i] : 0.0;
    prev_upper = upper_mod_[i];
  }
}

void TridiagonalSolver::solve(std::span<double> rhs) const {
  const std::size_t n = inv_pivot_.size();
  rhs[0] *= inv_pivot_[0];
  for (std::size_t i = 1; i < n; ++i) rhs[i] = (rhs[i] - lower_[i] * rhs[i - 1]) * inv_pivot_[i];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= upper_mod_[i] * rhs[i + 1];
}

void TridiagonalSolver::solve_interleaved(double* rhs, std::size_t count) const {
  const std::size_t n = inv_pivot_.size();
  for (std::size_t c = 0; c < count; ++c) rhs[c] *= inv_pivot_[0];
  for (std::size_t i = 1; i < n; ++i) {
    double* cur = rhs + i * count;
    const double* prev = cur - count;
    const double l = lower_[i], ip = inv_pivot_[i];
    for (std::size_t c = 0; c < count; ++c) cur[c] = (cur[c] - l * prev[c]) * ip;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    double* cur = rhs + i * count;
    const double* next = cur + count;
    const double u = upper_mod_[i];
    for (std::size_t c = 0; c < count; ++c) cur[c] -= u * next[c];
  }
}

CyclicTridiagonalSolver::CyclicTridiagonalSolver(std::span<const double> lower,
                                                 std::span<const double> diag,
                                                 std::span<const double> upper) {
  const std::size_t n = diag.size();
  if (n < 3) throw ConfigError("cyclic tridiagonal system needs at least 3 rows");
  beta_ = lower[0];
  alpha_ = upper[n - 1];
  gamma_ = -diag[0];
  std::vector<double> l(lower.begin(), lower.end()), d(diag.begin(), diag.end()),
      u(upper.begin(), upper.end());
  l[0] = 0.0;
  u[n - 1] = 0.0;
  d[0] -= gamma_;
  d[n - 1] -= alpha_ * beta_ / gamma_;
  base_ = TridiagonalSolver(l, d, u);
  z_.assign(n, 0.0);
  z_[0] = gamma_;
  z_[n - 1] = alpha_;
  base_.solve(z_);
  vz_ = 1.0 + z_[0] + beta_ * z_[n - 1] / gamma_;
}

void CyclicTridiagonalSolver::solve(std::span<double> rhs) const {
  const std::size_t n = z_.size();
  base_.solve(rhs);
  const double factor = (rhs[0] + beta_ * rhs[n - 1] / gamma_) / vz_;
  for (std::size_t i = 0; i < n; ++i) rhs[i] -= factor * z_[i];
}

}  // namespace halfspace
