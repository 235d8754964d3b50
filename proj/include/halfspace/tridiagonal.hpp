// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace halfspace {

/// LU factorisation of a tridiagonal matrix without pivoting (Thomas).
/// Intended for diagonally dominant systems; row i reads
///   lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = b[i].
class TridiagonalSolver {
 public:
  TridiagonalSolver() = default;
  TridiagonalSolver(std::span<const double> lower, std::span<const double> diag,
                    std::span<const double> upper);

  std::size_t size() const { return inv_pivot_.size(); }
  /// Solve in place.
  void solve(std::span<double> rhs) const;
  /// Solve in place for `count` interleaved right-hand sides stored as
  /// rhs[row * count + c]; used to sweep all cells of a field at once.
  void solve_interleaved(double* rhs, std::size_t count) const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_mod_;
  std::vector<double> inv_pivot_;
};

/// Periodic tridiagonal system: lower[0] couples row 0 to x[n-1] and
/// upper[n-1] couples row n-1 to x[0]. Solved by Sherman-Morrison.
class CyclicTridiagonalSolver {
 public:
  CyclicTridiagonalSolver() = default;
  CyclicTridiagonalSolver(std::span<const double> lower, std::span<const double> diag,
                          std::span<const double> upper);

  void solve(std::span<double> rhs) const;

 private:
  TridiagonalSolver base_;
  std::vector<double> z_;
  double alpha_ = 0.0, beta_ = 0.0, gamma_ = 0.0;
  double vz_ = 0.0;
};

}  // namespace halfspace
