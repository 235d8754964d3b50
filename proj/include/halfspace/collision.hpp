// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string_view>
#include <vector>

#include "halfspace/velocity.hpp"

namespace halfspace {

enum class CollisionKind {
  RelaxationBounded,
  RelaxationGaussian,
  FokkerPlanck,
  LaplaceBeltramiCircle,
};

std::string_view to_string(CollisionKind kind);
CollisionKind collision_kind_from_string(std::string_view name);

/// Discretised collision operator acting on nodal velocity profiles.
///
/// For FokkerPlanck and LaplaceBeltramiCircle the operator is tridiagonal
/// (periodic for the circle); `lower`, `diag`, `upper` hold its bands, with
/// lower[0] and upper[n-1] the periodic corner entries (zero for FP).
/// For the relaxation kinds L f = M rho[f] - f and the bands are empty.
struct CollisionModel {
  CollisionKind kind;
  VelocityDomain velocity;
  std::vector<double> equilibrium;  // M at the nodes, sum_j M_j w_j = 1
  Eigen::MatrixXd generator;        // dense L, (L f)_j = sum_k L_jk f_k
  std::vector<double> lower, diag, upper;
  double c_L = 1.0;          // measured: L^# (v1 / c_L) = -v1
  double spectral_gap = 0.0;  // measured lambda_m

  std::size_t size() const { return equilibrium.size(); }
  bool is_relaxation() const {
    return kind == CollisionKind::RelaxationBounded ||
           kind == CollisionKind::RelaxationGaussian;
  }
  /// phi(v) = v1 / c_L, the corrector with L^# phi = -v1.
  double phi(std::size_t j) const { return velocity.v()[j] / c_L; }
  /// rho[f] for one velocity profile.
  double density(const double* profile) const;
  /// Apply L to one profile, out may not alias in.
  void apply(const double* in, double* out) const;
};

/// Build the operator on the given velocity domain (its node count is the
/// resolution). Throws ConfigError for an incompatible kind/domain pair or
/// fewer than 4 nodes.
///
/// Relaxation uses the exact BGK form. Fokker-Planck uses the symmetric flux
/// form  L f = d_v( k d_v (f / M) )  with edge coefficients
/// k_{j+1/2} = -dv * sum_{i<=j} v_i M_i, so that the discrete Gaussian is a
/// null vector, mass is conserved (zero flux at +-V_max) and L^# v = -v holds
/// exactly. The circle uses periodic second differences in theta.
CollisionModel build_collision(CollisionKind kind, const VelocityDomain& velocity);

/// The velocity domain each kind lives on: Ball(extent) for bounded
/// relaxation, RealLine(extent) for the Gaussian kinds, Circle otherwise.
VelocityDomain natural_velocity_domain(CollisionKind kind, double extent, std::size_t nodes);

struct AdjointReport {
  double adjoint_one_residual;   // max_v |L^# 1|
  double phi_residual;           // max_v |L^# phi + v1| with phi = v1 / c_L
  double phi_residual_weighted;  // sqrt(sum_v (L^# phi + v1)^2 M w)
  double c_L;                    // best c in L^# (v1 / c) = -v1
};

/// Flat-space adjoint checks; c_L fitted by M-weighted least squares.
AdjointReport adjoint_identity_check(const CollisionModel& model);

/// Flat adjoint L^# = W^{-1} L^T W under the quadrature weights W.
Eigen::MatrixXd flat_adjoint(const CollisionModel& model);

/// Smallest nonzero eigenvalue of -L in L^2(M^{-1}), by dense symmetric
/// eigendecomposition. Requires at least 8 velocity nodes.
double spectral_gap(const CollisionModel& model);

/// Quadrature inner product <f, g>_{L^2(M^{-1})} over one velocity profile.
double inner_Minv(const CollisionModel& model, const double* f, const double* g);

}  // namespace halfspace
