// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "halfspace/collision.hpp"
#include "halfspace/norms.hpp"
#include "halfspace/phase_grid.hpp"
#include "halfspace/tridiagonal.hpp"

namespace halfspace {

enum class Splitting { LieTransportFirst, Strang };
enum class TransportOrder { Upwind1, MUSCL2 };

struct SolverConfig {
  double cfl = 0.9;
  Splitting splitting = Splitting::Strang;
  TransportOrder order = TransportOrder::Upwind1;
  /// When set, the collision substep is replaced by f <- exp(-damping dt) f,
  /// which turns the solver into the damped transport semigroup.
  std::optional<double> damping;
  double dt_cap = std::numeric_limits<double>::infinity();
  bool transport_enabled = true;  // test hook
  bool collision_enabled = true;

  /// 0 < cfl <= 1 (<= 1/2 for MUSCL2), damping >= 0, dt_cap > 0.
  void validate() const;
  double cfl_limit() const { return order == TransportOrder::MUSCL2 ? 0.5 : 1.0; }
};

/// Mass bookkeeping of one step.
struct StepFlux {
  double outflow = 0.0;   // mass leaving through x = 0
  double far_flux = 0.0;  // net mass leaving through x = X_max
};

/// Splitting integrator for  d_t f + v d_x f = L f  on the half-line with
/// zero inflow at x = 0 and zeroth-order extrapolation at X_max.
///
/// Transport is a method-of-lines upwind (or MUSCL/minmod) discretisation
/// advanced by the two-stage SSP Runge-Kutta scheme. Relaxation collisions
/// are integrated exactly; the tridiagonal operators use Crank-Nicolson,
/// substepped so that every step matrix stays non-negative.
class KineticStepper {
 public:
  KineticStepper(std::shared_ptr<const CollisionModel> model, SolverConfig cfg);

  const SolverConfig& config() const { return cfg_; }
  const CollisionModel& model() const { return *model_; }

  /// Largest admissible dt on this grid: min(cfl dx / max|v|, dt_cap).
  double stable_dt(const PhaseGrid& grid) const;

  /// Advance f in place by dt. Throws ConfigError on a CFL violation and
  /// SchemeFailure when a value drops below -1e-12 ||f||_inf.
  void step(DistributionField& f, double dt, StepFlux* flux = nullptr);

  /// Semi-discrete transport operator applied to f (rate = -v d_x f).
  /// Adds the boundary fluxes of this evaluation to `flux` when given.
  void transport_rate(const DistributionField& f, std::vector<double>& rate,
                      StepFlux* flux = nullptr) const;

 private:
  void transport(DistributionField& f, double tau, StepFlux* flux);
  void collide(DistributionField& f, double tau);
  void finish(DistributionField& f) const;

  struct CrankNicolson {
    double tau = 0.0;
    int substeps = 1;
    TridiagonalSolver open;
    CyclicTridiagonalSolver periodic;
  };
  const CrankNicolson& crank_nicolson(double tau);

  std::shared_ptr<const CollisionModel> model_;
  SolverConfig cfg_;
  std::vector<CrankNicolson> cn_cache_;
  std::vector<double> stage_, rate_, scratch_;
};

/// One step on a copy of f.
DistributionField step_kinetic(const DistributionField& f, const CollisionModel& model,
                               const SolverConfig& cfg, double dt, StepFlux* flux = nullptr);

/// e^{-t} f_in(x - v t, v) 1_{x - v t > 0} at the grid nodes: damped free
/// transport with absorbing inflow, by characteristics.
DistributionField exact_SB_relaxation(std::shared_ptr<const PhaseGrid> grid,
                                      const std::function<double(double, double)>& f_in,
                                      double t, double damping = 1.0);

/// Dense generator of the semi-discrete problem (upwind transport, boundary
/// conditions and collision, or damping when cfg.damping is set). Only for
/// small grids; index = i * nv + j.
Eigen::MatrixXd assemble_generator(const PhaseGrid& grid, const CollisionModel& model,
                                   const SolverConfig& cfg);

/// Dense generator of the dual problem  d_t g = v d_x g + L g  with zero
/// inflow on the outgoing set {x = 0, v < 0}, assembled independently.
Eigen::MatrixXd assemble_dual_generator(const PhaseGrid& grid, const CollisionModel& model,
                                        const SolverConfig& cfg);

/// Diagonal of the L^2(M^{-1}) quadrature inner product on the grid.
Eigen::VectorXd minv_inner_product_weights(const PhaseGrid& grid, const CollisionModel& model);

/// Binary dump: header {"HSF1", nx, nv (uint64), x_max, v_max, time
/// (double)} followed by nx * nv doubles, row-major over x then v.
void write_snapshot(const std::string& path, const DistributionField& f);
DistributionField read_snapshot(const std::string& path, const VelocityDomain& velocity);

}  // namespace halfspace
