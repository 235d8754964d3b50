// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "halfspace/fit.hpp"
#include "halfspace/kinetic.hpp"

namespace halfspace {

/// Scalars evaluated at every diagnostic sample.
struct ScalarSample {
  double t = 0.0;
  std::size_t step = 0;
  double mass = 0.0;            // int f
  double l1 = 0.0;              // int |f|
  double xl1 = 0.0;             // int x |f|
  double x2l1 = 0.0;            // int x^2 |f|
  double l2_Minv_sq = 0.0;      // ||f||^2 in L^2(M^{-1})
  double linf_w = 0.0;          // weighted L^inf_{-1}
  double j_l1 = 0.0;            // ||iota||_{L^1_x}
  double boundary_flux = 0.0;   // int_{v<0} |v| f(0, v)^2 / M
  double signed_moment = 0.0;   // int (x + v) f
  double bounded_moment = 0.0;  // int (x + phi + c0) f
  double far_fraction = 0.0;    // mass share of the outer tenth
  double outflow = 0.0;         // cumulative mass lost through x = 0
};

struct DiagnosticsSchedule {
  double t_first = 0.1;
  int samples_per_decade = 8;
  bool store_fields = true;
  /// Weight of the pointwise norm; defaults to k = -1 with omega = M^{-1/2}
  /// for Gaussian equilibria and omega = 1 otherwise.
  std::optional<WeightSpec> linf_weight;
  /// When set, rho is stored after every step with t in [lo, hi] together
  /// with the full fields at the window ends (for duhamel_consistency).
  std::optional<FitWindow> dense_window;
  /// Raise TruncationError above this far-region mass share.
  double far_tolerance = 1e-6;
};

struct TrajectoryRecord {
  std::shared_ptr<const CollisionModel> model;
  std::shared_ptr<const PhaseGrid> grid;
  SolverConfig config;
  double dt = 0.0;
  WeightSpec linf_weight;
  std::vector<ScalarSample> samples;
  std::vector<DistributionField> fields;  // aligned with samples when stored
  // dense rho history for the Duhamel check
  std::vector<double> rho_times;
  std::vector<std::vector<double>> rho_history;
  std::vector<DistributionField> dense_fields;
};

/// Fixed-step integration to t_max with diagnostics at geometric times
/// (snapped to the step grid; coinciding targets are merged).
/// Requires f_in >= 0 supported in x <= X_max / 4.
TrajectoryRecord run_scenario(std::shared_ptr<const CollisionModel> model,
                              const DistributionField& f_in, double t_max,
                              const SolverConfig& cfg, const DiagnosticsSchedule& schedule = {});

ScalarSample sample_scalars(const DistributionField& f, const CollisionModel& model,
                            const WeightSpec& linf_weight);

WeightSpec default_linf_weight(const CollisionModel& model);

struct DuhamelResidual {
  double max_abs = 0.0;
  double l1 = 0.0;
  double relative_max = 0.0;  // max_abs / max |f(t + s)|
  std::size_t snapshots = 0;
};

/// Residual of the characteristics formula for the relaxation equation
///   f(t+s) = e^{-s} f(t, x - v s) + M int_0^s e^{-sigma} rho(t+s-sigma, x - sigma v) dsigma
/// (cut where the characteristic meets x = 0), using the dense rho history.
/// Throws InsufficientDataError with fewer than 8 snapshots in [t, t+s].
DuhamelResidual duhamel_consistency(const TrajectoryRecord& record, double t, double s);

}  // namespace halfspace
