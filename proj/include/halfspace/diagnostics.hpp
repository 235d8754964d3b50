// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "halfspace/collision.hpp"
#include "halfspace/fit.hpp"
#include "halfspace/heat.hpp"
#include "halfspace/phase_grid.hpp"
#include "halfspace/trajectory.hpp"
#include "halfspace/tridiagonal.hpp"

namespace halfspace {

/// (1 - d_xx) u = eta on the cells of [0, X_max] with u = 0 on both faces
/// (antisymmetric ghosts), second-order accurate.
class EllipticSolver {
 public:
  EllipticSolver(std::size_t nx, double dx);

  struct Solution {
    std::vector<double> u;
    std::vector<double> du;   // centred differences
    std::vector<double> d2u;  // u - eta, from the equation
  };

  std::size_t size() const { return nx_; }
  double dx() const { return dx_; }
  Solution solve(std::span<const double> eta) const;

 private:
  std::size_t nx_;
  double dx_;
  TridiagonalSolver lu_;
};

/// Cross term C = int (d_x R rho) iota dx of the modified norm.
double hypocoercive_cross_term(const DistributionField& f, const EllipticSolver& R);

/// Largest eps <= 1 with |eps C| <= 3/4 ||f||^2 on every sample, halved.
/// Throws PreconditionError on an empty set, ZeroSignalError when every
/// sample vanishes.
double calibrate_epsilon(std::span<const DistributionField> samples, const CollisionModel& model);

struct HypocoercivityState {
  double t = 0.0;
  double epsilon = 0.0;
  double Z = 0.0;  // ||f||^2 + eps C
  double Y = 0.0;  // ||f - rho M||^2 + ||d_x u||^2 + ||d_xx u||^2
  double l2_Minv_sq = 0.0;
  double cross = 0.0;
  double boundary_flux = 0.0;
  bool degenerate = false;  // Y = 0
};

struct HypocoercivitySeries {
  std::vector<HypocoercivityState> states;
  std::vector<double> ratios;  // -dZ / (dt Y) between consecutive samples
  bool monotone = true;        // Z non-increasing within 1e-8 relative
  double worst_increase = 0.0; // max (Z_{k+1} - Z_k) / Z_k
  double min_ratio = 0.0;
  bool equivalence_holds = true;
};

/// Z and Y at every stored field. Throws CalibrationStaleError if the
/// bound 1/2 ||f|| <= |||f||| <= 2 ||f|| fails on some sample.
HypocoercivitySeries hypocoercivity_series(std::span<const DistributionField> fields,
                                           const CollisionModel& model, double epsilon);

struct DecadeReport {
  double t = 0.0;
  double window_mass_sqrt_t = 0.0;
  double x_t = 0.0;
  double x_t_over_sqrt_t = 0.0;
  double ratio_A = 0.0;  // min f t / M over the slab
  double ratio_B = 0.0;  // max f t / M over the slab
  double profile_exponent = 0.0;  // slope of log(f t) in log M, NaN if M is flat
};

struct LocalizationReport {
  MassWindow window;  // [a, b] in x / sqrt(t)
  std::vector<DecadeReport> decades;
};

/// x_t: argmax of the 5-cell moving average of x rho (ties to smaller x).
double localization_peak(const PhaseGrid& grid, std::span<const double> rho);

/// Decade statistics for one field, using the fixed window.
DecadeReport localization_sample(const DistributionField& f, const CollisionModel& model,
                                 const MassWindow& window);

/// Localization statistics at each decade t in {10, 100, ...}
/// present in the record. The window captures 60% of the mass at the first
/// decade and is held fixed. Throws PreconditionError unless the initial
/// signed moment int (x + v) f_in is positive.
LocalizationReport localization_report(const TrajectoryRecord& record);

struct InterpolationRatios {
  double l1_l2_l11 = 0.0;     // ||rho||_1 / (||rho||_2^{2/3} ||x rho||_1^{1/3})
  double l1_linf_l11 = 0.0;   // ||f||_1 / (||f||_{L^inf_{-1}}^{1/3} ||x f||_1^{2/3})
};

InterpolationRatios interpolation_ratios(const DistributionField& f, const CollisionModel& model,
                                         const WeightSpec& linf_weight);

/// Full post-processing of a kinetic run.
struct TrajectoryReport {
  double epsilon = 0.0;
  HypocoercivitySeries hypo;
  LocalizationReport localization;
  bool localization_available = false;
  std::vector<DecadeReport> per_sample;  // localization statistics per sample
  std::vector<InterpolationRatios> interpolation;
  double max_interp_l1_l2 = 0.0;
  double max_interp_l1_linf = 0.0;
  double first_moment_sup_ratio = 0.0;  // sup int x f / int (<x> + <v>) f_in
  double signed_moment_worst_drop = 0.0;   // max relative decrease
  double bounded_moment_worst_rise = 0.0;  // max relative increase
  double l1_worst_rise = 0.0;
};

TrajectoryReport analyze_trajectory(const TrajectoryRecord& record);

/// Trajectory CSV with the versioned schema header.
std::string trajectory_csv(const TrajectoryRecord& record, const TrajectoryReport& report);

}  // namespace halfspace
