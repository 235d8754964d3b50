// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "halfspace/fit.hpp"

namespace halfspace {

enum class HeatMode { Whole, Half };

/// Nodal heat density. Half mode: nodes x_i = i dx on [0, x_max].
/// Whole mode: nodes x_i = -x_max + i dx on [-x_max, x_max].
/// End nodes carry the homogeneous Dirichlet value.
struct HeatField {
  HeatMode mode = HeatMode::Half;
  double dx = 0.05;
  double x_max = 0.0;
  std::vector<double> values;
  double time = 0.0;

  std::size_t size() const { return values.size(); }
  double x(std::size_t i) const {
    const double left = (mode == HeatMode::Whole) ? -x_max : 0.0;
    return left + static_cast<double>(i) * dx;
  }
  static HeatField make(HeatMode mode, double x_max, double dx,
                        const std::function<double(double)>& rho);
};

/// One Crank-Nicolson step of d_t rho = d_xx rho. Throws TruncationError
/// when the outer tenth of the domain holds more than 1e-6 of the mass.
HeatField step_heat(const HeatField& rho, double dt);
/// In-place variant used by the experiments.
void advance_heat(HeatField& rho, double dt);

struct HeatSample {
  double t = 0.0;
  double l1 = 0.0;
  double l2sq = 0.0;
  double xl1 = 0.0;   // int |x| |rho|
  double x2l1 = 0.0;  // int x^2 |rho|
  double linf = 0.0;
  double window_mass = 0.0;  // int_{a sqrt t}^{b sqrt t} rho
  double x_peak = 0.0;
  double first_moment = 0.0;  // int x rho (signed)
};

HeatSample heat_sample(const HeatField& rho);

struct HeatOptions {
  double dx = 0.05;
  double x_max = 0.0;  // 0 selects 20 sqrt(t_max)
  double t_first = 0.1;
  int samples_per_decade = 8;
  std::optional<FitWindow> fit_window;  // default [t_max/10, t_max]
  double window_decade = 10.0;          // time at which [a, b] is chosen
};

struct MassWindow {
  double a = 0.0;
  double b = 0.0;
};

struct HeatDecayResult {
  std::optional<DecayFit> fit;  // of ||rho||_2^2
  bool zero_signal = false;
  std::vector<HeatSample> series;
  MassWindow window;
  double x_max = 0.0;
  double max_first_moment_drift = 0.0;  // relative, half mode
};

HeatDecayResult heat_decay_experiment(HeatMode mode, const std::function<double(double)>& rho_in,
                                      double t_max, const HeatOptions& options = {});

struct HeatLocalizationReport {
  DecayFit l1_fit;
  DecayFit x2_fit;
  DecayFit peak_fit;
  double max_cs_ratio = 0.0;  // max_t ||x rho||_1^2 / (||rho||_1 ||x^2 rho||_1)
  MassWindow window;
  std::vector<double> window_mass_sqrt_t;  // per sample with t >= window decade
  HeatDecayResult run;
};

/// Half-line localization chain. Requires int x rho_in > 0.
HeatLocalizationReport heat_localization_experiment(const std::function<double(double)>& rho_in,
                                                    double t_max, const HeatOptions& options = {});

/// Half-line solution by image-charge quadrature:
/// int_0^inf (G_t(x - y) - G_t(x + y)) rho_in(y) dy on a fine y-grid.
double heat_half_line_kernel(const std::function<double(double)>& rho_in, double t, double x,
                             double y_max = 12.0, std::size_t nodes = 24000);

/// L^inf distance at time t between the Crank-Nicolson half-line solution
/// (same step rule as the experiments) and heat_half_line_kernel, over
/// nodes with x <= 12 + 10 sqrt(t).
double heat_kernel_oracle_error(const std::function<double(double)>& rho_in, double t, double dx = 0.05);

/// Quantile window [a, b] in the scaled variable x / sqrt(t): the lower and
/// upper `tail` mass quantiles, so the window captures 1 - 2 tail.
MassWindow select_mass_window(const std::vector<double>& x, const std::vector<double>& rho,
                              double dx, double t, double tail = 0.2);

/// Sum of rho dx over nodes with lo <= x <= hi.
double window_mass(const std::vector<double>& x, const std::vector<double>& rho, double dx,
                   double lo, double hi);

std::string heat_csv(const std::vector<HeatSample>& series);

}  // namespace halfspace
