// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "halfspace/collision.hpp"
#include "halfspace/fit.hpp"
#include "halfspace/heat.hpp"
#include "halfspace/kinetic.hpp"
#include "halfspace/trajectory.hpp"

namespace halfspace {

enum class RunKind { Kinetic, Heat, Nash };

std::string_view to_string(RunKind kind);

/// Initial datum. Kinetic runs use f_in(x, v) = A g(x) h(v); heat runs use
/// rho_in(x) = A g(x).
///   equilibrium_bump   g = (x/w) e^{-(x/w)^2},           h = M(v)
///   box                g = 1 on [x_lo, x_hi],            h = 1 on [v_lo, v_hi]
///   shifted_gaussian   g = e^{-(x-x0)^2 / (2 w^2)},      h = e^{-(v-v0)^2 / (2 sigma_v^2)}
///   custom_table       g = linear interpolation of `table` (x,value rows), h = M(v)
struct InitialSpec {
  std::string family = "equilibrium_bump";
  double amplitude = 1.0;
  double width = 1.0;
  double x0 = 0.0;
  double x_lo = 1.0, x_hi = 2.0;
  double v_lo = -1.0, v_hi = 1.0;
  double v0 = 0.0, sigma_v = 1.0;
  std::string table;  // path, resolved against the config file's directory
  std::vector<std::pair<double, double>> table_rows;  // filled by load_initial_table

  std::function<double(double)> profile() const;
};

inline DiagnosticsSchedule scenario_schedule() {
  DiagnosticsSchedule s;
  s.samples_per_decade = 16;
  return s;
}

/// One experiment. Keys (section.key, default):
///   [run]         name (required), kind = kinetic | heat | nash, seed = 1, output = <name>
///   [model]       collision = relaxation_bounded
///   [grid]        x_max = 300, dx = 0.1, nv = 32, v_max (ball radius, 1, or Gaussian cut, 8)
///   [initial]     family = equilibrium_bump, amplitude, width, x0, x_lo, x_hi, v_lo, v_hi,
///                 v0, sigma_v, table
///   [time]        t_max = 2000
///   [solver]      cfl = 0.9, splitting = strang | lie, order = upwind1 | muscl2, dt
///   [diagnostics] t_first = 0.1, samples_per_decade = 16, fit_lo = 100, fit_hi = t_max,
///                 far_tolerance = 1e-6
///   [heat]        mode = half | whole, dx = 0.05
///   [nash]        count = 500
struct ScenarioConfig {
  std::string name;
  RunKind kind = RunKind::Kinetic;
  std::uint64_t seed = 1;
  std::string output;

  CollisionKind collision = CollisionKind::RelaxationBounded;
  double x_max = 300.0;
  double dx = 0.1;
  std::size_t nv = 32;
  double v_max = 0.0;  // 0 selects the per-kind default

  InitialSpec initial;
  double t_max = 2000.0;
  SolverConfig solver;
  std::optional<double> dt;  // explicit step, checked against the CFL bound

  DiagnosticsSchedule diagnostics = scenario_schedule();
  FitWindow fit_window{100.0, 0.0};  // hi = 0 means t_max

  HeatMode heat_mode = HeatMode::Half;
  double heat_dx = 0.05;

  std::size_t nash_count = 500;

  /// All constraint violations, empty when the config is runnable.
  std::vector<std::string> problems() const;
  /// Throws ConfigError listing every problem.
  void validate() const;
  FitWindow resolved_fit_window() const;
  double resolved_v_max() const;
};

struct ConfigIssue {
  std::size_t line = 0;  // 0 for whole-file issues
  std::string message;
};

struct ConfigParse {
  std::optional<ScenarioConfig> config;
  std::vector<ConfigIssue> issues;
  bool ok() const { return config.has_value(); }
  std::string message() const;  // one issue per line
};

/// Line-oriented `key = value` text with `[section]` headers and `#` or `;`
/// comments. Every unknown key, malformed value, duplicate and constraint
/// violation is reported; `config` is set only when there are none.
ConfigParse parse_config(std::string_view text);

/// Reads and parses a file, loading custom tables relative to it. Throws
/// ConfigError with all issues.
ScenarioConfig load_config(const std::string& path);

/// Rows "x,value" (optional header, # comments) sorted by x.
std::vector<std::pair<double, double>> load_initial_table(const std::string& path);

}  // namespace halfspace
