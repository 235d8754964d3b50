// SPDX-License-Identifier: Apache-2.0

#include "halfspace/heat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "halfspace/csv.hpp"
#include "halfspace/errors.hpp"
#include "halfspace/schedule.hpp"

namespace halfspace {

HeatField HeatField::make(HeatMode mode, double x_max, double dx,
                          const std::function<double(double)>& rho) {
  if (!(dx > 0.0) || !(x_max > 2.0 * dx)) throw ConfigError("heat grid needs dx > 0 and x_max > 2 dx");
  const double cells = x_max / dx;
  const auto n = static_cast<std::size_t>(std::llround(cells));
  if (std::abs(cells - static_cast<double>(n)) > 1e-9 * cells)
    throw ConfigError("heat grid: x_max must be a multiple of dx");
  HeatField f;
  f.mode = mode;
  f.dx = dx;
  f.x_max = x_max;
  const std::size_t nodes = (mode == HeatMode::Whole ? 2 * n : n) + 1;
  f.values.assign(nodes, 0.0);
  for (std::size_t i = 1; i + 1 < nodes; ++i) f.values[i] = rho(f.x(i));
  return f;
}

namespace {

void check_far_mass(const HeatField& f) {
  double total = 0.0, far = 0.0;
  const double edge = 0.9 * f.x_max;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(f.values[i]);
    total += a;
    if (std::abs(f.x(i)) >= edge) far += a;
  }
  if (total > 0.0 && far > 1e-6 * total)
    throw TruncationError("heat run invalid: far-boundary mass fraction " +
                          csv_number(far / total) + " at t = " + csv_number(f.time));
}

}  // namespace

void advance_heat(HeatField& f, double dt) {
  if (!(dt > 0.0)) throw PreconditionError("step_heat needs dt > 0");
  const std::size_t n = f.size();
  auto& u = f.values;
  const double r = dt / (f.dx * f.dx);
  const double off = -0.5 * r, dia = 1.0 + r;
  // right-hand side (1 + dt/2 D2) u on interior nodes
  std::vector<double> rhs(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) rhs[i] = (1.0 - r) * u[i] + 0.5 * r * (u[i - 1] + u[i + 1]);
  // Thomas sweep for the constant-coefficient interior system; far tails are
  // flushed to zero before they turn subnormal and stall the sweep
  std::vector<double> c(n, 0.0);
  double prev_c = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double denom = dia - off * prev_c;
    c[i] = off / denom;
    rhs[i] = (rhs[i] - off * rhs[i - 1]) / denom;
    if (std::abs(rhs[i]) < 1e-280) rhs[i] = 0.0;
    prev_c = c[i];
  }
  u[n - 1] = 0.0;
  for (std::size_t i = n - 1; i-- > 1;) {
    u[i] = rhs[i] - c[i] * u[i + 1];
    if (std::abs(u[i]) < 1e-280) u[i] = 0.0;
  }
  u[0] = 0.0;
  f.time += dt;
  check_far_mass(f);
}

HeatField step_heat(const HeatField& rho, double dt) {
  HeatField out = rho;
  advance_heat(out, dt);
  return out;
}

HeatSample heat_sample(const HeatField& f) {
  HeatSample s;
  s.t = f.time;
  const double dx = f.dx;
  std::size_t peak = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = f.x(i), r = f.values[i], a = std::abs(r);
    s.l1 += a * dx;
    s.l2sq += r * r * dx;
    s.xl1 += std::abs(x) * a * dx;
    s.x2l1 += x * x * a * dx;
    s.first_moment += x * r * dx;
    if (a > s.linf) {
      s.linf = a;
      peak = i;
    }
  }
  s.x_peak = f.x(peak);
  if (s.linf > 0.0 && peak > 0 && peak + 1 < f.size()) {
    // parabolic refinement through the three nodes around the maximum
    const double ym = f.values[peak - 1], y0 = f.values[peak], yp = f.values[peak + 1];
    const double curv = ym - 2.0 * y0 + yp;
    if (curv < 0.0) s.x_peak += 0.5 * dx * (ym - yp) / curv;
  }
  return s;
}

MassWindow select_mass_window(const std::vector<double>& x, const std::vector<double>& rho,
                              double dx, double t, double tail) {
  if (!(t > 0.0)) throw PreconditionError("mass window needs t > 0");
  if (!(tail > 0.0 && tail < 0.5)) throw PreconditionError("mass window tail must lie in (0, 1/2)");
  double total = 0.0;
  for (double r : rho) total += std::max(r, 0.0) * dx;
  if (!(total > 0.0)) throw ZeroSignalError("mass window: zero mass");
  MassWindow w;
  double acc = 0.0;
  bool have_lo = false;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    acc += std::max(rho[i], 0.0) * dx;
    if (!have_lo && acc >= tail * total) {
      w.a = x[i];
      have_lo = true;
    }
    if (acc >= (1.0 - tail) * total) {
      w.b = x[i];
      break;
    }
  }
  const double st = std::sqrt(t);
  w.a /= st;
  w.b /= st;
  if (!(w.b > w.a)) w.b = w.a + dx / st;
  return w;
}

double window_mass(const std::vector<double>& x, const std::vector<double>& rho, double dx,
                   double lo, double hi) {
  double m = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i)
    if (x[i] >= lo && x[i] <= hi) m += rho[i] * dx;
  return m;
}

namespace {

std::vector<double> node_positions(const HeatField& f) {
  std::vector<double> x(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) x[i] = f.x(i);
  return x;
}

}  // namespace

HeatDecayResult heat_decay_experiment(HeatMode mode, const std::function<double(double)>& rho_in,
                                      double t_max, const HeatOptions& options) {
  if (!(t_max > 0.0)) throw ConfigError("heat experiment needs t_max > 0");
  HeatDecayResult result;
  result.x_max = options.x_max > 0.0 ? options.x_max : 20.0 * std::sqrt(t_max);
  // round X up to a whole number of cells
  result.x_max = std::ceil(result.x_max / options.dx - 1e-9) * options.dx;
  HeatField f = HeatField::make(mode, result.x_max, options.dx, rho_in);

  double peak = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.values[i] < 0.0) throw PreconditionError("heat initial datum must be non-negative");
    peak = std::max(peak, f.values[i]);
  }
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::abs(f.x(i)) > 0.25 * result.x_max && f.values[i] > 1e-14 * peak)
      throw PreconditionError("heat initial datum must be supported within x_max / 4");

  const auto times = geometric_times(options.t_first, t_max, options.samples_per_decade);
  const auto x = node_positions(f);
  const double m0 = heat_sample(f).first_moment;

  // Samples taken before the window is chosen keep their field for the
  // retroactive window-mass evaluation.
  std::vector<std::vector<double>> pending;
  bool window_set = false;
  const double window_time = std::min(options.window_decade, t_max);

  for (double target : times) {
    while (f.time < target * (1.0 - 1e-13)) {
      double dt = std::max(1e-3, f.time / 200.0);
      if (f.time + dt > target) dt = target - f.time;
      advance_heat(f, dt);
    }
    f.time = target;
    HeatSample s = heat_sample(f);
    if (mode == HeatMode::Half && m0 != 0.0)
      result.max_first_moment_drift =
          std::max(result.max_first_moment_drift, std::abs(s.first_moment - m0) / std::abs(m0));
    result.series.push_back(s);
    if (!window_set) {
      pending.push_back(f.values);
      if (target >= window_time * (1.0 - 1e-12) && s.l1 > 0.0) {
        result.window = select_mass_window(x, f.values, f.dx, target);
        window_set = true;
        for (std::size_t k = 0; k < pending.size(); ++k) {
          const double st = std::sqrt(result.series[k].t);
          result.series[k].window_mass =
              window_mass(x, pending[k], f.dx, result.window.a * st, result.window.b * st);
        }
        pending.clear();
      }
    } else {
      const double st = std::sqrt(target);
      result.series.back().window_mass =
          window_mass(x, f.values, f.dx, result.window.a * st, result.window.b * st);
    }
  }

  if (result.series.front().l1 == 0.0) {
    result.zero_signal = true;
    return result;
  }
  const FitWindow window = options.fit_window.value_or(FitWindow{t_max / 10.0, t_max});
  std::vector<double> t, v;
  for (const auto& s : result.series) {
    t.push_back(s.t);
    v.push_back(s.l2sq);
  }
  try {
    result.fit = fit_decay(t, v, window);
  } catch (const ZeroSignalError&) {
    result.zero_signal = true;
  }
  return result;
}

HeatLocalizationReport heat_localization_experiment(const std::function<double(double)>& rho_in,
                                                    double t_max, const HeatOptions& options) {
  HeatLocalizationReport rep;
  rep.run = heat_decay_experiment(HeatMode::Half, rho_in, t_max, options);
  const auto& series = rep.run.series;
  if (!(series.front().first_moment > 0.0))
    throw PreconditionError("heat localization needs a positive first moment");
  const FitWindow window = options.fit_window.value_or(FitWindow{t_max / 10.0, t_max});
  std::vector<double> t, l1, x2, peak;
  for (const auto& s : series) {
    t.push_back(s.t);
    l1.push_back(s.l1);
    x2.push_back(s.x2l1);
    peak.push_back(s.x_peak);
    if (s.l1 > 0.0 && s.x2l1 > 0.0)
      rep.max_cs_ratio = std::max(rep.max_cs_ratio, s.xl1 * s.xl1 / (s.l1 * s.x2l1));
  }
  rep.l1_fit = fit_decay(t, l1, window);
  rep.x2_fit = fit_decay(t, x2, window);
  rep.peak_fit = fit_decay(t, peak, window);
  rep.window = rep.run.window;
  const double window_time = std::min(options.window_decade, t_max);
  for (const auto& s : series)
    if (s.t >= window_time * (1.0 - 1e-12)) rep.window_mass_sqrt_t.push_back(s.window_mass * std::sqrt(s.t));
  return rep;
}

double heat_half_line_kernel(const std::function<double(double)>& rho_in, double t, double x,
                             double y_max, std::size_t nodes) {
  if (!(t > 0.0)) return rho_in(x);
  // composite Simpson on [0, y_max]
  if (nodes % 2) ++nodes;
  const double h = y_max / static_cast<double>(nodes);
  const double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
  auto integrand = [&](double y) {
    const double dm = x - y, dp = x + y;
    return norm * (std::exp(-dm * dm / (4.0 * t)) - std::exp(-dp * dp / (4.0 * t))) * rho_in(y);
  };
  double acc = integrand(0.0) + integrand(y_max);
  for (std::size_t i = 1; i < nodes; ++i)
    acc += (i % 2 ? 4.0 : 2.0) * integrand(static_cast<double>(i) * h);
  return acc * h / 3.0;
}

double heat_kernel_oracle_error(const std::function<double(double)>& rho_in, double t, double dx) {
  if (!(t > 0.0) || !(dx > 0.0)) throw ConfigError("kernel oracle needs t > 0 and dx > 0");
  const double x_max = std::ceil(std::max(20.0 * std::sqrt(t), 48.0) / dx - 1e-9) * dx;
  HeatField f = HeatField::make(HeatMode::Half, x_max, dx, rho_in);
  while (f.time < t * (1.0 - 1e-13)) {
    double dt = std::max(1e-3, f.time / 200.0);
    if (f.time + dt > t) dt = t - f.time;
    advance_heat(f, dt);
  }
  double err = 0.0;
  const double reach = 12.0 + 10.0 * std::sqrt(t);
  for (std::size_t i = 0; i < f.size() && f.x(i) <= reach; ++i)
    err = std::max(err, std::abs(f.values[i] - heat_half_line_kernel(rho_in, t, f.x(i))));
  return err;
}

std::string heat_csv(const std::vector<HeatSample>& series) {
  std::string out =
      csv_preamble("heat_trajectory", 1, {"t", "l1", "l2sq", "xl1", "x2l1", "linf", "window_mass", "x_peak"});
  for (const auto& s : series)
    csv_append_row(out, {s.t, s.l1, s.l2sq, s.xl1, s.x2l1, s.linf, s.window_mass, s.x_peak});
  return out;
}

}  // namespace halfspace
