// SPDX-License-Identifier: Apache-2.0

#include "halfspace/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "halfspace/errors.hpp"
#include "halfspace/schedule.hpp"

namespace halfspace {

WeightSpec default_linf_weight(const CollisionModel& model) {
  const bool gaussian = model.velocity.kind() == VelocityKind::RealLine;
  return WeightSpec::lp(WeightSpec::infinity(), -1,
                        gaussian ? VelocityWeight::InvSqrtM : VelocityWeight::One);
}

ScalarSample sample_scalars(const DistributionField& f, const CollisionModel& model,
                            const WeightSpec& linf_weight) {
  const PhaseGrid& g = f.grid();
  const auto& v = g.velocity().v();
  const auto& w = g.velocity().weights();
  const auto& M = model.equilibrium;
  const std::size_t nx = g.nx(), nv = g.nv();
  double c0 = 0.0;
  for (std::size_t j = 0; j < nv; ++j) c0 = std::max(c0, std::abs(model.phi(j)));
  const std::size_t far = g.far_region_begin();

  ScalarSample s;
  s.t = f.time();
  double far_mass = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = g.x(i);
    const double* row = f.row(i);
    double rho = 0.0, rho_abs = 0.0, iota = 0.0, l2 = 0.0, phi_moment = 0.0;
    for (std::size_t j = 0; j < nv; ++j) {
      rho += w[j] * row[j];
      rho_abs += w[j] * std::abs(row[j]);
      iota += w[j] * v[j] * row[j];
      l2 += w[j] * row[j] * row[j] / M[j];
      phi_moment += w[j] * (model.phi(j) + c0) * row[j];
    }
    const double dx = g.dx();
    s.mass += rho * dx;
    s.l1 += rho_abs * dx;
    s.xl1 += x * rho_abs * dx;
    s.x2l1 += x * x * rho_abs * dx;
    s.l2_Minv_sq += l2 * dx;
    s.j_l1 += std::abs(iota) * dx;
    s.signed_moment += (x * rho + iota) * dx;
    s.bounded_moment += (x * rho + phi_moment) * dx;
    if (i >= far) far_mass += rho_abs * dx;
  }
  s.linf_w = weighted_norm(f, linf_weight, M);
  const double* edge = f.row(0);
  for (std::size_t j = 0; j < nv; ++j)
    if (v[j] < 0.0) s.boundary_flux += w[j] * std::abs(v[j]) * edge[j] * edge[j] / M[j];
  s.far_fraction = (s.l1 > 0.0) ? far_mass / s.l1 : 0.0;
  return s;
}

TrajectoryRecord run_scenario(std::shared_ptr<const CollisionModel> model,
                              const DistributionField& f_in, double t_max,
                              const SolverConfig& cfg, const DiagnosticsSchedule& schedule) {
  if (!model) throw ConfigError("run_scenario needs a collision model");
  if (!(t_max >= 0.0)) throw ConfigError("t_max must be non-negative");
  const PhaseGrid& g = f_in.grid();
  if (g.nv() != model->size()) throw ConfigError("grid and collision model disagree on velocity nodes");
  const double peak = f_in.max_abs();
  if (f_in.min_value() < 0.0) throw PreconditionError("initial datum must be non-negative");
  for (std::size_t i = 0; i < g.nx(); ++i) {
    if (g.x(i) <= 0.25 * g.x_max()) continue;
    const double* row = f_in.row(i);
    for (std::size_t j = 0; j < g.nv(); ++j)
      if (row[j] > 1e-14 * peak)
        throw PreconditionError("initial datum must be supported in x <= X_max / 4");
  }

  TrajectoryRecord rec;
  rec.model = model;
  rec.grid = f_in.grid_ptr();
  rec.config = cfg;
  rec.linf_weight = schedule.linf_weight.value_or(default_linf_weight(*model));
  rec.linf_weight.validate();

  KineticStepper stepper(model, cfg);
  std::size_t n_steps = 0;
  double dt = 0.0;
  if (t_max > 0.0) {
    const double dt_max = stepper.stable_dt(g);
    n_steps = static_cast<std::size_t>(std::ceil(t_max / dt_max - 1e-9));
    dt = t_max / static_cast<double>(n_steps);
  }
  rec.dt = dt;

  // sample targets snapped to the step grid
  std::vector<std::size_t> sample_steps;
  for (double t : geometric_times(schedule.t_first, t_max, schedule.samples_per_decade)) {
    const std::size_t k = (dt > 0.0) ? static_cast<std::size_t>(std::llround(t / dt)) : 0;
    if (sample_steps.empty() || k > sample_steps.back()) sample_steps.push_back(std::min(k, n_steps));
  }

  DistributionField f = f_in;
  f.set_time(0.0);
  double outflow = 0.0;
  std::size_t next = 0;
  auto in_dense = [&](double t) {
    return schedule.dense_window && t >= schedule.dense_window->lo - 0.5 * dt &&
           t <= schedule.dense_window->hi + 0.5 * dt;
  };
  for (std::size_t step = 0;; ++step) {
    const double t = static_cast<double>(step) * dt;
    f.set_time(t);
    if (next < sample_steps.size() && sample_steps[next] == step) {
      ScalarSample s = sample_scalars(f, *model, rec.linf_weight);
      s.step = step;
      s.outflow = outflow;
      if (s.far_fraction > schedule.far_tolerance)
        throw TruncationError("kinetic run invalid: far-region mass share " +
                              std::to_string(s.far_fraction) + " at t = " + std::to_string(t));
      rec.samples.push_back(s);
      if (schedule.store_fields) rec.fields.push_back(f);
      ++next;
    }
    if (in_dense(t)) {
      rec.rho_times.push_back(t);
      std::vector<double> rho(g.nx());
      for (std::size_t i = 0; i < g.nx(); ++i) rho[i] = model->density(f.row(i));
      rec.rho_history.push_back(std::move(rho));
      rec.dense_fields.push_back(f);
    }
    if (step >= n_steps) break;
    StepFlux flux;
    stepper.step(f, dt, &flux);
    outflow += flux.outflow;
  }
  return rec;
}

namespace {

// Linear interpolation between cell centres, constant beyond the end cells.
double interp_x(const PhaseGrid& g, double x, const auto& value_at) {
  const double s = x / g.dx() - 0.5;
  if (s <= 0.0) return value_at(0);
  const auto last = g.nx() - 1;
  if (s >= static_cast<double>(last)) return value_at(last);
  const auto i = static_cast<std::size_t>(s);
  const double th = s - static_cast<double>(i);
  return (1.0 - th) * value_at(i) + th * value_at(i + 1);
}

std::size_t locate(const std::vector<double>& times, double t, double dt) {
  const auto it = std::lower_bound(times.begin(), times.end(), t - 0.5 * dt);
  if (it == times.end() || std::abs(*it - t) > 0.5 * dt + 1e-12)
    throw InsufficientDataError("no stored snapshot at t = " + std::to_string(t));
  return static_cast<std::size_t>(it - times.begin());
}

}  // namespace

DuhamelResidual duhamel_consistency(const TrajectoryRecord& record, double t, double s) {
  if (!record.model || !record.model->is_relaxation())
    throw PreconditionError("duhamel_consistency needs a relaxation model");
  if (!(s > 0.0) || s > 1.0) throw PreconditionError("duhamel_consistency needs 0 < s <= 1");
  const auto& times = record.rho_times;
  if (times.empty()) throw InsufficientDataError("trajectory has no dense rho history");
  const double dt = record.dt;
  const std::size_t k0 = locate(times, t, dt);
  const std::size_t k1 = locate(times, t + s, dt);
  const std::size_t count = k1 - k0 + 1;
  if (count < 8) throw InsufficientDataError("fewer than 8 rho snapshots in [t, t + s]");

  const PhaseGrid& g = *record.grid;
  const CollisionModel& m = *record.model;
  const auto& v = g.velocity().v();
  const DistributionField& f0 = record.dense_fields[k0];
  const DistributionField& f1 = record.dense_fields[k1];
  const double span = times[k1] - times[k0];

  // sigma nodes ascending: sigma = t1 - tau
  std::vector<double> sigma(count);
  for (std::size_t q = 0; q < count; ++q) sigma[q] = times[k1] - times[k1 - q];
  auto rho_at = [&](std::size_t q, double x) {
    const auto& r = record.rho_history[k1 - q];
    return interp_x(g, x, [&](std::size_t i) { return r[i]; });
  };

  DuhamelResidual res;
  res.snapshots = count;
  const double scale = f1.max_abs();
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const double x = g.x(i);
    for (std::size_t j = 0; j < g.nv(); ++j) {
      const double vj = v[j];
      const double sigma_max = (vj > 0.0) ? std::min(span, x / vj) : span;
      double transported = 0.0;
      if (x - vj * span > 0.0)
        transported = std::exp(-span) *
                      interp_x(g, x - vj * span, [&](std::size_t c) { return f0(c, j); });
      double gain = 0.0;
      auto integrand = [&](std::size_t q, double sg) { return std::exp(-sg) * rho_at(q, x - sg * vj); };
      for (std::size_t q = 0; q + 1 < count && sigma[q] < sigma_max; ++q) {
        const double a = sigma[q], b = std::min(sigma[q + 1], sigma_max);
        const double ga = integrand(q, a);
        double gb = integrand(q + 1, b);
        if (b < sigma[q + 1]) {
          // partial segment: interpolate rho in time at the exit point
          const double th = (b - a) / (sigma[q + 1] - a);
          gb = std::exp(-b) * ((1.0 - th) * rho_at(q, x - b * vj) + th * rho_at(q + 1, x - b * vj));
        }
        gain += 0.5 * (b - a) * (ga + gb);
      }
      const double r = f1(i, j) - (transported + m.equilibrium[j] * gain);
      res.max_abs = std::max(res.max_abs, std::abs(r));
      res.l1 += std::abs(r) * g.volume(j);
    }
  }
  res.relative_max = scale > 0.0 ? res.max_abs / scale : 0.0;
  return res;
}

}  // namespace halfspace
