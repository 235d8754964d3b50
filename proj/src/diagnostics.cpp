// SPDX-License-Identifier: Apache-2.0

#include "halfspace/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "halfspace/csv.hpp"
#include "halfspace/errors.hpp"
#include "halfspace/norms.hpp"

namespace halfspace {

EllipticSolver::EllipticSolver(std::size_t nx, double dx) : nx_(nx), dx_(dx) {
  if (nx < 2 || !(dx > 0.0)) throw ConfigError("elliptic solver needs nx >= 2 and dx > 0");
  const double k = 1.0 / (dx * dx);
  std::vector<double> lo(nx, -k), di(nx, 1.0 + 2.0 * k), up(nx, -k);
  lo[0] = 0.0;
  up[nx - 1] = 0.0;
  // ghost u_{-1} = -u_0 and u_N = -u_{N-1} put the zero on the faces
  di[0] += k;
  di[nx - 1] += k;
  lu_ = TridiagonalSolver(lo, di, up);
}

EllipticSolver::Solution EllipticSolver::solve(std::span<const double> eta) const {
  if (eta.size() != nx_) throw PreconditionError("elliptic right-hand side has the wrong size");
  Solution s;
  s.u.assign(eta.begin(), eta.end());
  lu_.solve(s.u);
  s.du.resize(nx_);
  s.d2u.resize(nx_);
  for (std::size_t i = 0; i < nx_; ++i) {
    const double left = (i > 0) ? s.u[i - 1] : -s.u[0];
    const double right = (i + 1 < nx_) ? s.u[i + 1] : -s.u[nx_ - 1];
    s.du[i] = (right - left) / (2.0 * dx_);
    s.d2u[i] = s.u[i] - eta[i];
    if (!std::isfinite(s.u[i])) throw NumericalError("elliptic solve overflowed");
  }
  return s;
}

double hypocoercive_cross_term(const DistributionField& f, const EllipticSolver& R) {
  const Moments m = moments(f);
  const auto sol = R.solve(m.rho);
  double c = 0.0;
  for (std::size_t i = 0; i < m.rho.size(); ++i) c += sol.du[i] * m.iota[i];
  return c * R.dx();
}

double calibrate_epsilon(std::span<const DistributionField> samples, const CollisionModel& model) {
  if (samples.empty()) throw PreconditionError("calibrate_epsilon needs at least one sample");
  const PhaseGrid& g = samples.front().grid();
  const EllipticSolver R(g.nx(), g.dx());
  double eps = 1.0;
  bool any = false;
  for (const auto& f : samples) {
    const double norm2 = l2_Minv_squared(f, model.equilibrium);
    if (norm2 == 0.0) continue;
    any = true;
    const double c = std::abs(hypocoercive_cross_term(f, R));
    if (c > 0.0) eps = std::min(eps, 0.75 * norm2 / c);
  }
  if (!any) throw ZeroSignalError("calibrate_epsilon: every sample vanishes");
  return 0.5 * eps;
}

HypocoercivitySeries hypocoercivity_series(std::span<const DistributionField> fields,
                                           const CollisionModel& model, double epsilon) {
  HypocoercivitySeries out;
  if (fields.empty()) return out;
  const PhaseGrid& g = fields.front().grid();
  const EllipticSolver R(g.nx(), g.dx());
  const auto& M = model.equilibrium;
  const auto& v = g.velocity().v();
  const auto& w = g.velocity().weights();
  for (const auto& f : fields) {
    HypocoercivityState st;
    st.t = f.time();
    st.epsilon = epsilon;
    const Moments mo = moments(f);
    const auto sol = R.solve(mo.rho);
    double perp = 0.0, du2 = 0.0, d2u2 = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const double* row = f.row(i);
      for (std::size_t j = 0; j < g.nv(); ++j) {
        const double q = row[j] - mo.rho[i] * M[j];
        perp += w[j] * q * q / M[j];
      }
      du2 += sol.du[i] * sol.du[i];
      d2u2 += sol.d2u[i] * sol.d2u[i];
      cross += sol.du[i] * mo.iota[i];
    }
    const double dx = g.dx();
    st.l2_Minv_sq = l2_Minv_squared(f, M);
    st.cross = cross * dx;
    st.Z = st.l2_Minv_sq + epsilon * st.cross;
    st.Y = (perp + du2 + d2u2) * dx;
    const double* edge = f.row(0);
    for (std::size_t j = 0; j < g.nv(); ++j)
      if (v[j] < 0.0) st.boundary_flux += w[j] * std::abs(v[j]) * edge[j] * edge[j] / M[j];
    st.degenerate = st.Y == 0.0;
    if (st.Z < 0.25 * st.l2_Minv_sq || st.Z > 4.0 * st.l2_Minv_sq) {
      out.equivalence_holds = false;
      throw CalibrationStaleError("modified norm leaves [1/2, 2] ||f|| at t = " + csv_number(st.t));
    }
    out.states.push_back(st);
  }
  out.min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < out.states.size(); ++k) {
    const auto& a = out.states[k];
    const auto& b = out.states[k + 1];
    if (a.Z > 0.0) {
      const double rise = (b.Z - a.Z) / a.Z;
      out.worst_increase = std::max(out.worst_increase, rise);
      if (rise > 1e-8) out.monotone = false;
    } else if (b.Z > 0.0) {
      out.monotone = false;
    }
    const double dt = b.t - a.t;
    const double y = 0.5 * (a.Y + b.Y);
    const double ratio = (dt > 0.0 && y > 0.0) ? -(b.Z - a.Z) / (dt * y)
                                               : std::numeric_limits<double>::quiet_NaN();
    out.ratios.push_back(ratio);
    if (std::isfinite(ratio)) out.min_ratio = std::min(out.min_ratio, ratio);
  }
  if (!std::isfinite(out.min_ratio)) out.min_ratio = 0.0;
  return out;
}

double localization_peak(const PhaseGrid& grid, std::span<const double> rho) {
  const std::size_t n = grid.nx();
  std::vector<double> xr(n);
  for (std::size_t i = 0; i < n; ++i) xr[i] = grid.x(i) * rho[i];
  double best = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = (i >= 2) ? i - 2 : 0;
    const std::size_t hi = std::min(n - 1, i + 2);
    double s = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) s += xr[k];
    s /= static_cast<double>(hi - lo + 1);
    if (s > best) {
      best = s;
      arg = i;
    }
  }
  return grid.x(arg);
}

DecadeReport localization_sample(const DistributionField& f, const CollisionModel& model,
                                 const MassWindow& window) {
  const PhaseGrid& g = f.grid();
  DecadeReport d;
  d.t = f.time();
  const Moments mo = moments(f);
  std::vector<double> x(g.nx());
  for (std::size_t i = 0; i < g.nx(); ++i) x[i] = g.x(i);
  const double st = std::sqrt(d.t);
  d.window_mass_sqrt_t = window_mass(x, mo.rho, g.dx(), window.a * st, window.b * st) * st;
  d.x_t = localization_peak(g, mo.rho);
  d.x_t_over_sqrt_t = st > 0.0 ? d.x_t / st : 0.0;

  const auto& M = model.equilibrium;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  // regression of log(f t) on log M over the slab
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    if (std::abs(x[i] - d.x_t) > 1.0 + 1e-12) continue;
    const double* row = f.row(i);
    for (std::size_t j = 0; j < g.nv(); ++j) {
      if (M[j] < 1e-6) continue;
      const double r = row[j] * d.t / M[j];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      if (row[j] > 0.0 && d.t > 0.0) {
        const double lx = std::log(M[j]), ly = std::log(row[j] * d.t);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
      }
    }
  }
  d.ratio_A = std::isfinite(lo) ? lo : 0.0;
  d.ratio_B = hi;
  const double var = n ? sxx - sx * sx / static_cast<double>(n) : 0.0;
  d.profile_exponent = (n > 1 && var > 1e-12 * static_cast<double>(n))
                           ? (sxy - sx * sy / static_cast<double>(n)) / var
                           : std::numeric_limits<double>::quiet_NaN();
  return d;
}

LocalizationReport localization_report(const TrajectoryRecord& record) {
  if (record.fields.empty() || record.fields.size() != record.samples.size())
    throw PreconditionError("localization_report needs stored fields");
  const CollisionModel& m = *record.model;
  if (m.kind == CollisionKind::LaplaceBeltramiCircle)
    throw PreconditionError("localization_report applies to the relaxation and Fokker-Planck models");
  if (!(record.samples.front().signed_moment > 0.0))
    throw PreconditionError("localization needs int (x + v) f_in > 0");
  LocalizationReport rep;
  bool have_window = false;
  const double tol = std::max(record.dt, 1e-9);
  for (std::size_t k = 0; k < record.samples.size(); ++k) {
    const double t = record.samples[k].t;
    if (t < 5.0) continue;
    const double decade = std::pow(10.0, std::round(std::log10(t)));
    if (std::abs(t - decade) > tol) continue;
    const DistributionField& f = record.fields[k];
    if (!have_window) {
      const Moments mo = moments(f);
      std::vector<double> x(f.grid().nx());
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = f.grid().x(i);
      rep.window = select_mass_window(x, mo.rho, f.grid().dx(), t, 0.2);
      have_window = true;
    }
    rep.decades.push_back(localization_sample(f, m, rep.window));
  }
  return rep;
}

InterpolationRatios interpolation_ratios(const DistributionField& f, const CollisionModel& model,
                                         const WeightSpec& linf_weight) {
  const PhaseGrid& g = f.grid();
  const Moments mo = moments(f);
  double r1 = 0.0, r2 = 0.0, rx = 0.0, f1 = 0.0, fx = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const double a = std::abs(mo.rho[i]);
    r1 += a * g.dx();
    r2 += a * a * g.dx();
    rx += g.x(i) * a * g.dx();
    const double* row = f.row(i);
    for (std::size_t j = 0; j < g.nv(); ++j) {
      f1 += std::abs(row[j]) * g.volume(j);
      fx += g.x(i) * std::abs(row[j]) * g.volume(j);
    }
  }
  InterpolationRatios out;
  if (r1 > 0.0) out.l1_l2_l11 = r1 / (std::pow(std::sqrt(r2), 2.0 / 3.0) * std::cbrt(rx));
  if (f1 > 0.0) {
    const double sup = weighted_norm(f, linf_weight, model.equilibrium);
    out.l1_linf_l11 = f1 / (std::cbrt(sup) * std::pow(fx, 2.0 / 3.0));
  }
  return out;
}

TrajectoryReport analyze_trajectory(const TrajectoryRecord& record) {
  TrajectoryReport rep;
  const CollisionModel& m = *record.model;
  const auto& samples = record.samples;
  const bool have_fields = !record.fields.empty() && record.fields.size() == samples.size();

  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const auto& a = samples[k];
    const auto& b = samples[k + 1];
    if (a.signed_moment != 0.0)
      rep.signed_moment_worst_drop =
          std::max(rep.signed_moment_worst_drop, (a.signed_moment - b.signed_moment) / std::abs(a.signed_moment));
    if (a.bounded_moment != 0.0)
      rep.bounded_moment_worst_rise =
          std::max(rep.bounded_moment_worst_rise, (b.bounded_moment - a.bounded_moment) / std::abs(a.bounded_moment));
    if (a.l1 > 0.0) rep.l1_worst_rise = std::max(rep.l1_worst_rise, (b.l1 - a.l1) / a.l1);
  }
  if (!have_fields) return rep;

  const auto& f_in = record.fields.front();
  const double a0 = weighted_norm(f_in, WeightSpec::lp(1.0, 1), m.equilibrium);
  for (const auto& s : samples)
    if (a0 > 0.0) rep.first_moment_sup_ratio = std::max(rep.first_moment_sup_ratio, s.xl1 / a0);

  for (const auto& f : record.fields) {
    rep.interpolation.push_back(interpolation_ratios(f, m, record.linf_weight));
    rep.max_interp_l1_l2 = std::max(rep.max_interp_l1_l2, rep.interpolation.back().l1_l2_l11);
    rep.max_interp_l1_linf = std::max(rep.max_interp_l1_linf, rep.interpolation.back().l1_linf_l11);
  }

  bool nonzero = false;
  for (const auto& s : samples) nonzero = nonzero || s.l1 > 0.0;
  if (nonzero) {
    rep.epsilon = calibrate_epsilon(record.fields, m);
    rep.hypo = hypocoercivity_series(record.fields, m, rep.epsilon);
  } else {
    rep.hypo = hypocoercivity_series(record.fields, m, 0.5);
    rep.epsilon = 0.5;
  }

  const bool can_localize = m.kind != CollisionKind::LaplaceBeltramiCircle &&
                            samples.front().signed_moment > 0.0;
  if (can_localize) {
    rep.localization = localization_report(record);
    rep.localization_available = !rep.localization.decades.empty();
  }
  for (const auto& f : record.fields) {
    if (rep.localization_available && f.time() > 0.0) {
      rep.per_sample.push_back(localization_sample(f, m, rep.localization.window));
    } else {
      DecadeReport empty;
      empty.t = f.time();
      const double nan = std::numeric_limits<double>::quiet_NaN();
      empty.window_mass_sqrt_t = empty.x_t = empty.ratio_A = empty.ratio_B = nan;
      rep.per_sample.push_back(empty);
    }
  }
  return rep;
}

std::string trajectory_csv(const TrajectoryRecord& record, const TrajectoryReport& report) {
  std::string out = csv_preamble(
      "kinetic_trajectory", 1,
      {"t", "mass", "l1", "xl1", "x2l1", "l2_Minv_sq", "linf_w", "j_l1", "Z", "Y", "boundary_flux",
       "window_mass_sqrt_t", "x_t", "ratio_A", "ratio_B", "signed_moment", "bounded_moment"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < record.samples.size(); ++k) {
    const auto& s = record.samples[k];
    const bool hz = k < report.hypo.states.size();
    const bool hl = k < report.per_sample.size();
    csv_append_row(out, {s.t, s.mass, s.l1, s.xl1, s.x2l1, s.l2_Minv_sq, s.linf_w, s.j_l1,
                         hz ? report.hypo.states[k].Z : nan, hz ? report.hypo.states[k].Y : nan,
                         s.boundary_flux, hl ? report.per_sample[k].window_mass_sqrt_t : nan,
                         hl ? report.per_sample[k].x_t : nan, hl ? report.per_sample[k].ratio_A : nan,
                         hl ? report.per_sample[k].ratio_B : nan, s.signed_moment, s.bounded_moment});
  }
  return out;
}

}  // namespace halfspace
