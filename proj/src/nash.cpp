// SPDX-License-Identifier: Apache-2.0

#include "halfspace/nash.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>

#include "halfspace/csv.hpp"
#include "halfspace/diagnostics.hpp"
#include "halfspace/errors.hpp"
#include "halfspace/parallel.hpp"

namespace halfspace {

std::string_view to_string(EnsembleFamily family) {
  switch (family) {
    case EnsembleFamily::GaussianMixtures: return "gaussian_mixtures";
    case EnsembleFamily::RandomFourier: return "random_fourier";
    case EnsembleFamily::SplineBumps: return "spline_bumps";
  }
  return "unknown";
}

EnsembleFamily ensemble_family_from_string(std::string_view name) {
  for (auto f : {EnsembleFamily::GaussianMixtures, EnsembleFamily::RandomFourier,
                 EnsembleFamily::SplineBumps})
    if (to_string(f) == name) return f;
  throw ConfigError("unknown ensemble family '" + std::string(name) + "'");
}

namespace {

// centred cubic B-spline with support [-2, 2]
double bspline3(double t) {
  t = std::abs(t);
  if (t >= 2.0) return 0.0;
  if (t >= 1.0) {
    const double u = 2.0 - t;
    return u * u * u / 6.0;
  }
  return (4.0 - 6.0 * t * t + 3.0 * t * t * t) / 6.0;
}

double gauss(double x, double c, double s) {
  const double z = (x - c) / s;
  return std::exp(-0.5 * z * z);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

double TestFunction::operator()(double x) const {
  // Half-line members evaluate x E(x) with E symmetrised about 0.
  auto bump = [&](double y) {
    double e = 0.0;
    switch (family_) {
      case EnsembleFamily::GaussianMixtures:
        for (std::size_t k = 0; k < center_.size(); ++k)
          e += amplitude_[k] * gauss(y, center_[k], width_[k]);
        break;
      case EnsembleFamily::SplineBumps:
        for (std::size_t k = 0; k < center_.size(); ++k)
          e += amplitude_[k] * bspline3((y - center_[k]) / width_[k]);
        break;
      case EnsembleFamily::RandomFourier: {
        const double c = center_.front();
        double wave = 0.0;
        for (std::size_t k = 0; k < amplitude_.size(); ++k)
          wave += amplitude_[k] * std::cos(static_cast<double>(k) * frequency_ * (y - c));
        e = gauss(y, c, envelope_) * wave * wave;
        break;
      }
    }
    return e;
  };
  if (!half_) return bump(x);
  return x * (bump(x) + bump(-x));
}

TestFunction TestFunctionEnsemble::draw(std::size_t k, bool half) const {
  const TestFunctionEnsemble& ens = *this;
  std::mt19937_64 gen(splitmix64(ens.seed ^ splitmix64(static_cast<std::uint64_t>(ens.family) * 1000003ULL +
                                                       2 * k + (half ? 1 : 0))));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uni = [&](double a, double b) { return a + (b - a) * unit(gen); };
  // Bumps cluster around an anchor c0, with offsets measured in their own
  // widths; the ratios are translation invariant on the line, and on the
  // half-line they depend on the anchor only through c0 / width.
  const double c0 = half ? 0.0 : uni(-0.25 * ens.half_width, 0.25 * ens.half_width);
  auto offset = [&](double w) { return half ? uni(0.0, 1.0) * w : uni(-1.0, 1.0) * w; };

  TestFunction f;
  f.family_ = ens.family;
  f.half_ = half;
  switch (ens.family) {
    case EnsembleFamily::GaussianMixtures:
    case EnsembleFamily::SplineBumps: {
      const bool spline = ens.family == EnsembleFamily::SplineBumps;
      const int n = 1 + static_cast<int>(gen() % 4);
      for (int i = 0; i < n; ++i) {
        const double w = spline ? uni(1.0, 2.0) : uni(0.3, 1.5);
        f.center_.push_back(c0 + offset(w));
        f.width_.push_back(w);
        f.amplitude_.push_back(uni(0.1, 1.0));
      }
      break;
    }
    case EnsembleFamily::RandomFourier: {
      f.envelope_ = uni(0.5, 1.5);
      f.center_.push_back(c0 + offset(f.envelope_));
      f.frequency_ = uni(0.5, 2.0);
      f.amplitude_.push_back(1.0);
      for (int i = 1; i < 4; ++i) f.amplitude_.push_back(uni(-1.0, 1.0) / static_cast<double>(i + 1));
      break;
    }
  }
  return f;
}

TestFunction TestFunctionEnsemble::whole_line_member(std::size_t k) const { return draw(k, false); }
TestFunction TestFunctionEnsemble::half_line_member(std::size_t k) const { return draw(k, true); }

namespace {

// L^1, L^2 squared, x-weighted L^1 and squared derivative on a node grid.
struct NodeNorms {
  double l1 = 0.0, l2sq = 0.0, xl1 = 0.0, d2 = 0.0, peak = 0.0;
};

NodeNorms node_norms(const std::function<double(double)>& rho, double a, double b, double dx) {
  const auto n = static_cast<std::size_t>(std::llround((b - a) / dx));
  NodeNorms out;
  double prev = rho(a);
  auto add = [&](double x, double r) {
    out.l1 += std::abs(r) * dx;
    out.l2sq += r * r * dx;
    out.xl1 += std::abs(x) * std::abs(r) * dx;
    out.peak = std::max(out.peak, std::abs(r));
  };
  add(a, prev);
  for (std::size_t i = 1; i <= n; ++i) {
    const double x = a + static_cast<double>(i) * dx;
    const double r = rho(x);
    add(x, r);
    const double d = (r - prev) / dx;
    out.d2 += d * d * dx;
    prev = r;
  }
  return out;
}

}  // namespace

double nash_ratio(const std::function<double(double)>& rho, double half_width, double dx, int d) {
  const NodeNorms n = node_norms(rho, -half_width, half_width, dx);
  if (n.l1 == 0.0) return 0.0;
  const double dd = static_cast<double>(d);
  return std::pow(std::sqrt(n.l2sq), 1.0 + 2.0 / dd) / (std::pow(n.l1, 2.0 / dd) * std::sqrt(n.d2));
}

double improved_nash_ratio(const std::function<double(double)>& rho, double half_width, double dx,
                           int d) {
  const NodeNorms n = node_norms(rho, 0.0, half_width, dx);
  if (n.l1 == 0.0) return 0.0;
  if (std::abs(rho(0.0)) > 1e-12 * n.peak)
    throw PreconditionError("improved Nash check needs rho(0) = 0");
  const double dd = static_cast<double>(d);
  return std::pow(std::sqrt(n.l2sq), 1.0 + 2.0 / (dd + 2.0)) /
         (std::pow(n.xl1, 2.0 / (dd + 2.0)) * std::sqrt(n.d2));
}

namespace {

InequalityCheck reduce(std::string name, const std::vector<double>& ratio, const std::vector<char>& ok,
                       std::size_t prefix = 100) {
  InequalityCheck c;
  c.name = std::move(name);
  c.prefix = prefix;
  for (std::size_t k = 0; k < ratio.size(); ++k) {
    if (!ok[k]) ++c.violations;
    if (ratio[k] == 0.0) {
      ++c.skipped;
      continue;
    }
    if (!std::isfinite(ratio[k])) c.finite = false;
    ++c.evaluated;
    c.worst_ratio = std::max(c.worst_ratio, ratio[k]);
    if (k < prefix) c.worst_prefix = std::max(c.worst_prefix, ratio[k]);
  }
  return c;
}

}  // namespace

InequalityCheck check_nash(const TestFunctionEnsemble& ens, int d, unsigned threads) {
  std::vector<double> r(ens.count);
  std::vector<char> ok(ens.count, 1);
  parallel_for(ens.count, threads, [&](std::size_t k) {
    r[k] = nash_ratio(ens.whole_line_member(k), ens.half_width, ens.dx(), d);
  });
  return reduce("nash/" + std::string(to_string(ens.family)), r, ok);
}

InequalityCheck check_improved_nash_half(const TestFunctionEnsemble& ens, unsigned threads) {
  std::vector<double> r(ens.count);
  std::vector<char> ok(ens.count, 1);
  parallel_for(ens.count, threads, [&](std::size_t k) {
    r[k] = improved_nash_ratio(ens.half_line_member(k), ens.half_width, ens.dx());
  });
  return reduce("improved_nash_half/" + std::string(to_string(ens.family)), r, ok);
}

FourierBound fourier_pointwise_bound(const std::vector<double>& samples, double dx) {
  const std::size_t n2 = samples.size();
  if (n2 < 4 || n2 % 2) throw PreconditionError("Fourier check needs an even number of samples");
  const std::size_t n = n2 / 2;
  const double L = dx * static_cast<double>(n);
  FourierBound out;
  double mass = 0.0;
  for (std::size_t i = 0; i < n2; ++i) {
    const double x = -L + static_cast<double>(i) * dx;
    out.first_moment += std::abs(x) * std::abs(samples[i]) * dx;
    mass += std::abs(samples[i]) * dx;
  }
  if (mass == 0.0) return out;

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, samples);
  // |rho^(xi_k)| = dx |X_k|: the shift by -L only contributes a phase
  out.rho_hat_zero = dx * std::abs(spec[0]);
  if (out.rho_hat_zero > 1e-10 * mass)
    throw PreconditionError("Fourier bound needs a zero-average input; rho^(0) = " +
                            csv_number(out.rho_hat_zero));
  double peak = 0.0, tail = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double mag = dx * std::abs(spec[k]);
    peak = std::max(peak, mag);
    if (k >= n - n / 10) tail = std::max(tail, mag);
    const double xi = std::numbers::pi * static_cast<double>(k) / L;
    out.sup_ratio = std::max(out.sup_ratio, mag / xi);
  }
  out.nyquist_level = peak > 0.0 ? tail / peak : 0.0;
  if (out.nyquist_level > 1e-8)
    throw NumericalError("Fourier check under-resolved: spectrum at Nyquist is " +
                         csv_number(out.nyquist_level) + " of its peak");
  return out;
}

InequalityCheck check_fourier_pointwise_bound(const TestFunctionEnsemble& ens, unsigned threads) {
  std::vector<double> r(ens.count);
  std::vector<char> ok(ens.count, 1);
  const double dx = ens.dx();
  const std::size_t n = ens.nodes;
  parallel_for(ens.count, threads, [&](std::size_t k) {
    const TestFunction f = ens.half_line_member(k);
    std::vector<double> s(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i) {
      const double x = -ens.half_width + static_cast<double>(i) * dx;
      // odd extension of the half-line member
      s[i] = (x >= 0.0) ? f(x) : -f(-x);
    }
    const FourierBound b = fourier_pointwise_bound(s, dx);
    r[k] = b.first_moment > 0.0 ? b.sup_ratio / b.first_moment : 0.0;
    ok[k] = b.holds();
  });
  return reduce("fourier_pointwise/" + std::string(to_string(ens.family)), r, ok);
}

KatoSample kato_chain_sample(const std::function<double(double)>& rho_fn, double half_width, double dx) {
  const auto nx = static_cast<std::size_t>(std::llround(half_width / dx));
  std::vector<double> rho(nx);
  for (std::size_t i = 0; i < nx; ++i) rho[i] = rho_fn((static_cast<double>(i) + 0.5) * dx);
  const EllipticSolver R(nx, dx);
  const auto sol = R.solve(rho);
  KatoSample s;
  double du2 = 0.0, d2u2 = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = (static_cast<double>(i) + 0.5) * dx;
    s.lhs += rho[i] * rho[i] * dx;
    du2 += sol.du[i] * sol.du[i] * dx;
    d2u2 += sol.d2u[i] * sol.d2u[i] * dx;
    s.x_u += x * std::abs(sol.u[i]) * dx;
    s.x_rho += x * std::abs(rho[i]) * dx;
  }
  s.rhs = du2 + d2u2 + std::pow(s.x_rho, 0.8) * std::pow(std::sqrt(du2), 1.2);
  return s;
}

InequalityCheck check_kato_chain(const TestFunctionEnsemble& ens, unsigned threads) {
  std::vector<double> r(ens.count);
  std::vector<char> ok(ens.count, 1);
  parallel_for(ens.count, threads, [&](std::size_t k) {
    const KatoSample s = kato_chain_sample(ens.half_line_member(k), ens.half_width, ens.dx());
    r[k] = s.rhs > 0.0 ? s.lhs / s.rhs : 0.0;
    ok[k] = s.x_u <= s.x_rho * (1.0 + 1e-12);
  });
  return reduce("kato_chain/" + std::string(to_string(ens.family)), r, ok);
}

double phi_m(double m, double y, int d) {
  const double dd = static_cast<double>(d);
  return y + std::pow(m, 4.0 / (dd + 4.0)) * std::pow(y, (dd + 2.0) / (dd + 4.0));
}

double psi_m(double m, double z, int d) {
  if (!(z > 0.0)) return 0.0;
  double lo = 0.0, hi = z;  // Phi_m(y) >= y, so the root lies in [0, z]
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (phi_m(m, mid, d) < z) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

InequalityCheck check_phi_psi(std::uint64_t seed, std::size_t count, int d) {
  std::mt19937_64 gen(splitmix64(seed ^ 0x5048495053ULL));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto log_uniform = [&](double a, double b) { return a * std::pow(b / a, unit(gen)); };
  const double dd = static_cast<double>(d);
  std::vector<double> r(count);
  std::vector<char> ok(count, 1);
  for (std::size_t k = 0; k < count; ++k) {
    // the ratio depends on z / m^2 and z / z0 only
    const double m = log_uniform(1e-3, 1e3);
    const double z = m * m * log_uniform(1e-3, 1e3);
    const double z0 = z / (1.0 - unit(gen));
    const double lhs = std::pow(z0 + m * m, -2.0 / (dd + 2.0)) * std::pow(z, 1.0 + 2.0 / (dd + 2.0));
    r[k] = lhs / psi_m(m, z, d);
  }
  return reduce("phi_psi_comparison", r, ok, count / 10);
}

bool NashReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed(); });
}

std::string NashReport::csv() const {
  std::string out = "# schema: nash_report v1\n"
                    "check,worst_ratio,worst_prefix,prefix,evaluated,skipped,violations,passed\n";
  for (const auto& c : checks) {
    out += c.name + ',' + csv_number(c.worst_ratio) + ',' + csv_number(c.worst_prefix) + ',' +
           std::to_string(c.prefix) + ',' + std::to_string(c.evaluated) + ',' +
           std::to_string(c.skipped) + ',' + std::to_string(c.violations) + ',' +
           (c.passed() ? "true" : "false") + '\n';
  }
  return out;
}

NashReport run_nash_suite(std::uint64_t seed, std::size_t count, unsigned threads) {
  NashReport rep;
  for (auto family : {EnsembleFamily::GaussianMixtures, EnsembleFamily::RandomFourier,
                      EnsembleFamily::SplineBumps}) {
    TestFunctionEnsemble ens;
    ens.seed = seed;
    ens.family = family;
    ens.count = count;
    rep.checks.push_back(check_nash(ens, 1, threads));
    rep.checks.push_back(check_improved_nash_half(ens, threads));
    rep.checks.push_back(check_fourier_pointwise_bound(ens, threads));
    rep.checks.push_back(check_kato_chain(ens, threads));
  }
  rep.checks.push_back(check_phi_psi(seed, 10000));
  return rep;
}

}  // namespace halfspace
