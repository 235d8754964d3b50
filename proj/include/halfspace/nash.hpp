// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace halfspace {

enum class EnsembleFamily { GaussianMixtures, RandomFourier, SplineBumps };

std::string_view to_string(EnsembleFamily family);
EnsembleFamily ensemble_family_from_string(std::string_view name);

/// One randomly drawn test function. Whole-line members are non-negative
/// bumps; half-line members have the form x E(x) with E even, smooth and
/// non-negative, so they vanish at 0 and their odd extension is smooth.
class TestFunction {
 public:
  double operator()(double x) const;
  bool half_line() const { return half_; }

 private:
  friend struct TestFunctionEnsemble;
  EnsembleFamily family_ = EnsembleFamily::GaussianMixtures;
  bool half_ = false;
  std::vector<double> center_, width_, amplitude_;
  double envelope_ = 1.0, frequency_ = 1.0;
};

/// Seeded ensemble; member k depends only on (seed, family, k).
struct TestFunctionEnsemble {
  std::uint64_t seed = 1;
  EnsembleFamily family = EnsembleFamily::GaussianMixtures;
  std::size_t count = 500;
  double half_width = 20.0;  // support box [-L, L] or [0, L]
  std::size_t nodes = 2000;  // grid cells across [0, L]

  TestFunction whole_line_member(std::size_t k) const;
  TestFunction half_line_member(std::size_t k) const;
  double dx() const { return half_width / static_cast<double>(nodes); }

 private:
  TestFunction draw(std::size_t k, bool half) const;
};

/// ||rho||_2^{1+2/d} / (||rho||_1^{2/d} ||rho'||_2), sampled on [-L, L].
double nash_ratio(const std::function<double(double)>& rho, double half_width, double dx, int d = 1);

/// ||rho||_2^{1+2/(d+2)} / (||x rho||_1^{2/(d+2)} ||rho'||_2) on [0, L].
/// Throws PreconditionError when rho(0) != 0.
double improved_nash_ratio(const std::function<double(double)>& rho, double half_width, double dx,
                           int d = 1);

struct InequalityCheck {
  std::string name;
  double worst_ratio = 0.0;
  double worst_prefix = 0.0;  // max over the first `prefix` members
  std::size_t prefix = 100;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  // vanishing members
  std::size_t violations = 0;
  bool finite = true;
  /// worst ratio within 5% of the worst over the prefix
  bool saturated() const { return finite && worst_ratio <= 1.05 * worst_prefix; }
  bool passed() const { return saturated() && violations == 0; }
};

InequalityCheck check_nash(const TestFunctionEnsemble& ensemble, int d = 1, unsigned threads = 1);
InequalityCheck check_improved_nash_half(const TestFunctionEnsemble& ensemble, unsigned threads = 1);

struct FourierBound {
  double rho_hat_zero = 0.0;     // |rho^(0)|
  double sup_ratio = 0.0;        // sup_{xi != 0} |rho^(xi)| / |xi|
  double first_moment = 0.0;     // int |x| |rho|
  double nyquist_level = 0.0;    // spectrum near Nyquist / peak
  bool holds() const { return sup_ratio <= first_moment * (1.0 + 1e-12); }
};

/// Pointwise bound |rho^(xi)| <= |xi| int |x||rho| for samples on the
/// symmetric grid x_n = -L + n dx, n = 0..2N-1, with rho^(xi) =
/// int rho(x) e^{-i x xi} dx approximated by the DFT (xi_k = pi k / L).
/// Throws PreconditionError when rho^(0) != 0 (input not zero-average) and
/// NumericalError when the spectrum has not decayed to 1e-8 at Nyquist.
FourierBound fourier_pointwise_bound(const std::vector<double>& samples, double dx);

/// Odd-extends every half-line member to [-L, L] and applies the bound.
/// `violations` counts members where it fails.
InequalityCheck check_fourier_pointwise_bound(const TestFunctionEnsemble& ensemble,
                                              unsigned threads = 1);

/// ||rho||_2^2 against ||u'||_{H^1}^2 + ||x rho||_1^{4/5} ||u'||_2^{6/5} with
/// u = R rho; `violations` counts failures of int x u <= int x rho.
InequalityCheck check_kato_chain(const TestFunctionEnsemble& ensemble, unsigned threads = 1);

struct KatoSample {
  double lhs = 0.0, rhs = 0.0;
  double x_u = 0.0, x_rho = 0.0;
};
KatoSample kato_chain_sample(const std::function<double(double)>& rho, double half_width, double dx);

/// Phi_m(y) = y + m^{4/(d+4)} y^{(d+2)/(d+4)} and its inverse by bisection.
double phi_m(double m, double y, int d = 1);
double psi_m(double m, double z, int d = 1);

/// Ratio (z0 + m^2)^{-2/(d+2)} z^{1+2/(d+2)} / Psi_m(z) over `count` random
/// triples with z <= z0; reports the worst ratio (the implicit constant).
InequalityCheck check_phi_psi(std::uint64_t seed, std::size_t count = 10000, int d = 1);

struct NashReport {
  std::vector<InequalityCheck> checks;
  bool passed() const;
  std::string csv() const;
};

/// All suites on `count`-member ensembles of every family.
NashReport run_nash_suite(std::uint64_t seed, std::size_t count = 500, unsigned threads = 1);

}  // namespace halfspace
