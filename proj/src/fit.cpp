// SPDX-License-Identifier: Apache-2.0

#include "halfspace/fit.hpp"

#include <cmath>
#include <vector>

#include "halfspace/errors.hpp"

namespace halfspace {

namespace {

DecayFit least_squares(std::span<const double> t, std::span<const double> value, FitWindow window,
                       bool log_abscissa) {
  if (t.size() != value.size()) throw PreconditionError("fit: time and value series differ in length");
  if (!(window.lo <= window.hi)) throw PreconditionError("fit: empty window");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window.lo || t[i] > window.hi) continue;
    if (!(value[i] > 0.0) || !std::isfinite(value[i]))
      throw ZeroSignalError("fit: non-positive value on the fit window");
    if (log_abscissa && !(t[i] > 0.0)) throw PreconditionError("fit: power-law window must exclude t <= 0");
    xs.push_back(log_abscissa ? std::log(t[i]) : t[i]);
    ys.push_back(std::log(value[i]));
  }
  const std::size_t n = xs.size();
  if (n < 8) throw InsufficientDataError("fit: fewer than 8 samples in the window");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientDataError("fit: samples do not span the window");

  DecayFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (fit.intercept + fit.exponent * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  fit.window = window;
  fit.n_samples = n;
  return fit;
}

}  // namespace

DecayFit fit_decay(std::span<const double> t, std::span<const double> value, FitWindow window) {
  return least_squares(t, value, window, true);
}

DecayFit fit_exponential(std::span<const double> t, std::span<const double> value,
                         FitWindow window) {
  return least_squares(t, value, window, false);
}

}  // namespace halfspace
