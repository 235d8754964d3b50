// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>

namespace halfspace {

struct FitWindow {
  double lo;
  double hi;
};

/// Least-squares fit of a sampled series on a window.
struct DecayFit {
  double exponent = 0.0;   // slope
  double intercept = 0.0;  // log value at log t = 0 (or t = 0 for rates)
  double residual = 0.0;   // RMS of the log residuals
  FitWindow window{0.0, 0.0};
  std::size_t n_samples = 0;
};

/// Power law: slope of log(value) against log(t) over samples with t inside
/// the window. Needs >= 8 samples, all values > 0 (ZeroSignalError otherwise).
DecayFit fit_decay(std::span<const double> t, std::span<const double> value, FitWindow window);

/// Exponential: slope of log(value) against t. The returned exponent is the
/// slope, so a decay e^{-kappa t} gives exponent -kappa.
DecayFit fit_exponential(std::span<const double> t, std::span<const double> value,
                         FitWindow window);

}  // namespace halfspace
