// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "halfspace/errors.hpp"
#include "halfspace/heat.hpp"

using namespace halfspace;

namespace {

double bump(double x) { return x > 0.0 ? x * std::exp(-x * x) : 0.0; }
double gauss(double x) { return std::exp(-x * x); }

// the odd extension of x e^{-x^2} evolves in closed form
double bump_solution(double t, double x) {
  const double s = 1.0 + 4.0 * t;
  return x * std::exp(-x * x / s) / std::pow(s, 1.5);
}

double mass(const HeatField& f) {
  double m = 0.0;
  for (double v : f.values) m += v * f.dx;
  return m;
}

}  // namespace

TEST(HeatStep, ZeroStaysZero) {
  auto f = HeatField::make(HeatMode::Half, 50.0, 0.05, [](double) { return 0.0; });
  auto g = step_heat(f, 0.1);
  for (double v : g.values) EXPECT_EQ(v, 0.0);
  EXPECT_DOUBLE_EQ(g.time, 0.1);
}

TEST(HeatStep, WholeLineConservesMass) {
  auto f = HeatField::make(HeatMode::Whole, 40.0, 0.05, gauss);
  const double m0 = mass(f);
  auto g = step_heat(f, 0.01);
  EXPECT_NEAR(mass(g), m0, 1e-12 * m0);
  for (int k = 0; k < 100; ++k) advance_heat(g, 0.05);
  EXPECT_NEAR(mass(g), m0, 1e-12 * m0);
}

TEST(HeatStep, HalfLineFirstMomentAndMonotoneMass) {
  auto f = HeatField::make(HeatMode::Half, 60.0, 0.05, bump);
  auto first = [](const HeatField& h) {
    double m = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) m += h.x(i) * h.values[i] * h.dx;
    return m;
  };
  const double m1 = first(f);
  double last = mass(f);
  while (f.time < 10.0 - 1e-12) {
    advance_heat(f, std::max(1e-3, f.time / 200.0));
    EXPECT_EQ(f.values.front(), 0.0);
    const double m = mass(f);
    EXPECT_LE(m, last * (1.0 + 1e-14));
    last = m;
    for (double v : f.values) EXPECT_GE(v, 0.0);
  }
  EXPECT_NEAR(first(f), m1, 1e-8 * m1);
}

TEST(HeatStep, FarMassIsATruncationError) {
  auto f = HeatField::make(HeatMode::Half, 10.0, 0.05, [](double x) { return std::exp(-(x - 9.5) * (x - 9.5)); });
  EXPECT_THROW(step_heat(f, 0.01), TruncationError);
}

TEST(HeatKernel, QuadratureMatchesClosedForm) {
  for (double t : {0.5, 10.0})
    for (double x : {0.3, 1.0, 4.0, 9.0})
      EXPECT_NEAR(heat_half_line_kernel(bump, t, x), bump_solution(t, x), 1e-10);
}

TEST(HeatKernel, CrankNicolsonMatchesOracleAtTen) {
  EXPECT_LE(heat_kernel_oracle_error(bump, 10.0, 0.05), 1e-4);
}

TEST(HeatDecay, WholeLineExponent) {
  HeatOptions o;
  o.fit_window = FitWindow{100.0, 2000.0};
  const auto r = heat_decay_experiment(HeatMode::Whole, gauss, 2000.0, o);
  ASSERT_TRUE(r.fit);
  EXPECT_NEAR(r.fit->exponent, -0.5, 0.1);
}

TEST(HeatDecay, HalfLineExponentAndMomentDrift) {
  const auto r = heat_decay_experiment(HeatMode::Half, bump, 2000.0);
  ASSERT_TRUE(r.fit);
  EXPECT_NEAR(r.fit->exponent, -1.5, 0.1);
  EXPECT_LE(r.max_first_moment_drift, 1e-8);
  EXPECT_FALSE(r.zero_signal);
}

TEST(HeatDecay, ZeroSignalIsFlagged) {
  const auto r = heat_decay_experiment(HeatMode::Half, [](double) { return 0.0; }, 100.0);
  EXPECT_TRUE(r.zero_signal);
  EXPECT_FALSE(r.fit);
  for (const auto& s : r.series) {
    EXPECT_EQ(s.l1, 0.0);
    EXPECT_EQ(s.l2sq, 0.0);
  }
}

TEST(HeatDecay, Preconditions) {
  HeatOptions o;
  o.x_max = 40.0;
  EXPECT_THROW(heat_decay_experiment(HeatMode::Half, [](double x) { return -bump(x); }, 10.0, o),
               PreconditionError);
  EXPECT_THROW(heat_decay_experiment(HeatMode::Half, [](double x) { return x < 20.0 ? 1.0 : 0.0; }, 10.0, o),
               PreconditionError);
}

TEST(HeatLocalization, ChainExponents) {
  const auto r = heat_localization_experiment(bump, 2000.0);
  EXPECT_NEAR(r.l1_fit.exponent, -0.5, 0.1);
  EXPECT_NEAR(r.x2_fit.exponent, 0.5, 0.1);
  EXPECT_NEAR(r.peak_fit.exponent, 0.5, 0.1);
  EXPECT_LE(r.max_cs_ratio, 1.0);
  EXPECT_LT(r.window.a, r.window.b);
  ASSERT_FALSE(r.window_mass_sqrt_t.empty());
  const auto [lo, hi] = std::minmax_element(r.window_mass_sqrt_t.begin(), r.window_mass_sqrt_t.end());
  EXPECT_LT(*hi / *lo, 1.5);
}

TEST(HeatLocalization, PeakFollowsClosedFormMode) {
  auto f = HeatField::make(HeatMode::Half, 400.0, 0.05, bump);
  while (f.time < 100.0 - 1e-12) {
    double dt = std::max(1e-3, f.time / 200.0);
    if (f.time + dt > 100.0) dt = 100.0 - f.time;
    advance_heat(f, dt);
  }
  const auto s = heat_sample(f);
  EXPECT_NEAR(s.x_peak, std::sqrt((1.0 + 4.0 * f.time) / 2.0), 0.05);
}

TEST(HeatLocalization, RequiresPositiveFirstMoment) {
  EXPECT_THROW(heat_localization_experiment([](double) { return 0.0; }, 100.0), PreconditionError);
}

TEST(HeatWindow, QuantileWindowCapturesSixtyPercent) {
  std::vector<double> x, rho;
  const double dx = 0.01, t = 4.0;
  for (int i = 0; i < 4000; ++i) {
    x.push_back(i * dx);
    rho.push_back(bump_solution(t, i * dx));
  }
  double total = 0.0;
  for (double r : rho) total += r * dx;
  const auto w = select_mass_window(x, rho, dx, t);
  const double inside = window_mass(x, rho, dx, w.a * std::sqrt(t), w.b * std::sqrt(t));
  EXPECT_NEAR(inside / total, 0.6, 0.01);
}

TEST(HeatCsv, SchemaHeader) {
  HeatSample s;
  s.t = 1.0;
  const auto csv = heat_csv({s});
  EXPECT_EQ(csv.rfind("# schema: heat_trajectory v1\nt,l1,l2sq,xl1,x2l1,linf,window_mass,x_peak\n", 0), 0u);
}
