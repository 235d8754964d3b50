// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "halfspace/diagnostics.hpp"
#include "halfspace/errors.hpp"
#include "halfspace/fit.hpp"

using namespace halfspace;

namespace {

std::shared_ptr<const CollisionModel> relaxation_model(std::size_t nv = 16) {
  return std::make_shared<const CollisionModel>(
      build_collision(CollisionKind::RelaxationBounded, VelocityDomain::ball(1.0, nv)));
}

DistributionField local_equilibrium(const std::shared_ptr<const PhaseGrid>& grid, const CollisionModel& m,
                                    double (*rho)(double)) {
  DistributionField f(grid);
  for (std::size_t i = 0; i < grid->nx(); ++i)
    for (std::size_t j = 0; j < grid->nv(); ++j) f(i, j) = rho(grid->x(i)) * m.equilibrium[j];
  return f;
}

double bump(double x) { return x * std::exp(-x * x); }

}  // namespace

TEST(Elliptic, ZeroRightHandSide) {
  EllipticSolver R(200, 0.1);
  const std::vector<double> eta(200, 0.0);
  const auto s = R.solve(eta);
  for (std::size_t i = 0; i < 200; ++i) {
    EXPECT_EQ(s.u[i], 0.0);
    EXPECT_EQ(s.du[i], 0.0);
    EXPECT_EQ(s.d2u[i], 0.0);
  }
}

TEST(Elliptic, SineIsAnEigenvector) {
  const std::size_t n = 400;
  const double dx = 0.05, L = n * dx;
  EllipticSolver R(n, dx);
  for (int k : {1, 3, 10}) {
    const double q = k * std::numbers::pi / L;
    std::vector<double> eta(n);
    for (std::size_t i = 0; i < n; ++i) eta[i] = std::sin(q * (i + 0.5) * dx);
    const auto s = R.solve(eta);
    const double sym = 4.0 / (dx * dx) * std::pow(std::sin(0.5 * q * dx), 2);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(s.u[i], eta[i] / (1.0 + sym), 1e-12);
      // continuum symbol to second order
      EXPECT_NEAR(s.u[i], eta[i] / (1.0 + q * q), std::pow(q, 4) * dx * dx / 12.0 + 1e-14);
    }
  }
}

TEST(Elliptic, MaximumPrincipleAndKato) {
  const std::size_t n = 300;
  EllipticSolver R(n, 0.1);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> eta(n), abs_eta(n);
    for (std::size_t i = 0; i < n; ++i) {
      eta[i] = uni(rng);
      abs_eta[i] = std::abs(eta[i]);
    }
    const auto s = R.solve(eta);
    const auto a = R.solve(abs_eta);
    double xu = 0.0, xeta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_GE(a.u[i], 0.0);
      EXPECT_LE(a.u[i], 1.0 + 1e-12);
      EXPECT_LE(std::abs(s.u[i]), a.u[i] + 1e-14);
      const double x = (i + 0.5) * 0.1;
      xu += x * a.u[i];
      xeta += x * abs_eta[i];
    }
    EXPECT_LE(xu, xeta);
  }
}

TEST(Elliptic, H1BoundStableUnderRefinement) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double worst[2] = {0.0, 0.0};
  for (int level = 0; level < 2; ++level) {
    const double dx = level == 0 ? 0.1 : 0.05;
    const auto n = static_cast<std::size_t>(std::llround(50.0 / dx));
    EllipticSolver R(n, dx);
    for (int trial = 0; trial < 100; ++trial) {
      // random smooth data from a few sine modes
      double a[4];
      for (double& c : a) c = uni(rng);
      std::vector<double> eta(n);
      for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < 4; ++k) eta[i] += a[k] * std::sin((k + 1) * 0.7 * (i + 0.5) * dx);
      const auto s = R.solve(eta);
      double h = 0.0, e = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        h += (s.u[i] * s.u[i] + s.du[i] * s.du[i] + s.d2u[i] * s.d2u[i]) * dx;
        e += eta[i] * eta[i] * dx;
      }
      worst[level] = std::max(worst[level], std::sqrt(h / e));
    }
  }
  EXPECT_LE(worst[0], 1.0 + 1e-9);
  EXPECT_NEAR(worst[0], worst[1], 0.05);
}

TEST(Elliptic, RejectsBadInput) {
  EXPECT_THROW(EllipticSolver(1, 0.1), ConfigError);
  EllipticSolver R(10, 0.1);
  EXPECT_THROW(R.solve(std::vector<double>(9, 0.0)), PreconditionError);
}

TEST(Calibration, LocalEquilibriumHasNoCrossTerm) {
  auto m = relaxation_model();
  auto grid = std::make_shared<const PhaseGrid>(100.0, 0.1, m->velocity);
  const auto f = local_equilibrium(grid, *m, bump);
  const EllipticSolver R(grid->nx(), grid->dx());
  EXPECT_NEAR(hypocoercive_cross_term(f, R), 0.0, 1e-15);
  const std::vector<DistributionField> samples{f};
  EXPECT_DOUBLE_EQ(calibrate_epsilon(samples, *m), 0.5);
}

TEST(Calibration, EmptyAndZeroInputs) {
  auto m = relaxation_model();
  EXPECT_THROW(calibrate_epsilon({}, *m), PreconditionError);
  auto grid = std::make_shared<const PhaseGrid>(100.0, 0.25, m->velocity);
  const std::vector<DistributionField> zeros(3, DistributionField(grid));
  EXPECT_THROW(calibrate_epsilon(zeros, *m), ZeroSignalError);
}

TEST(Calibration, EpsilonKeepsTheModifiedNormEquivalent) {
  auto m = relaxation_model();
  auto grid = std::make_shared<const PhaseGrid>(100.0, 0.1, m->velocity);
  // maximal flux: all mass moving left
  auto f = DistributionField::sample(grid, [](double x, double v) { return v < 0.0 ? bump(x) : 0.0; });
  const std::vector<DistributionField> samples{f};
  const double eps = calibrate_epsilon(samples, *m);
  EXPECT_GT(eps, 0.0);
  EXPECT_LE(eps, 0.5);
  const auto h = hypocoercivity_series(samples, *m, eps);
  ASSERT_EQ(h.states.size(), 1u);
  const double r = h.states[0].Z / h.states[0].l2_Minv_sq;
  EXPECT_GE(r, 0.5);
  EXPECT_LE(r, 2.0);
  EXPECT_TRUE(h.equivalence_holds);
}

TEST(Hypocoercivity, ZeroTrajectory) {
  auto m = relaxation_model();
  auto grid = std::make_shared<const PhaseGrid>(100.0, 0.25, m->velocity);
  std::vector<DistributionField> zeros;
  for (int k = 0; k < 4; ++k) zeros.emplace_back(grid, 1.0 * k);
  const auto h = hypocoercivity_series(zeros, *m, 0.25);
  ASSERT_EQ(h.states.size(), 4u);
  for (const auto& s : h.states) {
    EXPECT_EQ(s.Z, 0.0);
    EXPECT_EQ(s.Y, 0.0);
    EXPECT_TRUE(s.degenerate);
  }
  EXPECT_TRUE(h.monotone);
  EXPECT_EQ(h.worst_increase, 0.0);
}

TEST(Hypocoercivity, ShortRelaxationRunDecays) {
  auto m = relaxation_model();
  auto grid = std::make_shared<const PhaseGrid>(100.0, 0.1, m->velocity);
  auto f = DistributionField::sample(grid, [](double x, double) { return 0.5 * bump(std::max(0.0, x - 1.0)); });
  DiagnosticsSchedule sch;
  sch.samples_per_decade = 16;
  const auto rec = run_scenario(m, f, 20.0, {}, sch);
  const auto rep = analyze_trajectory(rec);
  EXPECT_TRUE(rep.hypo.monotone);
  EXPECT_LE(rep.hypo.worst_increase, 0.0);
  EXPECT_GT(rep.hypo.min_ratio, 0.0);
  EXPECT_TRUE(rep.hypo.equivalence_holds);
  EXPECT_LE(rep.signed_moment_worst_drop, 1e-6);
  EXPECT_LE(rep.bounded_moment_worst_rise, 1e-6);
  EXPECT_LE(rep.l1_worst_rise, 1e-12);
  const auto csv = trajectory_csv(rec, rep);
  EXPECT_EQ(csv.rfind("# schema: kinetic_trajectory v1\nt,mass,l1,", 0), 0u);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  EXPECT_EQ(lines, rec.samples.size() + 2);
}

TEST(Hypocoercivity, BoundedMomentDefectIsSecondOrder) {
  auto m = relaxation_model();
  std::vector<double> rise;
  for (double dx : {0.1, 0.05, 0.025}) {
    auto grid = std::make_shared<const PhaseGrid>(100.0, dx, m->velocity);
    // off equilibrium in v
    auto f = DistributionField::sample(grid, [](double x, double v) { return 0.5 * bump(std::max(0.0, x - 1.0)) * (1.0 + v); });
    DiagnosticsSchedule sch;
    sch.samples_per_decade = 16;
    const auto rep = analyze_trajectory(run_scenario(m, f, 20.0, {}, sch));
    EXPECT_LE(rep.signed_moment_worst_drop, 1e-12);
    rise.push_back(rep.bounded_moment_worst_rise);
  }
  EXPECT_GT(rise[0] / rise[1], 3.0);
  EXPECT_GT(rise[1] / rise[2], 3.0);
  EXPECT_LE(rise[2], 1e-6);
}

TEST(Fit, ExactPowerLaw) {
  std::vector<double> t, y;
  for (int k = 0; k <= 40; ++k) {
    t.push_back(100.0 * std::pow(20.0, k / 40.0));
    y.push_back(3.0 * std::pow(t.back(), -1.5));
  }
  const auto f = fit_decay(t, y, {100.0, 2000.0});
  EXPECT_NEAR(f.exponent, -1.5, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-10);
  EXPECT_EQ(f.n_samples, 41u);
  EXPECT_LT(f.residual, 1e-12);
}

TEST(Fit, CorrectionTermAndScaleInvariance) {
  std::vector<double> t, y, y5;
  for (int k = 0; k <= 40; ++k) {
    t.push_back(100.0 * std::pow(100.0, k / 40.0));
    y.push_back(std::pow(t.back(), -1.5) * (1.0 + 1.0 / t.back()));
    y5.push_back(5.0 * y.back());
  }
  const auto a = fit_decay(t, y, {100.0, 1e4});
  const auto b = fit_decay(t, y5, {100.0, 1e4});
  EXPECT_NEAR(a.exponent, -1.5, 0.02);
  EXPECT_NEAR(a.exponent, b.exponent, 1e-12);
  std::vector<double> c(t.size(), 2.0);
  EXPECT_NEAR(fit_decay(t, c, {100.0, 1e4}).exponent, 0.0, 1e-14);
}

TEST(Fit, ExponentialRate) {
  std::vector<double> t, y;
  for (int k = 0; k <= 20; ++k) {
    t.push_back(0.5 * k);
    y.push_back(std::exp(-2.0 * t.back()));
  }
  EXPECT_NEAR(fit_exponential(t, y, {0.0, 10.0}).exponent, -2.0, 1e-12);
}

TEST(Fit, Failures) {
  std::vector<double> t{1, 2, 3, 4, 5}, y{1, 1, 1, 1, 1};
  EXPECT_THROW(fit_decay(t, y, {1.0, 5.0}), InsufficientDataError);
  std::vector<double> t2, y2;
  for (int k = 1; k <= 10; ++k) {
    t2.push_back(k);
    y2.push_back(k == 5 ? 0.0 : 1.0);
  }
  EXPECT_THROW(fit_decay(t2, y2, {1.0, 10.0}), ZeroSignalError);
  EXPECT_THROW(fit_decay(t2, std::vector<double>(9, 1.0), {1.0, 10.0}), PreconditionError);
  EXPECT_THROW(fit_decay(t2, std::vector<double>(10, 1.0), {5.0, 1.0}), PreconditionError);
}

TEST(Localization, Preconditions) {
  auto circle = std::make_shared<const CollisionModel>(
      build_collision(CollisionKind::LaplaceBeltramiCircle, VelocityDomain::circle(16)));
  auto grid = std::make_shared<const PhaseGrid>(100.0, 0.5, circle->velocity);
  const auto f = DistributionField::sample(grid, [](double x, double) { return bump(x); });
  const auto rec = run_scenario(circle, f, 1.0, {});
  EXPECT_THROW(localization_report(rec), PreconditionError);

  auto m = relaxation_model();
  auto g2 = std::make_shared<const PhaseGrid>(100.0, 0.5, m->velocity);
  DiagnosticsSchedule nofields;
  nofields.store_fields = false;
  const auto r2 = run_scenario(m, local_equilibrium(g2, *m, bump), 1.0, {}, nofields);
  EXPECT_THROW(localization_report(r2), PreconditionError);
  const auto r3 = run_scenario(m, DistributionField(g2), 1.0, {});
  EXPECT_THROW(localization_report(r3), PreconditionError);
}

TEST(Interpolation, ClosedFormAndInvariances) {
  auto m = relaxation_model();
  auto grid = std::make_shared<const PhaseGrid>(100.0, 0.005, m->velocity);
  const auto w = default_linf_weight(*m);
  const auto f = local_equilibrium(grid, *m, bump);
  // ||rho||_1 = 1/2, ||rho||_2^2 = sqrt(pi) / (8 sqrt 2), ||x rho||_1 = sqrt(pi) / 4
  const double sp = std::sqrt(std::numbers::pi);
  const double expected = 0.5 / (std::pow(sp / (8.0 * std::sqrt(2.0)), 1.0 / 3.0) * std::cbrt(sp / 4.0));
  const auto r = interpolation_ratios(f, *m, w);
  EXPECT_NEAR(r.l1_l2_l11, expected, 1e-4);
  EXPECT_GT(r.l1_linf_l11, 0.0);

  auto g = f;
  for (double& v : g.values()) v *= 3.0;
  const auto r3 = interpolation_ratios(g, *m, w);
  EXPECT_NEAR(r3.l1_l2_l11, r.l1_l2_l11, 1e-12);
  EXPECT_NEAR(r3.l1_linf_l11, r.l1_linf_l11, 1e-12);

  const auto wide = local_equilibrium(grid, *m, [](double x) { return bump(x / 2.0); });
  EXPECT_NEAR(interpolation_ratios(wide, *m, w).l1_l2_l11, r.l1_l2_l11, 1e-4);

  const auto zero = interpolation_ratios(DistributionField(grid), *m, w);
  EXPECT_EQ(zero.l1_l2_l11, 0.0);
  EXPECT_EQ(zero.l1_linf_l11, 0.0);
}
