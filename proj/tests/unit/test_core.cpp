// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "halfspace/collision.hpp"
#include "halfspace/errors.hpp"
#include "halfspace/norms.hpp"
#include "halfspace/phase_grid.hpp"
#include "halfspace/tridiagonal.hpp"

using namespace halfspace;

namespace {

std::vector<double> random_profile(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<double> f(n);
  for (auto& x : f) x = g(gen);
  return f;
}

}  // namespace

TEST(VelocityDomain, BallNodesAndMeasure) {
  auto d = VelocityDomain::ball(1.0, 32);
  EXPECT_EQ(d.size(), 32u);
  for (double v : d.v()) EXPECT_LT(std::abs(v), 1.0);
  for (double w : d.weights()) EXPECT_GT(w, 0.0);
  EXPECT_NEAR(d.measure(), 2.0, 1e-14);
}

TEST(VelocityDomain, RealLineAndCircle) {
  auto r = VelocityDomain::real_line(8.0, 64);
  for (double v : r.v()) EXPECT_LE(std::abs(v), 8.0);
  auto c = VelocityDomain::circle(64);
  EXPECT_NEAR(c.measure(), 2.0 * std::numbers::pi, 1e-12);
  for (std::size_t j = 0; j < c.size(); ++j) {
    EXPECT_GE(c.theta()[j], 0.0);
    EXPECT_LT(c.theta()[j], 2.0 * std::numbers::pi);
    EXPECT_DOUBLE_EQ(c.v()[j], std::cos(c.theta()[j]));
  }
}

TEST(Collision, EquilibriumIsProbabilityWithZeroMean) {
  for (auto kind : {CollisionKind::RelaxationBounded, CollisionKind::RelaxationGaussian,
                    CollisionKind::FokkerPlanck, CollisionKind::LaplaceBeltramiCircle}) {
    const auto m = build_collision(kind, natural_velocity_domain(kind, kind == CollisionKind::RelaxationBounded ? 1.0 : 8.0, 48));
    double mass = 0.0, mean = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) {
      mass += m.equilibrium[j] * m.velocity.weights()[j];
      mean += m.velocity.v()[j] * m.equilibrium[j] * m.velocity.weights()[j];
    }
    EXPECT_NEAR(mass, 1.0, 1e-12) << to_string(kind);
    EXPECT_NEAR(mean, 0.0, 1e-12) << to_string(kind);
    std::vector<double> lm(m.size());
    m.apply(m.equilibrium.data(), lm.data());
    double lmax = 0.0, mmax = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) {
      lmax = std::max(lmax, std::abs(lm[j]));
      mmax = std::max(mmax, m.equilibrium[j]);
    }
    EXPECT_LE(lmax, 1e-8 * mmax) << to_string(kind);
  }
}

TEST(Collision, BoundedRelaxationIsBgkWithUniformM) {
  const auto m = build_collision(CollisionKind::RelaxationBounded, VelocityDomain::ball(1.0, 12));
  for (double M : m.equilibrium) EXPECT_NEAR(M, 0.5, 1e-15);
  std::mt19937_64 gen(3);
  const auto f = random_profile(gen, 12);
  double rho = 0.0;
  for (std::size_t j = 0; j < 12; ++j) rho += f[j] * m.velocity.weights()[j];
  std::vector<double> out(12);
  m.apply(f.data(), out.data());
  for (std::size_t j = 0; j < 12; ++j) EXPECT_NEAR(out[j], rho / 2.0 - f[j], 1e-14);
}

TEST(Collision, FokkerPlanckAnnihilatesDiscreteGaussian) {
  const auto m = build_collision(CollisionKind::FokkerPlanck, VelocityDomain::real_line(8.0, 128));
  std::vector<double> out(m.size());
  m.apply(m.equilibrium.data(), out.data());
  for (double x : out) EXPECT_LE(std::abs(x), 1e-8);
}

TEST(Collision, CircleSecondDifferenceOfCosine) {
  double prev = 0.0;
  for (std::size_t n : {64u, 128u}) {
    const auto m = build_collision(CollisionKind::LaplaceBeltramiCircle, VelocityDomain::circle(n));
    std::vector<double> c(n), out(n);
    for (std::size_t j = 0; j < n; ++j) c[j] = std::cos(m.velocity.theta()[j]);
    m.apply(c.data(), out.data());
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(out[j] + c[j]));
    const double dth = 2.0 * std::numbers::pi / static_cast<double>(n);
    EXPECT_LE(err, dth * dth / 12.0 * 1.01);
    if (prev > 0.0) EXPECT_NEAR(prev / err, 4.0, 0.05);
    prev = err;
  }
}

TEST(Collision, IncompatibleDomainOrTooFewNodes) {
  EXPECT_THROW(build_collision(CollisionKind::FokkerPlanck, VelocityDomain::ball(1.0, 16)), ConfigError);
  EXPECT_THROW(build_collision(CollisionKind::LaplaceBeltramiCircle, VelocityDomain::real_line(8.0, 16)),
               ConfigError);
  EXPECT_THROW(build_collision(CollisionKind::RelaxationBounded, VelocityDomain::ball(1.0, 3)), ConfigError);
  EXPECT_THROW(collision_kind_from_string("bgk"), ConfigError);
  EXPECT_EQ(collision_kind_from_string("fokker_planck"), CollisionKind::FokkerPlanck);
}

TEST(AdjointIdentity, RelaxationBounded) {
  const auto rep = adjoint_identity_check(
      build_collision(CollisionKind::RelaxationBounded, VelocityDomain::ball(1.0, 32)));
  EXPECT_NEAR(rep.c_L, 1.0, 1e-12);
  EXPECT_LE(rep.adjoint_one_residual, 1e-12);
  EXPECT_LE(rep.phi_residual, 1e-12);
}

TEST(AdjointIdentity, CircleSecondOrder) {
  const auto rep = adjoint_identity_check(
      build_collision(CollisionKind::LaplaceBeltramiCircle, VelocityDomain::circle(64)));
  const double dth = 2.0 * std::numbers::pi / 64.0;
  EXPECT_NEAR(rep.c_L, 1.0, dth * dth);
  EXPECT_LE(rep.adjoint_one_residual, 1e-12);
}

TEST(AdjointIdentity, FokkerPlanckMeasuredConstantIsOne) {
  const auto m = build_collision(CollisionKind::FokkerPlanck, VelocityDomain::real_line(8.0, 64));
  const auto rep = adjoint_identity_check(m);
  EXPECT_NEAR(rep.c_L, 1.0, 1e-10);
  EXPECT_NEAR(m.c_L, rep.c_L, 1e-12);
  EXPECT_LE(rep.adjoint_one_residual, 1e-10);
}

TEST(AdjointIdentity, FlatAdjointMatchesInnerProducts) {
  std::mt19937_64 gen(11);
  for (auto kind : {CollisionKind::RelaxationGaussian, CollisionKind::FokkerPlanck,
                    CollisionKind::LaplaceBeltramiCircle}) {
    const auto m = build_collision(kind, natural_velocity_domain(kind, 8.0, 40));
    const Eigen::MatrixXd A = flat_adjoint(m);
    const auto& w = m.velocity.weights();
    for (int trial = 0; trial < 20; ++trial) {
      const auto f = random_profile(gen, m.size()), g = random_profile(gen, m.size());
      std::vector<double> lf(m.size());
      m.apply(f.data(), lf.data());
      double lhs = 0.0, rhs = 0.0, nf = 0.0, ng = 0.0;
      for (std::size_t i = 0; i < m.size(); ++i) {
        double ag = 0.0;
        for (std::size_t j = 0; j < m.size(); ++j) ag += A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * g[j];
        lhs += lf[i] * g[i] * w[i];
        rhs += f[i] * ag * w[i];
        nf += f[i] * f[i] * w[i];
        ng += g[i] * g[i] * w[i];
      }
      EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::sqrt(nf * ng) * 10.0) << to_string(kind);
    }
  }
}

TEST(SpectralGap, RelaxationIsOne) {
  EXPECT_NEAR(spectral_gap(build_collision(CollisionKind::RelaxationBounded, VelocityDomain::ball(1.0, 16))),
              1.0, 1e-10);
}

TEST(SpectralGap, FokkerPlanckAndCircleNearOne) {
  const double fp = spectral_gap(build_collision(CollisionKind::FokkerPlanck, VelocityDomain::real_line(8.0, 256)));
  EXPECT_NEAR(fp, 1.0, 0.02);
  const double c = spectral_gap(build_collision(CollisionKind::LaplaceBeltramiCircle, VelocityDomain::circle(64)));
  EXPECT_NEAR(c, 1.0, 0.02);
}

TEST(SpectralGap, StableUnderResolutionDoubling) {
  for (auto kind : {CollisionKind::FokkerPlanck, CollisionKind::LaplaceBeltramiCircle}) {
    const double a = spectral_gap(build_collision(kind, natural_velocity_domain(kind, 8.0, 64)));
    const double b = spectral_gap(build_collision(kind, natural_velocity_domain(kind, 8.0, 128)));
    EXPECT_GT(a, 0.0);
    EXPECT_LE(std::abs(a - b) / b, 0.02) << to_string(kind);
  }
}

TEST(SpectralGap, DissipationAndGapInequalityOnRandomProfiles) {
  std::mt19937_64 gen(5);
  for (auto kind : {CollisionKind::RelaxationBounded, CollisionKind::RelaxationGaussian,
                    CollisionKind::FokkerPlanck, CollisionKind::LaplaceBeltramiCircle}) {
    const auto m = build_collision(kind, natural_velocity_domain(kind, kind == CollisionKind::RelaxationBounded ? 1.0 : 8.0, 32));
    for (int trial = 0; trial < 200; ++trial) {
      // random profiles of size comparable to M so the M^{-1} weight stays tame
      auto f = random_profile(gen, m.size());
      for (std::size_t j = 0; j < m.size(); ++j) f[j] *= m.equilibrium[j];
      std::vector<double> lf(m.size()), perp(m.size());
      m.apply(f.data(), lf.data());
      const double rho = m.density(f.data());
      for (std::size_t j = 0; j < m.size(); ++j) perp[j] = f[j] - rho * m.equilibrium[j];
      const double diss = inner_Minv(m, lf.data(), f.data());
      const double pp = inner_Minv(m, perp.data(), perp.data());
      EXPECT_LE(diss, 1e-12 * pp) << to_string(kind);
      EXPECT_LE(diss, -m.spectral_gap * pp * (1.0 - 1e-9) + 1e-14) << to_string(kind);
    }
  }
}

namespace {

std::shared_ptr<const PhaseGrid> unit_ball_grid(std::size_t nv = 16, double dx = 0.1, double x_max = 100.0) {
  return std::make_shared<const PhaseGrid>(x_max, dx, VelocityDomain::ball(1.0, nv));
}

}  // namespace

TEST(WeightedNorm, ZeroField) {
  auto grid = unit_ball_grid();
  DistributionField f(grid);
  std::vector<double> M(grid->nv(), 0.5);
  for (double p : {1.0, 2.0, WeightSpec::infinity()})
    for (int k : {-1, 0, 1})
      for (auto w : {VelocityWeight::One, VelocityWeight::InvSqrtM, VelocityWeight::InvM})
        EXPECT_EQ(weighted_norm(f, WeightSpec::lp(p, k, w), M), 0.0);
}

TEST(WeightedNorm, EquilibriumIndicatorExamples) {
  auto grid = unit_ball_grid(16, 0.05);
  std::vector<double> M(grid->nv(), 0.5);
  auto f = DistributionField::sample(grid, [](double x, double) { return x <= 1.0 ? 0.5 : 0.0; });
  EXPECT_NEAR(weighted_norm(f, WeightSpec::lp(1.0), M), 1.0, 1e-12);
  // L^2(M^{-1}) is omega = M^{-1/2}: int f^2 / M = int M = 1
  EXPECT_NEAR(weighted_norm(f, WeightSpec::lp(2.0, 0, VelocityWeight::InvSqrtM), M), 1.0, 1e-12);
  // omega = M^{-1} gives (int_0^1 dx |Omega_v|)^{1/2} = sqrt(2)
  EXPECT_NEAR(weighted_norm(f, WeightSpec::lp(2.0, 0, VelocityWeight::InvM), M), std::sqrt(2.0), 1e-12);
}

TEST(WeightedNorm, HomogeneousAndMonotone) {
  auto grid = unit_ball_grid(8, 0.5);
  std::vector<double> M(grid->nv(), 0.5);
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DistributionField f(grid), g(grid);
  for (std::size_t n = 0; n < f.values().size(); ++n) {
    f.values()[n] = u(gen);
    g.values()[n] = f.values()[n] + u(gen);
  }
  for (double p : {1.0, 2.0, 3.0, WeightSpec::infinity()}) {
    const auto w = WeightSpec::lp(p, 1, VelocityWeight::InvSqrtM);
    const double base = weighted_norm(f, w, M);
    for (double c : {-3.0, 1e-3, 1e3}) {
      DistributionField cf = f;
      for (auto& x : cf.values()) x *= c;
      EXPECT_NEAR(weighted_norm(cf, w, M), std::abs(c) * base, 1e-12 * std::abs(c) * base);
    }
    if (std::isfinite(p)) EXPECT_GT(weighted_norm(g, w, M), base);
  }
}

TEST(WeightSpec, StretchedAdmissibility) {
  WeightSpec w;
  w.omega = VelocityWeight::Stretched;
  w.s = 1.0;
  w.r = 1.5;
  EXPECT_NO_THROW(w.validate());
  w.r = 0.5;
  EXPECT_THROW(w.validate(), ConfigError);
  w.s = 1.5;
  w.r = 0.1;
  EXPECT_NO_THROW(w.validate());
  w.s = 2.0;
  w.r = 0.4;
  EXPECT_NO_THROW(w.validate());
  w.r = 0.6;
  EXPECT_THROW(w.validate(), ConfigError);
  EXPECT_THROW(WeightSpec::lp(0.5).validate(), ConfigError);
  WeightSpec bad_k = WeightSpec::lp(1.0);
  bad_k.k = 2;
  EXPECT_THROW(bad_k.validate(), ConfigError);
}

TEST(WeightSpec, CapOverflowIsAnError) {
  // Gaussian at |v| ~ 40 underflows, so M^{-1} exceeds the cap
  const auto vel = VelocityDomain::real_line(40.0, 64);
  std::vector<double> M;
  for (double v : vel.v()) M.push_back(std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi));
  auto grid = std::make_shared<const PhaseGrid>(100.0, 1.0, vel);
  auto f = DistributionField::sample(grid, [](double x, double) { return x < 2.0 ? 1.0 : 0.0; });
  EXPECT_THROW(weighted_norm(f, WeightSpec::lp(2.0, 0, VelocityWeight::InvM), M), NumericalError);
}

TEST(Moments, LocalEquilibriumHasNoCurrent) {
  const auto m = build_collision(CollisionKind::RelaxationGaussian, VelocityDomain::real_line(8.0, 32));
  auto grid = std::make_shared<const PhaseGrid>(100.0, 0.5, m.velocity);
  DistributionField f(grid);
  for (std::size_t i = 0; i < grid->nx(); ++i)
    for (std::size_t j = 0; j < grid->nv(); ++j) f(i, j) = m.equilibrium[j] * std::exp(-grid->x(i));
  const auto mo = moments(f);
  for (std::size_t i = 0; i < grid->nx(); ++i) {
    EXPECT_NEAR(mo.rho[i], std::exp(-grid->x(i)), 1e-13);
    EXPECT_NEAR(mo.iota[i], 0.0, 1e-13);
  }
}

TEST(Moments, ZeroAndSingleCell) {
  // dx = 4/21 puts cell 10 at x = 2; 10 midpoint nodes put one at v = 0.5
  auto grid = std::make_shared<const PhaseGrid>(100.0, 4.0 / 21.0, VelocityDomain::ball(1.0, 10));
  DistributionField z(grid);
  const auto mz = moments(z);
  EXPECT_EQ(mz.mass, 0.0);
  EXPECT_EQ(mz.first_x_moment, 0.0);
  EXPECT_EQ(mz.signed_moment, 0.0);

  DistributionField f(grid);
  std::size_t jv = 0;
  for (std::size_t j = 0; j < grid->nv(); ++j)
    if (std::abs(grid->velocity().v()[j] - 0.5) < std::abs(grid->velocity().v()[jv] - 0.5)) jv = j;
  ASSERT_NEAR(grid->x(10), 2.0, 1e-12);
  ASSERT_NEAR(grid->velocity().v()[jv], 0.5, 1e-12);
  f(10, jv) = 1.0 / grid->volume(jv);
  const auto mo = moments(f);
  EXPECT_NEAR(mo.mass, 1.0, 1e-12);
  EXPECT_NEAR(mo.first_x_moment, 2.0, 1e-12);
  EXPECT_NEAR(mo.signed_moment, 2.5, 1e-12);
}

TEST(PhaseGrid, CellsAndFarRegion) {
  auto grid = unit_ball_grid(8, 0.5, 100.0);
  EXPECT_EQ(grid->nx(), 200u);
  EXPECT_DOUBLE_EQ(grid->x(0), 0.25);
  EXPECT_NEAR(grid->x(grid->far_region_begin()), 90.25, 1e-12);
  EXPECT_NEAR(grid->volume(0), 0.5 * 2.0 / 8.0, 1e-15);
}

TEST(Tridiagonal, MatchesDenseSolve) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t n = 25;
  std::vector<double> lo(n), di(n), up(n), b(n);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = i ? u(gen) : 0.0;
    up[i] = i + 1 < n ? u(gen) : 0.0;
    di[i] = 3.0 + u(gen);
    b[i] = u(gen);
    const auto k = static_cast<Eigen::Index>(i);
    A(k, k) = di[i];
    if (i) A(k, k - 1) = lo[i];
    if (i + 1 < n) A(k, k + 1) = up[i];
  }
  const Eigen::VectorXd ref = A.partialPivLu().solve(Eigen::Map<Eigen::VectorXd>(b.data(), n));
  TridiagonalSolver s(lo, di, up);
  auto x = b;
  s.solve(x);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(x[i], ref(static_cast<Eigen::Index>(i)), 1e-13);

  // periodic corners
  lo[0] = u(gen);
  up[n - 1] = u(gen);
  A(0, n - 1) = lo[0];
  A(n - 1, 0) = up[n - 1];
  const Eigen::VectorXd ref2 = A.partialPivLu().solve(Eigen::Map<Eigen::VectorXd>(b.data(), n));
  CyclicTridiagonalSolver c(lo, di, up);
  auto y = b;
  c.solve(y);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y[i], ref2(static_cast<Eigen::Index>(i)), 1e-13);
}

TEST(Tridiagonal, InterleavedEqualsColumnwise) {
  const std::size_t n = 10, m = 3;
  std::vector<double> lo(n, -1.0), di(n, 2.5), up(n, -1.0);
  TridiagonalSolver s(lo, di, up);
  std::vector<double> inter(n * m);
  std::vector<std::vector<double>> cols(m, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < m; ++c) inter[i * m + c] = cols[c][i] = std::sin(static_cast<double>(i * (c + 1)));
  s.solve_interleaved(inter.data(), m);
  for (std::size_t c = 0; c < m; ++c) {
    s.solve(cols[c]);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(inter[i * m + c], cols[c][i], 1e-15);
  }
}
