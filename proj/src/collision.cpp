// SPDX-License-Identifier: Apache-2.0

#include "halfspace/collision.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "halfspace/errors.hpp"

namespace halfspace {

std::string_view to_string(CollisionKind kind) {
  switch (kind) {
    case CollisionKind::RelaxationBounded: return "relaxation_bounded";
    case CollisionKind::RelaxationGaussian: return "relaxation_gaussian";
    case CollisionKind::FokkerPlanck: return "fokker_planck";
    case CollisionKind::LaplaceBeltramiCircle: return "laplace_beltrami_circle";
  }
  return "unknown";
}

CollisionKind collision_kind_from_string(std::string_view name) {
  for (auto k : {CollisionKind::RelaxationBounded, CollisionKind::RelaxationGaussian,
                 CollisionKind::FokkerPlanck, CollisionKind::LaplaceBeltramiCircle}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown collision kind '" + std::string(name) + "'");
}

double CollisionModel::density(const double* profile) const {
  const auto& w = velocity.weights();
  double rho = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) rho += w[j] * profile[j];
  return rho;
}

void CollisionModel::apply(const double* in, double* out) const {
  const std::size_t n = size();
  if (is_relaxation()) {
    const double rho = density(in);
    for (std::size_t j = 0; j < n; ++j) out[j] = equilibrium[j] * rho - in[j];
    return;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t jm = (j == 0) ? n - 1 : j - 1;
    const std::size_t jp = (j + 1 == n) ? 0 : j + 1;
    out[j] = lower[j] * in[jm] + diag[j] * in[j] + upper[j] * in[jp];
  }
}

namespace {

void check_compatible(CollisionKind kind, const VelocityDomain& velocity) {
  const bool ok = [&] {
    switch (kind) {
      case CollisionKind::RelaxationBounded: return velocity.kind() == VelocityKind::Ball;
      case CollisionKind::RelaxationGaussian:
      case CollisionKind::FokkerPlanck: return velocity.kind() == VelocityKind::RealLine;
      case CollisionKind::LaplaceBeltramiCircle: return velocity.kind() == VelocityKind::Circle;
    }
    return false;
  }();
  if (!ok)
    throw ConfigError("collision kind " + std::string(to_string(kind)) +
                      " is incompatible with the given velocity domain");
  if (velocity.size() < 4) throw ConfigError("collision operator needs at least 4 velocity nodes");
}

std::vector<double> discrete_gaussian(const VelocityDomain& velocity) {
  const auto& v = velocity.v();
  const auto& w = velocity.weights();
  std::vector<double> m(v.size());
  double z = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    m[j] = std::exp(-0.5 * v[j] * v[j]);
    z += m[j] * w[j];
  }
  for (double& x : m) x /= z;
  return m;
}

// Edge coefficients k_{j+1/2}, j = 0..n-2: partial sums of -v M dv taken from
// the nearer end so that tails keep full relative precision.
std::vector<double> fokker_planck_edges(const VelocityDomain& velocity,
                                        const std::vector<double>& m) {
  const auto& v = velocity.v();
  const double dv = velocity.spacing();
  const std::size_t n = v.size();
  std::vector<double> k(n - 1, 0.0);
  std::vector<double> from_left(n - 1), from_right(n - 1);
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    acc -= v[j] * m[j] * dv;
    from_left[j] = acc;
  }
  acc = 0.0;
  for (std::size_t j = n - 1; j >= 1; --j) {
    acc += v[j] * m[j] * dv;
    from_right[j - 1] = acc;
  }
  for (std::size_t e = 0; e + 1 < n; ++e) {
    const double mid = 0.5 * (v[e] + v[e + 1]);
    k[e] = (mid <= 0.0) ? from_left[e] : from_right[e];
  }
  return k;
}

}  // namespace

VelocityDomain natural_velocity_domain(CollisionKind kind, double extent, std::size_t nodes) {
  switch (kind) {
    case CollisionKind::RelaxationBounded: return VelocityDomain::ball(extent, nodes);
    case CollisionKind::RelaxationGaussian:
    case CollisionKind::FokkerPlanck: return VelocityDomain::real_line(extent, nodes);
    case CollisionKind::LaplaceBeltramiCircle: return VelocityDomain::circle(nodes);
  }
  throw ConfigError("unknown collision kind");
}

CollisionModel build_collision(CollisionKind kind, const VelocityDomain& velocity) {
  check_compatible(kind, velocity);
  const std::size_t n = velocity.size();
  const auto& w = velocity.weights();

  CollisionModel model{kind, velocity, {}, Eigen::MatrixXd::Zero(n, n), {}, {}, {}, 1.0, 0.0};

  switch (kind) {
    case CollisionKind::RelaxationBounded:
      model.equilibrium.assign(n, 1.0 / velocity.measure());
      break;
    case CollisionKind::RelaxationGaussian:
    case CollisionKind::FokkerPlanck: model.equilibrium = discrete_gaussian(velocity); break;
    case CollisionKind::LaplaceBeltramiCircle:
      model.equilibrium.assign(n, 1.0 / (2.0 * std::numbers::pi));
      break;
  }
  const auto& m = model.equilibrium;

  if (model.is_relaxation()) {
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) model.generator(j, k) = m[j] * w[k] - (j == k ? 1.0 : 0.0);
  } else {
    model.lower.assign(n, 0.0);
    model.diag.assign(n, 0.0);
    model.upper.assign(n, 0.0);
    const double h2 = velocity.spacing() * velocity.spacing();
    if (kind == CollisionKind::FokkerPlanck) {
      const auto k = fokker_planck_edges(velocity, m);
      for (std::size_t j = 0; j < n; ++j) {
        const double kp = (j + 1 < n) ? k[j] : 0.0;
        const double km = (j > 0) ? k[j - 1] : 0.0;
        model.diag[j] = -(kp + km) / (h2 * m[j]);
        if (j + 1 < n) model.upper[j] = kp / (h2 * m[j + 1]);
        if (j > 0) model.lower[j] = km / (h2 * m[j - 1]);
      }
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        model.lower[j] = 1.0 / h2;
        model.upper[j] = 1.0 / h2;
        model.diag[j] = -2.0 / h2;
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t jm = (j == 0) ? n - 1 : j - 1;
      const std::size_t jp = (j + 1 == n) ? 0 : j + 1;
      model.generator(j, j) += model.diag[j];
      model.generator(j, jm) += model.lower[j];
      model.generator(j, jp) += model.upper[j];
    }
  }

  model.c_L = adjoint_identity_check(model).c_L;
  model.spectral_gap = (n >= 8) ? spectral_gap(model) : 0.0;
  return model;
}

Eigen::MatrixXd flat_adjoint(const CollisionModel& model) {
  const auto& w = model.velocity.weights();
  const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  return wv.cwiseInverse().asDiagonal() * model.generator.transpose() * wv.asDiagonal();
}

AdjointReport adjoint_identity_check(const CollisionModel& model) {
  const std::size_t n = model.size();
  const auto& v = model.velocity.v();
  const auto& w = model.velocity.weights();
  const Eigen::MatrixXd adj = flat_adjoint(model);
  const Eigen::VectorXd one_image = adj * Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  const Eigen::Map<const Eigen::VectorXd> vv(v.data(), static_cast<Eigen::Index>(n));
  const Eigen::VectorXd a = adj * vv;

  // minimise sum_j (s a_j + v_j)^2 M_j w_j over s = 1 / c
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double mw = model.equilibrium[j] * w[j];
    num += a(j) * v[j] * mw;
    den += a(j) * a(j) * mw;
  }
  if (!(den > 0.0)) throw NumericalError("adjoint check: L^# v1 vanishes");
  const double s = -num / den;

  AdjointReport r{};
  r.c_L = 1.0 / s;
  r.adjoint_one_residual = one_image.cwiseAbs().maxCoeff();
  double wsum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double res = s * a(j) + v[j];
    r.phi_residual = std::max(r.phi_residual, std::abs(res));
    wsum += res * res * model.equilibrium[j] * w[j];
  }
  r.phi_residual_weighted = std::sqrt(wsum);
  return r;
}

double spectral_gap(const CollisionModel& model) {
  const std::size_t n = model.size();
  if (n < 8) throw PreconditionError("spectral_gap needs at least 8 velocity nodes");
  const auto& w = model.velocity.weights();
  // S = D^{1/2} L D^{-1/2}, D = diag(w / M), is symmetric when L is
  // self-adjoint in L^2(M^{-1}).
  Eigen::VectorXd sd(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) sd(j) = std::sqrt(w[j] / model.equilibrium[j]);
  Eigen::MatrixXd s = sd.asDiagonal() * model.generator * sd.cwiseInverse().asDiagonal();
  s = -0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("spectral_gap: eigensolve did not converge");
  const auto& ev = eig.eigenvalues();
  const double scale = std::max(1.0, std::abs(ev(ev.size() - 1)));
  if (std::abs(ev(0)) > 1e-8 * scale)
    throw NumericalError("spectral_gap: operator has no discrete null vector");
  if (ev(1) <= 1e-8 * scale) throw NumericalError("spectral_gap: kernel is not one-dimensional");
  return ev(1);
}

double inner_Minv(const CollisionModel& model, const double* f, const double* g) {
  const auto& w = model.velocity.weights();
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) acc += f[j] * g[j] * w[j] / model.equilibrium[j];
  return acc;
}

}  // namespace halfspace
