// SPDX-License-Identifier: Apache-2.0

#include "halfspace/norms.hpp"

#include <cmath>
#include <sstream>

#include "halfspace/errors.hpp"

namespace halfspace {

namespace {

double bracket(double y) { return std::sqrt(1.0 + y * y); }

}  // namespace

void WeightSpec::validate() const {
  if (!(p >= 1.0)) throw ConfigError("weight exponent p must lie in [1, inf]");
  if (k < -1 || k > 1) throw ConfigError("weight order k must be -1, 0 or 1");
  if (!(cap > 0.0)) throw ConfigError("weight cap must be positive");
  if (omega == VelocityWeight::Stretched) {
    const bool ok = (s == 1.0 && r > 1.0) || (s > 1.0 && s < 2.0 && r > 0.0) ||
                    (s == 2.0 && r > 0.0 && r < 0.5);
    if (!ok) throw ConfigError("stretched weight needs (s=1, r>1), (1<s<2, r>0) or (s=2, 0<r<1/2)");
  }
}

double WeightSpec::evaluate(double x, double v, double equilibrium) const {
  double om = 1.0;
  switch (omega) {
    case VelocityWeight::One: break;
    case VelocityWeight::InvSqrtM: om = 1.0 / std::sqrt(equilibrium); break;
    case VelocityWeight::InvM: om = 1.0 / equilibrium; break;
    case VelocityWeight::Stretched: om = std::exp(r * std::pow(bracket(v), s)); break;
  }
  double value = om;
  if (k != 0) value *= std::pow(bracket(x) + bracket(v), k);
  if (!std::isfinite(value) || value > cap) {
    std::ostringstream os;
    os << "weight saturates the cap " << cap << " at node (x=" << x << ", v=" << v << ")";
    throw NumericalError(os.str());
  }
  return value;
}

double weighted_norm(const DistributionField& f, const WeightSpec& w,
                     std::span<const double> equilibrium) {
  w.validate();
  const PhaseGrid& g = f.grid();
  const auto& v = g.velocity().v();
  const bool sup = std::isinf(w.p);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const double x = g.x(i);
    const double* row = f.row(i);
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (row[j] == 0.0) continue;
      const double val = std::abs(row[j]) * w.evaluate(x, v[j], equilibrium[j]);
      if (sup) {
        acc = std::max(acc, val);
      } else if (w.p == 1.0) {
        acc += val * g.volume(j);
      } else if (w.p == 2.0) {
        acc += val * val * g.volume(j);
      } else {
        acc += std::pow(val, w.p) * g.volume(j);
      }
    }
  }
  if (sup || w.p == 1.0) return acc;
  if (w.p == 2.0) return std::sqrt(acc);
  return std::pow(acc, 1.0 / w.p);
}

Moments moments(const DistributionField& f) {
  const PhaseGrid& g = f.grid();
  const auto& v = g.velocity().v();
  const auto& w = g.velocity().weights();
  Moments m;
  m.rho.assign(g.nx(), 0.0);
  m.iota.assign(g.nx(), 0.0);
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const double* row = f.row(i);
    double rho = 0.0, iota = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      rho += w[j] * row[j];
      iota += w[j] * v[j] * row[j];
    }
    m.rho[i] = rho;
    m.iota[i] = iota;
    m.mass += rho * g.dx();
    m.first_x_moment += g.x(i) * rho * g.dx();
    m.signed_moment += (g.x(i) * rho + iota) * g.dx();
  }
  return m;
}

double l2_Minv_squared(const DistributionField& f, std::span<const double> equilibrium) {
  const PhaseGrid& g = f.grid();
  const auto& w = g.velocity().weights();
  std::vector<double> coef(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) coef[j] = w[j] / equilibrium[j];
  double acc = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const double* row = f.row(i);
    for (std::size_t j = 0; j < w.size(); ++j) acc += row[j] * row[j] * coef[j];
  }
  return acc * g.dx();
}

}  // namespace halfspace
