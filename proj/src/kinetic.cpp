// SPDX-License-Identifier: Apache-2.0

#include "halfspace/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "halfspace/errors.hpp"

namespace halfspace {

void SolverConfig::validate() const {
  if (!(cfl > 0.0) || cfl > cfl_limit())
    throw ConfigError(order == TransportOrder::MUSCL2 ? "cfl must lie in (0, 0.5] for MUSCL2"
                                                      : "cfl must lie in (0, 1]");
  if (damping && !(*damping >= 0.0)) throw ConfigError("damping must be non-negative");
  if (!(dt_cap > 0.0)) throw ConfigError("dt_cap must be positive");
}

KineticStepper::KineticStepper(std::shared_ptr<const CollisionModel> model, SolverConfig cfg)
    : model_(std::move(model)), cfg_(cfg) {
  if (!model_) throw ConfigError("kinetic stepper needs a collision model");
  cfg_.validate();
}

double KineticStepper::stable_dt(const PhaseGrid& grid) const {
  const double vmax = grid.velocity().max_speed();
  const double dt = (vmax > 0.0) ? cfg_.cfl * grid.dx() / vmax : cfg_.dt_cap;
  return std::min(dt, cfg_.dt_cap);
}

namespace {

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return (a > 0.0) ? std::min(a, b) : std::max(a, b);
}

}  // namespace

void KineticStepper::transport_rate(const DistributionField& f, std::vector<double>& rate,
                                    StepFlux* flux) const {
  const PhaseGrid& g = f.grid();
  const std::size_t nx = g.nx(), nv = g.nv();
  const auto& v = g.velocity().v();
  const auto& w = g.velocity().weights();
  const double inv_dx = 1.0 / g.dx();
  rate.assign(g.size(), 0.0);
  const double* u = f.values().data();

  if (cfg_.order == TransportOrder::Upwind1) {
    // F_{i+1/2, j} = a_j f_{i, j} - b_j f_{i+1, j},  a = max(v, 0), b = max(-v, 0)
    std::vector<double> a(nv), b(nv), left(nv);
    for (std::size_t j = 0; j < nv; ++j) {
      a[j] = std::max(v[j], 0.0);
      b[j] = std::max(-v[j], 0.0);
      left[j] = -b[j] * u[j];  // inflow ghost is zero
    }
    if (flux)
      for (std::size_t j = 0; j < nv; ++j) flux->outflow += b[j] * u[j] * w[j];
    for (std::size_t i = 0; i < nx; ++i) {
      const double* cur = u + i * nv;
      double* out = rate.data() + i * nv;
      if (i + 1 < nx) {
        const double* next = cur + nv;
        for (std::size_t j = 0; j < nv; ++j) {
          const double right = a[j] * cur[j] - b[j] * next[j];
          out[j] = (left[j] - right) * inv_dx;
          left[j] = right;
        }
      } else {
        // ghost beyond X_max repeats the last cell
        for (std::size_t j = 0; j < nv; ++j) {
          const double right = v[j] * cur[j];
          out[j] = (left[j] - right) * inv_dx;
          if (flux) flux->far_flux += right * w[j];
        }
      }
    }
    return;
  }

  // MUSCL with minmod slopes; two ghost cells on each side.
  std::vector<double> ext(nx + 4), slope(nx + 4), face(nx + 1);
  for (std::size_t j = 0; j < nv; ++j) {
    const double vj = v[j];
    const double left_ghost = (vj > 0.0) ? 0.0 : u[j];
    ext[0] = ext[1] = left_ghost;
    for (std::size_t i = 0; i < nx; ++i) ext[i + 2] = u[i * nv + j];
    ext[nx + 2] = ext[nx + 3] = u[(nx - 1) * nv + j];
    slope[0] = slope[nx + 3] = 0.0;
    for (std::size_t k = 1; k + 1 < nx + 4; ++k)
      slope[k] = minmod(ext[k] - ext[k - 1], ext[k + 1] - ext[k]);
    // face m sits between ext[m + 1] and ext[m + 2], i.e. x = m dx
    for (std::size_t m = 0; m <= nx; ++m) {
      face[m] = (vj > 0.0) ? vj * (ext[m + 1] + 0.5 * slope[m + 1])
                           : vj * (ext[m + 2] - 0.5 * slope[m + 2]);
    }
    for (std::size_t i = 0; i < nx; ++i) rate[i * nv + j] = (face[i] - face[i + 1]) * inv_dx;
    if (flux) {
      flux->outflow -= face[0] * w[j];
      flux->far_flux += face[nx] * w[j];
    }
  }
}

void KineticStepper::transport(DistributionField& f, double tau, StepFlux* flux) {
  StepFlux s1, s2;
  StepFlux* p1 = flux ? &s1 : nullptr;
  StepFlux* p2 = flux ? &s2 : nullptr;
  auto& u = f.values();
  transport_rate(f, rate_, p1);
  if (stage_.size() != u.size()) stage_.resize(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) stage_[k] = u[k] + tau * rate_[k];
  // evaluate the rate of the intermediate stage on a field view
  std::swap(u, stage_);
  transport_rate(f, rate_, p2);
  std::swap(u, stage_);
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = 0.5 * u[k] + 0.5 * (stage_[k] + tau * rate_[k]);
  if (flux) {
    flux->outflow += 0.5 * tau * (s1.outflow + s2.outflow);
    flux->far_flux += 0.5 * tau * (s1.far_flux + s2.far_flux);
  }
}

const KineticStepper::CrankNicolson& KineticStepper::crank_nicolson(double tau) {
  for (const auto& c : cn_cache_)
    if (c.tau == tau) return c;
  const CollisionModel& m = *model_;
  const std::size_t n = m.size();
  double stiff = 0.0;
  for (double d : m.diag) stiff = std::max(stiff, std::abs(d));
  CrankNicolson c;
  c.tau = tau;
  c.substeps = std::max(1, static_cast<int>(std::ceil(0.5 * tau * stiff - 1e-12)));
  const double h = 0.5 * tau / c.substeps;
  std::vector<double> lo(n), di(n), up(n);
  for (std::size_t j = 0; j < n; ++j) {
    lo[j] = -h * m.lower[j];
    di[j] = 1.0 - h * m.diag[j];
    up[j] = -h * m.upper[j];
  }
  if (m.kind == CollisionKind::LaplaceBeltramiCircle) {
    c.periodic = CyclicTridiagonalSolver(lo, di, up);
  } else {
    c.open = TridiagonalSolver(lo, di, up);
  }
  if (cn_cache_.size() >= 4) cn_cache_.erase(cn_cache_.begin());
  cn_cache_.push_back(std::move(c));
  return cn_cache_.back();
}

void KineticStepper::collide(DistributionField& f, double tau) {
  const PhaseGrid& g = f.grid();
  const std::size_t nx = g.nx(), nv = g.nv();
  auto& u = f.values();
  if (cfg_.damping) {
    const double e = std::exp(-*cfg_.damping * tau);
    for (double& x : u) x *= e;
    return;
  }
  if (!cfg_.collision_enabled) return;
  const CollisionModel& m = *model_;
  if (m.is_relaxation()) {
    const double e = std::exp(-tau);
    const auto& M = m.equilibrium;
    for (std::size_t i = 0; i < nx; ++i) {
      double* row = f.row(i);
      const double gain = (1.0 - e) * m.density(row);
      for (std::size_t j = 0; j < nv; ++j) row[j] = e * row[j] + gain * M[j];
    }
    return;
  }
  const CrankNicolson& cn = crank_nicolson(tau);
  const double h = 0.5 * tau / cn.substeps;
  scratch_.resize(nv);
  const bool periodic = m.kind == CollisionKind::LaplaceBeltramiCircle;
  for (std::size_t i = 0; i < nx; ++i) {
    double* row = f.row(i);
    for (int s = 0; s < cn.substeps; ++s) {
      m.apply(row, scratch_.data());
      for (std::size_t j = 0; j < nv; ++j) row[j] += h * scratch_[j];
      std::span<double> view(row, nv);
      if (periodic) {
        cn.periodic.solve(view);
      } else {
        cn.open.solve(view);
      }
    }
  }
}

void KineticStepper::finish(DistributionField& f) const {
  auto& u = f.values();
  double lo = 0.0, hi = 0.0;
  for (double& x : u) {
    // flush far tails before they turn subnormal
    if (std::abs(x) < 1e-280) x = 0.0;
    lo = std::min(lo, x);
    hi = std::max(hi, std::abs(x));
  }
  if (!std::isfinite(hi)) throw SchemeFailure("kinetic step produced a non-finite value");
  if (lo < 0.0) {
    if (lo < -1e-12 * hi)
      throw SchemeFailure("kinetic step lost positivity: min " + std::to_string(lo) + " vs max " +
                          std::to_string(hi));
    for (double& x : u) x = std::max(x, 0.0);
  }
}

void KineticStepper::step(DistributionField& f, double dt, StepFlux* flux) {
  if (!(dt > 0.0)) throw ConfigError("kinetic step needs dt > 0");
  const PhaseGrid& g = f.grid();
  if (g.nv() != model_->size()) throw ConfigError("grid and collision model disagree on velocity nodes");
  if (cfg_.transport_enabled) {
    const double courant = dt * g.velocity().max_speed() / g.dx();
    if (courant > cfg_.cfl * (1.0 + 1e-12))
      throw ConfigError("CFL violation: dt max|v| / dx = " + std::to_string(courant) +
                        " exceeds " + std::to_string(cfg_.cfl));
  }
  if (dt > cfg_.dt_cap * (1.0 + 1e-12)) throw ConfigError("time step exceeds dt_cap");

  const bool tr = cfg_.transport_enabled;
  if (cfg_.splitting == Splitting::Strang) {
    if (tr) transport(f, 0.5 * dt, flux);
    collide(f, dt);
    if (tr) transport(f, 0.5 * dt, flux);
  } else {
    if (tr) transport(f, dt, flux);
    collide(f, dt);
  }
  finish(f);
  f.set_time(f.time() + dt);
}

DistributionField step_kinetic(const DistributionField& f, const CollisionModel& model,
                               const SolverConfig& cfg, double dt, StepFlux* flux) {
  KineticStepper stepper(std::make_shared<const CollisionModel>(model), cfg);
  DistributionField out = f;
  stepper.step(out, dt, flux);
  return out;
}

DistributionField exact_SB_relaxation(std::shared_ptr<const PhaseGrid> grid,
                                      const std::function<double(double, double)>& f_in, double t,
                                      double damping) {
  const double e = std::exp(-damping * t);
  return DistributionField::sample(
      std::move(grid),
      [&](double x, double v) {
        const double foot = x - v * t;
        return foot > 0.0 ? e * f_in(foot, v) : 0.0;
      },
      t);
}

namespace {

void add_collision_blocks(Eigen::MatrixXd& a, const PhaseGrid& grid, const CollisionModel& model,
                          const SolverConfig& cfg) {
  const std::size_t nx = grid.nx(), nv = grid.nv();
  const auto n = static_cast<Eigen::Index>(nv);
  for (std::size_t i = 0; i < nx; ++i) {
    const auto off = static_cast<Eigen::Index>(i * nv);
    if (cfg.damping) {
      for (Eigen::Index j = 0; j < n; ++j) a(off + j, off + j) -= *cfg.damping;
    } else if (cfg.collision_enabled) {
      a.block(off, off, n, n) += model.generator;
    }
  }
}

void check_small(const PhaseGrid& grid, const CollisionModel& model, const SolverConfig& cfg) {
  if (grid.size() > 4096) throw PreconditionError("dense generator requested on a large grid");
  if (grid.nv() != model.size()) throw ConfigError("grid and collision model disagree on velocity nodes");
  if (cfg.order != TransportOrder::Upwind1)
    throw ConfigError("dense generator is only defined for the linear upwind scheme");
}

}  // namespace

Eigen::MatrixXd assemble_generator(const PhaseGrid& grid, const CollisionModel& model,
                                   const SolverConfig& cfg) {
  check_small(grid, model, cfg);
  const std::size_t nx = grid.nx(), nv = grid.nv();
  const auto N = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N, N);
  const auto& v = grid.velocity().v();
  const double inv_dx = 1.0 / grid.dx();
  auto id = [nv](std::size_t i, std::size_t j) { return static_cast<Eigen::Index>(i * nv + j); };
  if (cfg.transport_enabled) {
    for (std::size_t j = 0; j < nv; ++j) {
      const double s = std::abs(v[j]) * inv_dx;
      for (std::size_t i = 0; i < nx; ++i) {
        if (v[j] > 0.0) {
          // upwind from the left, zero inflow at x = 0
          a(id(i, j), id(i, j)) -= s;
          if (i > 0) a(id(i, j), id(i - 1, j)) += s;
        } else if (i + 1 < nx) {
          // upwind from the right; the extrapolated ghost freezes the last cell
          a(id(i, j), id(i, j)) -= s;
          a(id(i, j), id(i + 1, j)) += s;
        }
      }
    }
  }
  add_collision_blocks(a, grid, model, cfg);
  return a;
}

Eigen::MatrixXd assemble_dual_generator(const PhaseGrid& grid, const CollisionModel& model,
                                        const SolverConfig& cfg) {
  check_small(grid, model, cfg);
  const std::size_t nx = grid.nx(), nv = grid.nv();
  const auto N = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N, N);
  const auto& v = grid.velocity().v();
  const double inv_dx = 1.0 / grid.dx();
  auto id = [nv](std::size_t i, std::size_t j) { return static_cast<Eigen::Index>(i * nv + j); };
  if (cfg.transport_enabled) {
    for (std::size_t j = 0; j < nv; ++j) {
      const double s = std::abs(v[j]) * inv_dx;
      for (std::size_t i = 0; i < nx; ++i) {
        if (v[j] > 0.0) {
          // dual speed -v < 0: upwind from the right, free exit at x = 0,
          // zero data entering through X_max
          a(id(i, j), id(i, j)) -= s;
          if (i + 1 < nx) a(id(i, j), id(i + 1, j)) += s;
        } else {
          // dual speed -v > 0: zero inflow on {x = 0, v < 0}; the last cell
          // keeps what it receives
          if (i + 1 < nx) a(id(i, j), id(i, j)) -= s;
          if (i > 0) a(id(i, j), id(i - 1, j)) += s;
        }
      }
    }
  }
  add_collision_blocks(a, grid, model, cfg);
  return a;
}

Eigen::VectorXd minv_inner_product_weights(const PhaseGrid& grid, const CollisionModel& model) {
  const std::size_t nx = grid.nx(), nv = grid.nv();
  Eigen::VectorXd d(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < nv; ++j)
      d(static_cast<Eigen::Index>(i * nv + j)) = grid.volume(j) / model.equilibrium[j];
  return d;
}

namespace {

constexpr char kSnapshotMagic[4] = {'H', 'S', 'F', '1'};

}  // namespace

void write_snapshot(const std::string& path, const DistributionField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open snapshot file " + path);
  const PhaseGrid& g = f.grid();
  const std::uint64_t nx = g.nx(), nv = g.nv();
  const double header[3] = {g.x_max(), g.velocity().extent(), f.time()};
  out.write(kSnapshotMagic, 4);
  out.write(reinterpret_cast<const char*>(&nx), sizeof nx);
  out.write(reinterpret_cast<const char*>(&nv), sizeof nv);
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  out.write(reinterpret_cast<const char*>(f.values().data()),
            static_cast<std::streamsize>(f.values().size() * sizeof(double)));
  if (!out) throw Error("short write on snapshot file " + path);
}

DistributionField read_snapshot(const std::string& path, const VelocityDomain& velocity) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open snapshot file " + path);
  char magic[4];
  std::uint64_t nx = 0, nv = 0;
  double header[3];
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&nx), sizeof nx);
  in.read(reinterpret_cast<char*>(&nv), sizeof nv);
  in.read(reinterpret_cast<char*>(header), sizeof header);
  if (!in || std::memcmp(magic, kSnapshotMagic, 4) != 0) throw Error("not a snapshot file: " + path);
  if (nv != velocity.size()) throw ConfigError("snapshot velocity size does not match the domain");
  auto grid = std::make_shared<const PhaseGrid>(header[0], header[0] / static_cast<double>(nx), velocity);
  DistributionField f(grid, header[2]);
  in.read(reinterpret_cast<char*>(f.values().data()),
          static_cast<std::streamsize>(f.values().size() * sizeof(double)));
  if (!in) throw Error("truncated snapshot file " + path);
  return f;
}

}  // namespace halfspace
