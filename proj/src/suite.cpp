// SPDX-License-Identifier: Apache-2.0

#include "halfspace/suite.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "halfspace/csv.hpp"
#include "halfspace/diagnostics.hpp"
#include "halfspace/errors.hpp"
#include "halfspace/heat.hpp"
#include "halfspace/nash.hpp"
#include "halfspace/parallel.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace halfspace {

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("cannot write '" + path.string() + "'");
}

SummaryRow row(const ScenarioConfig& c, std::string quantity, double predicted, double measured,
               double tolerance, bool passed) {
  return {c.name, std::move(quantity), predicted, measured, tolerance, passed};
}

SummaryRow exponent_row(const ScenarioConfig& c, const std::string& quantity, double predicted,
                        double tol, const std::vector<double>& t, const std::vector<double>& y) {
  const DecayFit fit = fit_decay(t, y, c.resolved_fit_window());
  return row(c, quantity + " exponent", predicted, fit.exponent, tol,
             std::abs(fit.exponent - predicted) <= tol);
}

DistributionField initial_field(const ScenarioConfig& c, std::shared_ptr<const PhaseGrid> grid,
                                const CollisionModel& model) {
  const auto g = c.initial.profile();
  const auto& vel = grid->velocity();
  DistributionField f(grid);
  for (std::size_t j = 0; j < grid->nv(); ++j) {
    const double v = vel.v()[j];
    double h = model.equilibrium[j];
    if (c.initial.family == "box") {
      h = (v >= c.initial.v_lo && v <= c.initial.v_hi) ? 1.0 : 0.0;
    } else if (c.initial.family == "shifted_gaussian") {
      const double z = (v - c.initial.v0) / c.initial.sigma_v;
      h = std::exp(-0.5 * z * z);
    }
    for (std::size_t i = 0; i < grid->nx(); ++i) f(i, j) = g(grid->x(i)) * h;
  }
  return f;
}

void run_kinetic(const ScenarioConfig& c, const fs::path& dir, RunOutcome& out) {
  auto vel = natural_velocity_domain(c.collision, c.resolved_v_max(), c.nv);
  auto model = std::make_shared<const CollisionModel>(build_collision(c.collision, vel));
  auto grid = std::make_shared<const PhaseGrid>(c.x_max, c.dx, vel);
  SolverConfig cfg = c.solver;
  if (c.dt) cfg.dt_cap = *c.dt;
  const DistributionField f_in = initial_field(c, grid, *model);
  const TrajectoryRecord rec = run_scenario(model, f_in, c.t_max, cfg, c.diagnostics);
  const TrajectoryReport rep = analyze_trajectory(rec);

  write_file(dir / "trajectory.csv", trajectory_csv(rec, rep));
  out.files.push_back(c.output + "/trajectory.csv");

  std::vector<double> t, l2, linf, l1;
  for (const auto& s : rec.samples) {
    t.push_back(s.t);
    l2.push_back(s.l2_Minv_sq);
    linf.push_back(s.linf_w);
    l1.push_back(s.mass);
  }
  // d = 1: <t>^{-1-d/2} for the squared energy norm and the weighted
  // pointwise norm, t^{-1/2} for the density
  out.rows.push_back(exponent_row(c, "l2_Minv_sq", -1.5, 0.15, t, l2));
  out.rows.push_back(exponent_row(c, "linf_w", -1.5, 0.2, t, linf));
  out.rows.push_back(exponent_row(c, "rho_l1", -0.5, 0.1, t, l1));

  const auto& h = rep.hypo;
  out.rows.push_back(row(c, "Z worst relative increase", 0.0, h.worst_increase, 1e-8, h.monotone));
  out.rows.push_back(row(c, "norm equivalence", 1.0, h.equivalence_holds ? 1.0 : 0.0, 0.0,
                         h.equivalence_holds));
  out.rows.push_back(row(c, "signed moment worst drop", 0.0, rep.signed_moment_worst_drop, 1e-6,
                         rep.signed_moment_worst_drop <= 1e-6));
  if (c.collision == CollisionKind::RelaxationBounded)
    out.rows.push_back(row(c, "bounded moment worst rise", 0.0, rep.bounded_moment_worst_rise, 1e-6,
                           rep.bounded_moment_worst_rise <= 1e-6));

  if (!rep.localization_available) return;
  std::vector<const DecadeReport*> late;
  for (const auto& d : rep.localization.decades)
    if (d.t >= 99.0) late.push_back(&d);
  if (late.size() < 2) return;
  auto band = [&](auto get) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto* d : late) {
      lo = std::min(lo, get(*d));
      hi = std::max(hi, get(*d));
    }
    return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  };
  const double mass_band = band([](const DecadeReport& d) { return d.window_mass_sqrt_t; });
  const double peak_band = band([](const DecadeReport& d) { return d.x_t_over_sqrt_t; });
  double worst_ba = 0.0;
  for (const auto* d : late)
    worst_ba = std::max(worst_ba, d->ratio_A > 0.0 ? d->ratio_B / d->ratio_A
                                                   : std::numeric_limits<double>::infinity());
  out.rows.push_back(row(c, "window mass sqrt(t) band", 3.0, mass_band, 0.0, mass_band <= 3.0));
  out.rows.push_back(row(c, "x_t / sqrt(t) band", 2.0, peak_band, 0.0, peak_band <= 2.0));
  out.rows.push_back(row(c, "slab profile B/A", 20.0, worst_ba, 0.0, worst_ba <= 20.0));
}

void run_heat(const ScenarioConfig& c, const fs::path& dir, RunOutcome& out) {
  HeatOptions opt;
  opt.dx = c.heat_dx;
  opt.t_first = c.diagnostics.t_first;
  opt.samples_per_decade = c.diagnostics.samples_per_decade;
  opt.fit_window = c.resolved_fit_window();
  const HeatDecayResult r = heat_decay_experiment(c.heat_mode, c.initial.profile(), c.t_max, opt);
  write_file(dir / "heat.csv", heat_csv(r.series));
  out.files.push_back(c.output + "/heat.csv");
  if (!r.fit) throw ZeroSignalError("heat run '" + c.name + "' decayed to zero");
  const double predicted = c.heat_mode == HeatMode::Whole ? -0.5 : -1.5;
  out.rows.push_back(row(c, "l2sq exponent", predicted, r.fit->exponent, 0.1,
                         std::abs(r.fit->exponent - predicted) <= 0.1));
  if (c.heat_mode == HeatMode::Half)
    out.rows.push_back(row(c, "first moment drift", 0.0, r.max_first_moment_drift, 1e-6,
                           r.max_first_moment_drift <= 1e-6));
}

void run_nash(const ScenarioConfig& c, const fs::path& dir, RunOutcome& out) {
  const NashReport rep = run_nash_suite(c.seed, c.nash_count, 1);
  write_file(dir / "nash.csv", rep.csv());
  out.files.push_back(c.output + "/nash.csv");
  for (const auto& chk : rep.checks)
    out.rows.push_back(row(c, chk.name + " saturation", chk.worst_prefix, chk.worst_ratio, 0.05,
                           chk.passed()));
}

std::string summary_csv(const std::vector<RunOutcome>& runs) {
  std::string out = "# schema: suite_summary v1\nrun,quantity,predicted,measured,tolerance,status\n";
  for (const auto& r : runs) {
    if (r.status != "ok") {
      out += r.name + ",run,nan,nan,nan," + r.status + '\n';
      continue;
    }
    for (const auto& s : r.rows)
      out += s.run + ',' + s.quantity + ',' + csv_number(s.predicted) + ',' + csv_number(s.measured) +
             ',' + csv_number(s.tolerance) + ',' + (s.passed ? "pass" : "fail") + '\n';
  }
  return out;
}

}  // namespace

RunOutcome execute_scenario(const ScenarioConfig& config, const std::string& out_dir) {
  config.validate();
  RunOutcome out;
  out.name = config.name;
  out.kind = std::string(to_string(config.kind));
  const fs::path dir = fs::path(out_dir) / (config.output.empty() ? config.name : config.output);
  ScenarioConfig c = config;
  if (c.output.empty()) c.output = c.name;
  switch (c.kind) {
    case RunKind::Kinetic: run_kinetic(c, dir, out); break;
    case RunKind::Heat: run_heat(c, dir, out); break;
    case RunKind::Nash: run_nash(c, dir, out); break;
  }
  out.status = "ok";
  return out;
}

bool SuiteResult::hard_failure() const {
  return std::any_of(runs.begin(), runs.end(), [](const auto& r) { return r.status != "ok"; });
}

bool SuiteResult::all_checks_passed() const {
  for (const auto& r : runs)
    for (const auto& s : r.rows)
      if (!s.passed) return false;
  return true;
}

int SuiteResult::exit_code() const {
  if (hard_failure()) return 1;
  return all_checks_passed() ? 0 : 3;
}

SuiteResult run_suite(const std::vector<SuiteEntry>& entries, const SuiteOptions& options) {
  SuiteResult result;
  result.runs.resize(entries.size());
  std::vector<ScenarioConfig> configs(entries.size());
  std::vector<char> runnable(entries.size(), 0);

  // validate everything before the first run starts
  std::vector<std::string> outputs;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    auto& r = result.runs[k];
    r.name = entries[k].name;
    if (!entries[k].config) {
      r.status = "invalid";
      r.error = entries[k].error;
      continue;
    }
    configs[k] = *entries[k].config;
    if (options.seed) configs[k].seed = *options.seed;
    if (configs[k].output.empty()) configs[k].output = configs[k].name;
    r.name = configs[k].name;
    r.kind = std::string(to_string(configs[k].kind));
    auto problems = configs[k].problems();
    if (std::find(outputs.begin(), outputs.end(), configs[k].output) != outputs.end())
      problems.push_back("output directory '" + configs[k].output + "' used by another run");
    if (!problems.empty()) {
      r.status = "invalid";
      for (const auto& p : problems) r.error += (r.error.empty() ? "" : "; ") + p;
      continue;
    }
    outputs.push_back(configs[k].output);
    runnable[k] = 1;
  }

  std::vector<std::size_t> todo;
  for (std::size_t k = 0; k < entries.size(); ++k)
    if (runnable[k]) todo.push_back(k);
  parallel_for(todo.size(), std::max(1u, options.parallel), [&](std::size_t i) {
    const std::size_t k = todo[i];
    try {
      result.runs[k] = execute_scenario(configs[k], options.out_dir);
    } catch (const std::exception& e) {
      result.runs[k].status = "failed";
      result.runs[k].error = e.what();
      result.runs[k].files.clear();
    }
  });

  const fs::path out(options.out_dir);
  fs::create_directories(out);
  const std::string summary = summary_csv(result.runs);
  write_file(out / "summary.csv", summary);

  json manifest;
  manifest["schema"] = "halfspace_manifest";
  manifest["version"] = 1;
  manifest["summary"] = "summary.csv";
  manifest["runs"] = json::array();
  manifest["files"] = json::array();
  auto add_file = [&](const std::string& rel, const std::string& run) {
    const std::string bytes = read_file((out / rel).string());
    manifest["files"].push_back(
        {{"path", rel}, {"run", run}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
  };
  for (const auto& r : result.runs) {
    manifest["runs"].push_back({{"name", r.name},
                                {"kind", r.kind},
                                {"status", r.status},
                                {"error", r.error},
                                {"files", r.files}});
    for (const auto& f : r.files) add_file(f, r.name);
  }
  add_file("summary.csv", "");
  result.manifest_path = (out / "manifest.json").string();
  write_file(result.manifest_path, manifest.dump(2) + "\n");
  return result;
}

SuiteEntry entry_from_file(const std::string& path) {
  SuiteEntry e;
  e.name = fs::path(path).stem().string();
  try {
    e.config = load_config(path);
    e.name = e.config->name;
  } catch (const Error& ex) {
    e.error = ex.what();
  }
  return e;
}

std::vector<SuiteEntry> load_suite(const std::string& name, const std::string& suites_dir) {
  const fs::path dir = fs::path(suites_dir) / name;
  if (!fs::is_directory(dir)) throw ConfigError("no suite '" + name + "' in " + suites_dir);
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".ini") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  std::vector<SuiteEntry> out;
  for (const auto& f : files) out.push_back(entry_from_file(f));
  return out;
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_file(path)); }

ManifestCheck verify_manifest(const std::string& dir) {
  ManifestCheck chk;
  const fs::path root(dir);
  json m;
  try {
    m = json::parse(read_file((root / "manifest.json").string()));
  } catch (const std::exception& e) {
    chk.ok = false;
    chk.problems.push_back(std::string("unreadable manifest: ") + e.what());
    return chk;
  }
  for (const auto& f : m.value("files", json::array())) {
    const std::string rel = f.value("path", "");
    const fs::path p = root / rel;
    if (!fs::exists(p)) {
      chk.ok = false;
      chk.problems.push_back("missing " + rel);
      continue;
    }
    const std::string bytes = read_file(p.string());
    if (sha256_hex(bytes) != f.value("sha256", "") || bytes.size() != f.value("bytes", std::size_t{0})) {
      chk.ok = false;
      chk.problems.push_back("checksum mismatch " + rel);
    }
  }
  for (const auto& r : m.value("runs", json::array()))
    if (r.value("status", "") != "ok") {
      chk.ok = false;
      chk.problems.push_back("run " + r.value("name", "?") + " " + r.value("status", "?") + ": " +
                             r.value("error", ""));
    }
  const fs::path summary = root / m.value("summary", "summary.csv");
  if (fs::exists(summary)) chk.summary = read_file(summary.string());
  return chk;
}

}  // namespace halfspace
