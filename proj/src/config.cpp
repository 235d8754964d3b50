// SPDX-License-Identifier: Apache-2.0

#include "halfspace/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "halfspace/errors.hpp"

namespace halfspace {

std::string_view to_string(RunKind kind) {
  switch (kind) {
    case RunKind::Kinetic: return "kinetic";
    case RunKind::Heat: return "heat";
    case RunKind::Nash: return "nash";
  }
  return "unknown";
}

std::function<double(double)> InitialSpec::profile() const {
  const double A = amplitude, w = width;
  if (family == "equilibrium_bump")
    return [A, w](double x) { const double z = x / w; return A * z * std::exp(-z * z); };
  if (family == "box") {
    const double lo = x_lo, hi = x_hi;
    return [A, lo, hi](double x) { return (x >= lo && x <= hi) ? A : 0.0; };
  }
  if (family == "shifted_gaussian") {
    const double c = x0;
    return [A, w, c](double x) { const double z = (x - c) / w; return A * std::exp(-0.5 * z * z); };
  }
  if (family == "custom_table") {
    auto rows = table_rows;
    return [A, rows](double x) {
      if (rows.empty() || x < rows.front().first || x > rows.back().first) return 0.0;
      auto hi = std::lower_bound(rows.begin(), rows.end(), x,
                                 [](const auto& r, double v) { return r.first < v; });
      if (hi == rows.begin()) return A * hi->second;
      auto lo = hi - 1;
      const double s = (x - lo->first) / (hi->first - lo->first);
      return A * ((1.0 - s) * lo->second + s * hi->second);
    };
  }
  throw ConfigError("unknown initial family '" + family + "'");
}

double ScenarioConfig::resolved_v_max() const {
  if (v_max > 0.0) return v_max;
  return (collision == CollisionKind::RelaxationGaussian || collision == CollisionKind::FokkerPlanck)
             ? 8.0
             : 1.0;
}

FitWindow ScenarioConfig::resolved_fit_window() const {
  return {fit_window.lo, fit_window.hi > 0.0 ? fit_window.hi : t_max};
}

std::vector<std::string> ScenarioConfig::problems() const {
  std::vector<std::string> out;
  auto positive = [&](const char* key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) out.push_back(std::string(key) + " must be positive");
  };
  if (name.empty()) out.emplace_back("run.name is required");
  if (name.find_first_of("/\\") != std::string::npos || name == "." || name == "..")
    out.emplace_back("run.name must be a plain file name");
  positive("time.t_max", t_max);
  if (kind == RunKind::Nash) {
    if (nash_count == 0) out.emplace_back("nash.count must be positive");
    return out;
  }
  const auto& fam = initial.family;
  if (fam != "equilibrium_bump" && fam != "box" && fam != "shifted_gaussian" &&
      fam != "custom_table")
    out.push_back("initial.family '" + fam + "' is not one of equilibrium_bump, box, "
                  "shifted_gaussian, custom_table");
  positive("initial.amplitude", initial.amplitude);
  positive("initial.width", initial.width);
  if (fam == "box" && !(initial.x_hi > initial.x_lo))
    out.emplace_back("initial.x_hi must exceed initial.x_lo");
  if (fam == "box" && kind == RunKind::Kinetic && !(initial.v_hi > initial.v_lo))
    out.emplace_back("initial.v_hi must exceed initial.v_lo");
  if (fam == "shifted_gaussian") positive("initial.sigma_v", initial.sigma_v);
  if (fam == "custom_table" && initial.table.empty())
    out.emplace_back("initial.table is required for custom_table");

  positive("diagnostics.t_first", diagnostics.t_first);
  if (diagnostics.samples_per_decade <= 0)
    out.emplace_back("diagnostics.samples_per_decade must be positive");
  positive("diagnostics.far_tolerance", diagnostics.far_tolerance);
  const FitWindow fw = resolved_fit_window();
  positive("diagnostics.fit_lo", fw.lo);
  if (!(fw.hi > fw.lo)) out.emplace_back("diagnostics.fit_hi must exceed diagnostics.fit_lo");
  if (fw.hi > t_max) out.emplace_back("diagnostics.fit_hi exceeds time.t_max");

  if (kind == RunKind::Heat) {
    positive("heat.dx", heat_dx);
    return out;
  }

  positive("grid.dx", dx);
  if (v_max != 0.0) positive("grid.v_max", v_max);
  if (!(x_max >= 100.0)) out.emplace_back("grid.x_max must be at least 100");
  if (nv < 4) out.emplace_back("grid.nv must be at least 4");
  if (dx > 0.0 && x_max > 0.0 && dx > x_max / 16.0) out.emplace_back("grid.dx too coarse for grid.x_max");
  if (!(solver.cfl > 0.0) || solver.cfl > solver.cfl_limit())
    out.push_back("solver.cfl must lie in (0, " + std::to_string(solver.cfl_limit()) + "]");
  if (dt) {
    positive("solver.dt", *dt);
    // max speed of the velocity domain: 1 on the ball and circle
    double speed = resolved_v_max();
    if (collision == CollisionKind::LaplaceBeltramiCircle) speed = 1.0;
    if (*dt > 0.0 && dx > 0.0 && *dt * speed / dx > solver.cfl_limit())
      out.push_back("solver.dt violates the CFL bound: dt max|v| / dx = " +
                    std::to_string(*dt * speed / dx) + " > " + std::to_string(solver.cfl_limit()));
  }
  if (collision == CollisionKind::RelaxationBounded && resolved_v_max() != 1.0)
    out.emplace_back("grid.v_max must be 1 for relaxation_bounded");
  return out;
}

void ScenarioConfig::validate() const {
  const auto p = problems();
  if (p.empty()) return;
  std::string msg = "invalid scenario '" + name + "':";
  for (const auto& s : p) msg += "\n  " + s;
  throw ConfigError(msg);
}

std::string ConfigParse::message() const {
  std::string out;
  for (const auto& i : issues) {
    if (i.line) out += "line " + std::to_string(i.line) + ": ";
    out += i.message + '\n';
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  std::size_t line;
};

class Reader {
 public:
  Reader(std::map<std::string, Entry>& entries, std::vector<ConfigIssue>& issues)
      : entries_(entries), issues_(issues) {}

  template <class F>
  void with(const std::string& key, F&& apply) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return;
    line_ = it->second.line;
    key_ = key;
    apply(it->second.value);
    entries_.erase(it);
  }

  void real(const std::string& key, double& out) {
    with(key, [&](const std::string& v) {
      double x = 0.0;
      auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
      if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x)) {
        fail("expected a number, got '" + v + "'");
        return;
      }
      out = x;
    });
  }

  void positive(const std::string& key, double& out) {
    with(key, [&](const std::string& v) {
      double x = 0.0;
      auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
      if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x)) {
        fail("expected a number, got '" + v + "'");
      } else if (!(x > 0.0)) {
        fail("must be positive, got " + v);
      } else {
        out = x;
      }
    });
  }

  template <class I>
  void integer(const std::string& key, I& out, bool positive_only = true) {
    with(key, [&](const std::string& v) {
      long long x = 0;
      auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
      if (ec != std::errc() || p != v.data() + v.size()) {
        fail("expected an integer, got '" + v + "'");
      } else if (positive_only && x <= 0) {
        fail("must be positive, got " + v);
      } else if (x < 0) {
        fail("must be non-negative, got " + v);
      } else {
        out = static_cast<I>(x);
      }
    });
  }

  void text(const std::string& key, std::string& out) {
    with(key, [&](const std::string& v) { out = v; });
  }

  template <class E>
  void choice(const std::string& key, E& out, std::initializer_list<std::pair<const char*, E>> options) {
    with(key, [&](const std::string& v) {
      for (const auto& [name, val] : options)
        if (v == name) {
          out = val;
          return;
        }
      std::string allowed;
      for (const auto& o : options) allowed += (allowed.empty() ? "" : ", ") + std::string(o.first);
      fail("'" + v + "' is not one of " + allowed);
    });
  }

  void fail(const std::string& what) { issues_.push_back({line_, key_ + ": " + what}); }

 private:
  std::map<std::string, Entry>& entries_;
  std::vector<ConfigIssue>& issues_;
  std::size_t line_ = 0;
  std::string key_;
};

}  // namespace

ConfigParse parse_config(std::string_view text) {
  ConfigParse out;
  std::map<std::string, Entry> entries;
  std::string section;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    const auto hash = raw.find_first_of("#;");
    std::string_view line = trim(raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        out.issues.push_back({lineno, "malformed section header '" + std::string(line) + "'"});
        continue;
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      out.issues.push_back({lineno, "expected key = value, got '" + std::string(line) + "'"});
      continue;
    }
    const std::string key = std::string(trim(line.substr(0, eq)));
    const std::string value = std::string(trim(line.substr(eq + 1)));
    if (key.empty()) {
      out.issues.push_back({lineno, "missing key"});
      continue;
    }
    if (section.empty()) {
      out.issues.push_back({lineno, "key '" + key + "' outside any [section]"});
      continue;
    }
    const std::string full = section + "." + key;
    auto [it, fresh] = entries.emplace(full, Entry{value, lineno});
    if (!fresh) {
      out.issues.push_back({lineno, "duplicate key " + full + " (lines " +
                                        std::to_string(it->second.line) + " and " +
                                        std::to_string(lineno) + ")"});
    }
  }

  ScenarioConfig c;
  Reader r(entries, out.issues);
  r.text("run.name", c.name);
  r.choice("run.kind", c.kind,
           {{"kinetic", RunKind::Kinetic}, {"heat", RunKind::Heat}, {"nash", RunKind::Nash}});
  r.integer("run.seed", c.seed, false);
  r.text("run.output", c.output);
  r.choice("model.collision", c.collision,
           {{"relaxation_bounded", CollisionKind::RelaxationBounded},
            {"relaxation_gaussian", CollisionKind::RelaxationGaussian},
            {"fokker_planck", CollisionKind::FokkerPlanck},
            {"laplace_beltrami_circle", CollisionKind::LaplaceBeltramiCircle}});
  r.positive("grid.x_max", c.x_max);
  r.positive("grid.dx", c.dx);
  r.integer("grid.nv", c.nv);
  r.positive("grid.v_max", c.v_max);
  r.text("initial.family", c.initial.family);
  r.positive("initial.amplitude", c.initial.amplitude);
  r.positive("initial.width", c.initial.width);
  r.real("initial.x0", c.initial.x0);
  r.real("initial.x_lo", c.initial.x_lo);
  r.real("initial.x_hi", c.initial.x_hi);
  r.real("initial.v_lo", c.initial.v_lo);
  r.real("initial.v_hi", c.initial.v_hi);
  r.real("initial.v0", c.initial.v0);
  r.positive("initial.sigma_v", c.initial.sigma_v);
  r.text("initial.table", c.initial.table);
  r.positive("time.t_max", c.t_max);
  r.positive("solver.cfl", c.solver.cfl);
  r.choice("solver.splitting", c.solver.splitting,
           {{"strang", Splitting::Strang}, {"lie", Splitting::LieTransportFirst}});
  r.choice("solver.order", c.solver.order,
           {{"upwind1", TransportOrder::Upwind1}, {"muscl2", TransportOrder::MUSCL2}});
  double dt_value = 0.0;
  r.positive("solver.dt", dt_value);
  if (dt_value > 0.0) c.dt = dt_value;
  r.positive("diagnostics.t_first", c.diagnostics.t_first);
  r.integer("diagnostics.samples_per_decade", c.diagnostics.samples_per_decade);
  r.positive("diagnostics.fit_lo", c.fit_window.lo);
  r.positive("diagnostics.fit_hi", c.fit_window.hi);
  r.positive("diagnostics.far_tolerance", c.diagnostics.far_tolerance);
  r.choice("heat.mode", c.heat_mode, {{"half", HeatMode::Half}, {"whole", HeatMode::Whole}});
  r.positive("heat.dx", c.heat_dx);
  r.integer("nash.count", c.nash_count);
  for (const auto& [key, e] : entries) out.issues.push_back({e.line, "unknown key " + key});

  std::sort(out.issues.begin(), out.issues.end(),
            [](const ConfigIssue& a, const ConfigIssue& b) { return a.line < b.line; });
  if (!out.issues.empty()) return out;

  for (const auto& p : c.problems()) out.issues.push_back({0, p});
  if (out.issues.empty()) {
    if (c.output.empty()) c.output = c.name;
    out.config = std::move(c);
  }
  return out;
}

std::vector<std::pair<double, double>> load_initial_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read initial table '" + path + "'");
  std::vector<std::pair<double, double>> rows;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto comma = s.find(',');
    double x = 0.0, y = 0.0;
    bool good = comma != std::string_view::npos;
    if (good) {
      auto a = trim(s.substr(0, comma)), b = trim(s.substr(comma + 1));
      auto r1 = std::from_chars(a.data(), a.data() + a.size(), x);
      auto r2 = std::from_chars(b.data(), b.data() + b.size(), y);
      good = r1.ec == std::errc() && r2.ec == std::errc() && r1.ptr == a.data() + a.size() &&
             r2.ptr == b.data() + b.size();
    }
    if (!good) {
      if (rows.empty() && n == 1) continue;  // header
      throw ConfigError(path + ":" + std::to_string(n) + ": expected 'x,value'");
    }
    if (y < 0.0) throw ConfigError(path + ":" + std::to_string(n) + ": negative value");
    rows.emplace_back(x, y);
  }
  std::sort(rows.begin(), rows.end());
  if (rows.size() < 2) throw ConfigError("initial table '" + path + "' needs at least two rows");
  return rows;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  auto parsed = parse_config(ss.str());
  if (!parsed.ok()) throw ConfigError(path + ":\n" + parsed.message());
  ScenarioConfig c = std::move(*parsed.config);
  if (c.initial.family == "custom_table") {
    std::filesystem::path table(c.initial.table);
    if (table.is_relative()) table = std::filesystem::path(path).parent_path() / table;
    c.initial.table_rows = load_initial_table(table.string());
  }
  return c;
}

}  // namespace halfspace
