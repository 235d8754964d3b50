// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "halfspace/config.hpp"
#include "halfspace/errors.hpp"
#include "halfspace/suite.hpp"

using namespace halfspace;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("halfspace_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kHeatSmall =
    "[run]\nname = heat_small\nkind = heat\n\n[heat]\nmode = half\ndx = 0.1\n\n[time]\nt_max = 100\n\n"
    "[diagnostics]\nfit_lo = 10\n";

bool mentions(const ConfigParse& p, std::size_t line, const std::string& text) {
  for (const auto& i : p.issues)
    if (i.line == line && i.message.find(text) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(ConfigParse, MinimalConfigTakesDefaults) {
  const auto p = parse_config("[run]\nname = demo\n");
  ASSERT_TRUE(p.ok()) << p.message();
  const auto& c = *p.config;
  EXPECT_EQ(c.name, "demo");
  EXPECT_EQ(c.output, "demo");
  EXPECT_EQ(c.kind, RunKind::Kinetic);
  EXPECT_EQ(c.collision, CollisionKind::RelaxationBounded);
  EXPECT_EQ(c.x_max, 300.0);
  EXPECT_EQ(c.dx, 0.1);
  EXPECT_EQ(c.nv, 32u);
  EXPECT_EQ(c.t_max, 2000.0);
  EXPECT_EQ(c.resolved_v_max(), 1.0);
  EXPECT_EQ(c.resolved_fit_window().lo, 100.0);
  EXPECT_EQ(c.resolved_fit_window().hi, 2000.0);
  EXPECT_EQ(c.diagnostics.samples_per_decade, 16);
}

TEST(ConfigParse, CommentsAndChoices) {
  const auto p = parse_config(
      "# header\n[run]\nname = fp ; trailing\n[model]\ncollision = fokker_planck\n"
      "[grid]\nx_max = 500\ndx = 0.2\n[solver]\norder = muscl2\ncfl = 0.4\n");
  ASSERT_TRUE(p.ok()) << p.message();
  EXPECT_EQ(p.config->name, "fp");
  EXPECT_EQ(p.config->collision, CollisionKind::FokkerPlanck);
  EXPECT_EQ(p.config->resolved_v_max(), 8.0);
  EXPECT_EQ(p.config->solver.order, TransportOrder::MUSCL2);
}

TEST(ConfigParse, NegativeSpacingNamesTheLine) {
  const auto p = parse_config("[run]\nname = x\n[grid]\ndx = -0.1\n");
  EXPECT_FALSE(p.ok());
  EXPECT_TRUE(mentions(p, 4, "grid.dx")) << p.message();
  EXPECT_NE(p.message().find("4"), std::string::npos);
}

TEST(ConfigParse, DuplicateKeyListsBothLines) {
  const auto p = parse_config("[run]\nname = x\n[grid]\nnv = 8\n\nnv = 16\n");
  EXPECT_FALSE(p.ok());
  EXPECT_TRUE(mentions(p, 6, "duplicate key grid.nv (lines 4 and 6)")) << p.message();
}

TEST(ConfigParse, StructuralErrors) {
  const auto p = parse_config("name = x\n[run\n[run]\nname = x\ncolour = red\nkind = fluid\njunk\n");
  EXPECT_FALSE(p.ok());
  EXPECT_TRUE(mentions(p, 1, "outside any [section]"));
  EXPECT_TRUE(mentions(p, 2, "malformed section header"));
  EXPECT_TRUE(mentions(p, 5, "run.colour"));
  EXPECT_TRUE(mentions(p, 6, "run.kind"));
  EXPECT_TRUE(mentions(p, 7, "expected key = value"));
}

TEST(ConfigParse, ConstraintViolations) {
  auto bad = [](const std::string& body) { return parse_config("[run]\nname = x\n" + body); };
  EXPECT_FALSE(bad("[grid]\nx_max = 50\n").ok());
  EXPECT_FALSE(bad("[grid]\ndx = 0.25\n[solver]\ndt = 1\n").ok());  // CFL
  EXPECT_FALSE(bad("[solver]\ncfl = 1.2\n").ok());
  EXPECT_FALSE(bad("[grid]\nv_max = 2\n").ok());  // bounded relaxation lives on the unit ball
  EXPECT_FALSE(bad("[time]\nt_max = 500\n[diagnostics]\nfit_hi = 900\n").ok());  // fit window past the horizon
  EXPECT_FALSE(bad("[diagnostics]\nfit_lo = 300\nfit_hi = 200\n").ok());
  EXPECT_FALSE(bad("[initial]\nfamily = triangle\n").ok());
  EXPECT_FALSE(parse_config("[run]\nname = a/b\n").ok());
  EXPECT_FALSE(parse_config("[grid]\nnv = 8\n").ok());
  ScenarioConfig c;
  c.name = "x";
  c.nv = 2;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_FALSE(c.problems().empty());
}

TEST(ConfigParse, CustomTableRelativeToConfig) {
  const auto dir = scratch("table");
  write(dir / "rho.csv", "x,value\n0,0\n1,1\n2,0\n");
  write(dir / "t.ini", "[run]\nname = t\n[initial]\nfamily = custom_table\ntable = rho.csv\n");
  const auto c = load_config((dir / "t.ini").string());
  ASSERT_EQ(c.initial.table_rows.size(), 3u);
  const auto g = c.initial.profile();
  EXPECT_DOUBLE_EQ(g(0.5), 0.5);
  EXPECT_DOUBLE_EQ(g(1.5), 0.5);
  EXPECT_EQ(g(3.0), 0.0);
  write(dir / "bad.csv", "0,0\n1,oops\n");
  EXPECT_THROW(load_initial_table((dir / "bad.csv").string()), ConfigError);
}

TEST(Sha256, KnownDigests) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Suite, EmptySuiteWritesAnEmptyManifest) {
  const auto entries = load_suite("empty", HALFSPACE_SUITES_DIR);
  EXPECT_TRUE(entries.empty());
  const auto out = scratch("empty_suite");
  SuiteOptions o;
  o.out_dir = out.string();
  const auto r = run_suite(entries, o);
  EXPECT_EQ(r.exit_code(), 0);
  EXPECT_TRUE(r.runs.empty());
  const auto chk = verify_manifest(out.string());
  EXPECT_TRUE(chk.ok);
  EXPECT_EQ(chk.summary, "# schema: suite_summary v1\nrun,quantity,predicted,measured,tolerance,status\n");
  EXPECT_THROW(load_suite("no_such_suite", HALFSPACE_SUITES_DIR), ConfigError);
}

TEST(Suite, InvalidEntryIsReportedWithoutRunning) {
  const auto dir = scratch("invalid_suite");
  write(dir / "good.ini", kHeatSmall);
  write(dir / "cfl.ini", "[run]\nname = cfl\n[grid]\nx_max = 100\ndx = 0.25\n[solver]\ndt = 1\n");
  std::vector<SuiteEntry> entries{entry_from_file((dir / "cfl.ini").string()),
                                  entry_from_file((dir / "good.ini").string())};
  EXPECT_FALSE(entries[0].config);
  EXPECT_NE(entries[0].error.find("CFL"), std::string::npos) << entries[0].error;
  SuiteOptions o;
  o.out_dir = (dir / "out").string();
  const auto r = run_suite(entries, o);
  EXPECT_NE(r.exit_code(), 0);
  EXPECT_TRUE(r.hard_failure());
  ASSERT_EQ(r.runs.size(), 2u);
  EXPECT_EQ(r.runs[0].status, "invalid");
  const auto summary = slurp(fs::path(o.out_dir) / "summary.csv");
  EXPECT_NE(summary.find("cfl,run,nan,nan,nan,invalid"), std::string::npos) << summary;
}

TEST(Suite, DeterministicAcrossRunsAndThreads) {
  const auto dir = scratch("determinism");
  write(dir / "a.ini", kHeatSmall);
  write(dir / "b.ini",
        "[run]\nname = relax_tiny\n[grid]\nx_max = 100\ndx = 0.5\nnv = 8\n[time]\nt_max = 20\n"
        "[diagnostics]\nfit_lo = 2\n");
  std::vector<SuiteEntry> entries{entry_from_file((dir / "a.ini").string()),
                                  entry_from_file((dir / "b.ini").string())};
  ASSERT_TRUE(entries[0].config && entries[1].config) << entries[0].error << entries[1].error;
  SuiteOptions o1, o2;
  o1.out_dir = (dir / "one").string();
  o2.out_dir = (dir / "two").string();
  o2.parallel = 2;
  run_suite(entries, o1);
  run_suite(entries, o2);
  for (const char* f : {"manifest.json", "summary.csv", "heat_small/heat.csv", "relax_tiny/trajectory.csv"}) {
    const auto a = slurp(fs::path(o1.out_dir) / f), b = slurp(fs::path(o2.out_dir) / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, b) << f;
  }
}

TEST(Suite, ManifestDetectsTampering) {
  const auto dir = scratch("tamper");
  write(dir / "a.ini", kHeatSmall);
  SuiteOptions o;
  o.out_dir = (dir / "out").string();
  const auto r = run_suite({entry_from_file((dir / "a.ini").string())}, o);
  ASSERT_FALSE(r.hard_failure());
  const fs::path csv = fs::path(o.out_dir) / "heat_small" / "heat.csv";
  EXPECT_EQ(sha256_file(csv.string()), sha256_hex(slurp(csv)));
  EXPECT_TRUE(verify_manifest(o.out_dir).ok);
  std::string bytes = slurp(csv);
  bytes[bytes.size() / 2] ^= 1;
  write(csv, bytes);
  const auto chk = verify_manifest(o.out_dir);
  EXPECT_FALSE(chk.ok);
  ASSERT_FALSE(chk.problems.empty());
  EXPECT_NE(chk.problems[0].find("heat.csv"), std::string::npos);
}

#ifdef HALFSPACE_CLI
TEST(Cli, SuiteReportAndErrors) {
  const auto dir = scratch("cli");
  fs::create_directories(dir / "suites" / "mini");
  write(dir / "suites" / "mini" / "heat.ini", kHeatSmall);
  const std::string cli = HALFSPACE_CLI;
  const std::string out = (dir / "out").string();
  auto run = [](const std::string& cmd) {
    const int st = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  };
  EXPECT_EQ(run(cli + " --out " + out + " suite mini --suites " + (dir / "suites").string()), 0);
  EXPECT_EQ(run(cli + " report " + out), 0);
  EXPECT_EQ(run(cli + " --out " + out + " suite missing --suites " + (dir / "suites").string()), 1);
  EXPECT_EQ(run(cli + " report " + (dir / "nothing").string()), 1);
  EXPECT_NE(run(cli + " frobnicate"), 0);
}
#endif
