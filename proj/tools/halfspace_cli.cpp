// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "halfspace/errors.hpp"
#include "halfspace/heat.hpp"
#include "halfspace/nash.hpp"
#include "halfspace/suite.hpp"

#ifndef HALFSPACE_SUITES_DIR
#define HALFSPACE_SUITES_DIR "suites"
#endif

namespace hs = halfspace;

namespace {

void print_result(const hs::SuiteResult& r) {
  for (const auto& run : r.runs) {
    std::cout << run.name << ": " << run.status;
    if (!run.error.empty()) std::cout << " (" << run.error << ")";
    std::cout << '\n';
    for (const auto& row : run.rows)
      std::cout << "  " << (row.passed ? "pass" : "FAIL") << "  " << row.quantity
                << ": predicted " << row.predicted << ", measured " << row.measured << '\n';
  }
  std::cout << "manifest: " << r.manifest_path << '\n';
}

std::string default_suites_dir() {
  if (const char* env = std::getenv("HALFSPACE_SUITES")) return env;
  return HALFSPACE_SUITES_DIR;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinetic equations in the half-space with absorbing boundary"};
  app.require_subcommand(1);

  std::string out_dir = "out";
  unsigned parallel = 1;
  std::uint64_t seed = 1;
  bool seed_given = false;
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--parallel", parallel, "Concurrent runs")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "Seed override");

  auto* run = app.add_subcommand("run", "Run scenario config files");
  std::vector<std::string> configs;
  run->add_option("configs", configs, "Config files")->required();

  auto* suite = app.add_subcommand("suite", "Run a shipped suite");
  std::string suite_name;
  std::string suites_dir = default_suites_dir();
  suite->add_option("name", suite_name, "Suite name")->required();
  suite->add_option("--suites", suites_dir, "Directory holding suites");

  auto* nash = app.add_subcommand("nash", "Functional inequality checks");
  std::size_t count = 500;
  nash->add_option("--count", count, "Ensemble size")->check(CLI::PositiveNumber);

  auto* heat = app.add_subcommand("heat", "Heat baselines");
  double heat_dx = 0.05;
  heat->add_option("--dx", heat_dx, "Grid spacing")->check(CLI::PositiveNumber);

  auto* report = app.add_subcommand("report", "Verify a manifest and print its summary");
  std::string report_dir;
  report->add_option("dir", report_dir, "Output directory of a suite")->required();

  CLI11_PARSE(app, argc, argv);
  seed_given = seed_opt->count() > 0;

  try {
    hs::SuiteOptions opt;
    opt.out_dir = out_dir;
    opt.parallel = parallel;
    if (seed_given) opt.seed = seed;

    if (*run || *suite) {
      std::vector<hs::SuiteEntry> entries;
      if (*run) {
        for (const auto& c : configs) entries.push_back(hs::entry_from_file(c));
      } else {
        entries = hs::load_suite(suite_name, suites_dir);
      }
      const auto result = hs::run_suite(entries, opt);
      print_result(result);
      return result.exit_code();
    }

    if (*nash) {
      const auto rep = hs::run_nash_suite(seed, count, parallel);
      const std::string csv = rep.csv();
      std::cout << csv;
      if (app.get_option("--out")->count()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream(std::filesystem::path(out_dir) / "nash.csv", std::ios::binary) << csv;
      }
      return rep.passed() ? 0 : 3;
    }

    if (*heat) {
      hs::HeatOptions o;
      o.dx = heat_dx;
      o.fit_window = hs::FitWindow{100.0, 1e4};
      auto gauss = [](double x) { return std::exp(-x * x); };
      auto bump = [](double x) { return x > 0.0 ? x * std::exp(-x * x) : 0.0; };
      const auto whole = hs::heat_decay_experiment(hs::HeatMode::Whole, gauss, 1e4, o);
      const auto half = hs::heat_decay_experiment(hs::HeatMode::Half, bump, 1e4, o);
      const double oracle = hs::heat_kernel_oracle_error(bump, 10.0, heat_dx);
      const bool w_ok = whole.fit && std::abs(whole.fit->exponent + 0.5) <= 0.1;
      const bool h_ok = half.fit && std::abs(half.fit->exponent + 1.5) <= 0.1 &&
                        half.max_first_moment_drift <= 1e-6;
      std::printf("whole-line l2sq exponent %.5f (predicted -0.5)\n",
                  whole.fit ? whole.fit->exponent : NAN);
      std::printf("half-line l2sq exponent %.5f (predicted -1.5), first moment drift %.3g\n",
                  half.fit ? half.fit->exponent : NAN, half.max_first_moment_drift);
      std::printf("kernel oracle Linf error at t = 10: %.3g\n", oracle);
      return (w_ok && h_ok && oracle <= 1e-4) ? 0 : 3;
    }

    if (*report) {
      const auto chk = hs::verify_manifest(report_dir);
      std::cout << chk.summary;
      for (const auto& p : chk.problems) std::cerr << p << '\n';
      return chk.ok ? 0 : 1;
    }
  } catch (const hs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
