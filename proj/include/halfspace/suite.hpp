// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "halfspace/config.hpp"

namespace halfspace {

/// One row of summary.csv: a measured quantity against its prediction.
struct SummaryRow {
  std::string run;
  std::string quantity;
  double predicted = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// A suite member; `config` is empty when parsing or validation failed.
struct SuiteEntry {
  std::string name;
  std::optional<ScenarioConfig> config;
  std::string error;
};

struct RunOutcome {
  std::string name;
  std::string kind;
  std::string status = "pending";  // ok | failed | invalid
  std::string error;
  std::vector<std::string> files;  // relative to the output directory
  std::vector<SummaryRow> rows;
};

struct SuiteOptions {
  std::string out_dir = "out";
  unsigned parallel = 1;
  std::optional<std::uint64_t> seed;  // overrides every run's seed
};

struct SuiteResult {
  std::vector<RunOutcome> runs;
  std::string manifest_path;
  bool hard_failure() const;
  bool all_checks_passed() const;
  /// 0 on success, 1 on any hard error, 3 when runs finished but a check failed.
  int exit_code() const;
};

/// Executes one validated scenario, writing its CSV into run_dir.
RunOutcome execute_scenario(const ScenarioConfig& config, const std::string& out_dir);

/// Runs every entry; invalid entries are recorded without running, a run
/// that throws is marked failed without affecting the others. Writes
/// summary.csv and manifest.json (paths, byte sizes, SHA-256) into out_dir.
SuiteResult run_suite(const std::vector<SuiteEntry>& entries, const SuiteOptions& options);

SuiteEntry entry_from_file(const std::string& path);

/// `*.ini` files of suites_dir/name in lexical order.
std::vector<SuiteEntry> load_suite(const std::string& name, const std::string& suites_dir);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

struct ManifestCheck {
  bool ok = true;
  std::vector<std::string> problems;
  std::string summary;  // contents of summary.csv
};

/// Re-hashes every file listed in dir/manifest.json.
ManifestCheck verify_manifest(const std::string& dir);

}  // namespace halfspace
