// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace transferlab {

inline const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids{"random-sum", "na-field", "semistable",
                                            "allocations", "psi-law"};
  return ids;
}

/// Validated run configuration. `params` holds the experiment-specific keys
/// with defaults filled in, already converted to their JSON types.
struct RunConfig {
  std::string experiment;
  std::uint64_t seed = 42;
  std::uint64_t replicates = 10000;
  double alpha = 0.01;
  std::string out;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
};

/// Parses a flat key-value JSON object. Values may be numbers or strings
/// holding numbers. Unknown keys and out-of-range values throw ConfigError.
RunConfig parse_run_config(const nlohmann::json& flat);

/// Full config echo: common keys followed by the experiment keys.
nlohmann::ordered_json config_echo(const RunConfig& cfg);

struct Check {
  std::string name;
  std::string kind;  // ks, ks-lattice, ks-two-sample, bound
  double statistic = 0.0;
  double critical = 0.0;
  bool pass = false;
  double alpha = 0.0;  // 0 for deterministic bounds
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::string csv;  // empty when the check has no ECDF table
};

struct CsvFile {
  std::string name;
  std::string content;
};

struct RunReport {
  RunConfig config;
  std::vector<Check> checks;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  std::vector<CsvFile> csv;
  double runtime_seconds = 0.0;

  bool all_passed() const;
};

/// Runs one experiment. `workers` follows ReplicationPlan::workers and never
/// changes the result.
RunReport run_experiment(const RunConfig& cfg, unsigned workers = 0);

}  // namespace transferlab
