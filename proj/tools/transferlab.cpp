// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
//
// transferlab run --experiment <id> [flags] [--config file.json] --out <dir>
//
// Exit codes: 0 all checks pass, 2 a check failed (reports still written),
// 1 usage, configuration or i/o error.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "transferlab/transferlab.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitCheckFailed = 2;

// Flag name -> config key. Values stay strings; the library converts them.
const std::map<std::string, std::string> kFlags{
    {"seed", "master seed"},
    {"replicates", "Monte Carlo replicates"},
    {"alpha", "significance level of the KS checks"},
    {"d", "dimension (random-sum, na-field)"},
    {"kseq", "sampling sequence: identity, square, pow2, geom:<c> (random-sum)"},
    {"stage", "triangular-array row n (random-sum)"},
    {"mixing", "mixing law: point:t, uniform:a,b, log:c, discrete:t@w;t@w"},
    {"a", "difference coefficient in (0,1) (na-field)"},
    {"n", "lattice size list (na-field) or horizon (psi-law)"},
    {"c", "block ratio (semistable, psi-law)"},
    {"horizon", "logarithmic index horizon, e.g. 2^40 (semistable)"},
    {"m", "fixed exponent of the subsequence mixture (semistable)"},
    {"index", "log or fixed (semistable)"},
    {"r", "occupancy level (allocations)"},
    {"path", "central, sparse, dense or mixed (allocations)"},
    {"N", "number of boxes (allocations)"},
    {"lambda", "Poisson parameter of sparse/dense paths (allocations)"},
    {"tolerance", "sup-distance bound (psi-law)"},
    {"slack", "decade monotonicity slack (psi-law)"},
};

nlohmann::json read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config file " + path);
  return nlohmann::json::parse(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transferlab: Monte Carlo checks of transfer theorems for randomly indexed "
               "families"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tl_version()));

  auto* run = app.add_subcommand("run", "run one experiment and write report.json + CSVs");
  std::string experiment;
  std::string config_path;
  std::string out_dir = "transferlab-out";
  unsigned workers = 0;
  run->add_option("--experiment,-e", experiment,
                  "random-sum, na-field, semistable, allocations or psi-law");
  run->add_option("--config", config_path, "flat JSON config; flags override its values")
      ->check(CLI::ExistingFile);
  run->add_option("--out,-o", out_dir, "output directory")->capture_default_str();
  run->add_option("--workers", workers, "worker threads (0: TRANSFERLAB_WORKERS or all cores)");
  std::map<std::string, std::string> values;
  for (const auto& [flag, help] : kFlags) run->add_option("--" + flag, values[flag], help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  nlohmann::json cfg = nlohmann::json::object();
  try {
    if (!config_path.empty()) cfg = read_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  if (!cfg.is_object()) {
    std::cerr << "error: config file must hold a JSON object\n";
    return kExitError;
  }
  if (!experiment.empty()) cfg["experiment"] = experiment;
  for (const auto& [flag, value] : values) {
    if (run->count("--" + flag) > 0) cfg[flag] = value;
  }
  if (run->count("--out") > 0 || !cfg.contains("out")) cfg["out"] = out_dir;
  if (!cfg.contains("experiment")) {
    std::cerr << "error: --experiment is required\n\n" << run->help();
    return kExitError;
  }

  tl_run* handle = nullptr;
  const tl_status st = tl_run_experiment(cfg.dump().c_str(), workers, &handle);
  if (st != TL_OK) {
    std::cerr << "error (" << tl_status_string(st) << "): " << tl_last_error() << "\n";
    if (st == TL_CONFIG_ERROR) std::cerr << "\n" << run->help();
    return kExitError;
  }
  const auto report = nlohmann::json::parse(tl_run_report_json(handle));
  const bool passed = tl_run_all_passed(handle) != 0;
  tl_run_destroy(handle);

  for (const auto& c : report["checks"]) {
    std::printf("%-4s %-24s statistic=%.6g critical=%.6g\n", c["pass"].get<bool>() ? "PASS" : "FAIL",
                c["name"].get<std::string>().c_str(), c["statistic"].get<double>(),
                c["critical"].get<double>());
  }
  std::printf("report: %s/report.json (%.2f s)\n", cfg["out"].get<std::string>().c_str(),
              report["runtime_seconds"].get<double>());
  return passed ? kExitPass : kExitCheckFailed;
}
