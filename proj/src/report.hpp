// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>

#include "runner.hpp"
#include "stats.hpp"

namespace transferlab {

/// Header `x,F_empirical,F_target,abs_diff`, values as %.12g.
std::string ecdf_csv(std::span<const EcdfRow> rows);

/// report.json text: config, seed, checks, runtime_seconds, details.
std::string report_json(const RunReport& report);

/// Creates `dir` if needed and fails with an io error when it is not
/// writable. Called before any computation.
void ensure_output_dir(const std::string& dir);

/// Writes report.json and every CSV under `dir`.
void write_report(const RunReport& report, const std::string& dir);

}  // namespace transferlab
