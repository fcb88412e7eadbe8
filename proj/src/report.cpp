// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include "report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "errors.hpp"

namespace transferlab {

namespace fs = std::filesystem;

namespace {

void append_number(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  out += buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::io, "cannot open " + path.string() + " for writing");
  f << content;
  if (!f) throw Error(ErrorCode::io, "write failed for " + path.string());
}

}  // namespace

std::string ecdf_csv(std::span<const EcdfRow> rows) {
  std::string out = "x,F_empirical,F_target,abs_diff\n";
  out.reserve(out.size() + rows.size() * 64);
  for (const auto& r : rows) {
    append_number(out, r.x);
    out += ',';
    append_number(out, r.f_empirical);
    out += ',';
    append_number(out, r.f_target);
    out += ',';
    append_number(out, r.abs_diff);
    out += '\n';
  }
  return out;
}

std::string report_json(const RunReport& report) {
  nlohmann::ordered_json j;
  j["config"] = config_echo(report.config);
  j["seed"] = report.config.seed;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["statistic"] = c.statistic;
    cj["critical"] = c.critical;
    cj["pass"] = c.pass;
    cj["kind"] = c.kind;
    cj["alpha"] = c.alpha;
    cj["n"] = c.n;
    if (c.m != 0) cj["m"] = c.m;
    if (!c.csv.empty()) cj["csv"] = c.csv;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  j["all_passed"] = report.all_passed();
  j["runtime_seconds"] = report.runtime_seconds;
  j["details"] = report.details;
  return j.dump(2) + "\n";
}

void ensure_output_dir(const std::string& dir) {
  if (dir.empty()) throw ConfigError("output directory must not be empty");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::io, "cannot create output directory " + dir);
  }
  const fs::path probe = fs::path(dir) / ".transferlab-write-probe";
  {
    std::ofstream f(probe);
    if (!f) throw Error(ErrorCode::io, "output directory " + dir + " is not writable");
  }
  fs::remove(probe, ec);
}

void write_report(const RunReport& report, const std::string& dir) {
  ensure_output_dir(dir);
  for (const auto& f : report.csv) write_file(fs::path(dir) / f.name, f.content);
  write_file(fs::path(dir) / "report.json", report_json(report));
}

}  // namespace transferlab
