// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "errors.hpp"
#include "experiments/allocations.hpp"
#include "experiments/na_field.hpp"
#include "experiments/random_sum.hpp"
#include "experiments/semistable.hpp"
#include "index_control.hpp"
#include "report.hpp"
#include "stats.hpp"

namespace transferlab {

using ojson = nlohmann::ordered_json;

namespace {

enum class Type { uint, real, text };

struct Key {
  const char* name;
  Type type;
  // Default as text; empty means "derived from other keys".
  const char* fallback;
};

const std::vector<Key>& keys_for(const std::string& experiment) {
  static const std::map<std::string, std::vector<Key>> table{
      {"random-sum",
       {{"d", Type::uint, "1"},
        {"kseq", Type::text, "pow2"},
        {"stage", Type::uint, "14"},
        {"mixing", Type::text, "uniform:0,2"}}},
      {"na-field",
       {{"d", Type::uint, "1"},
        {"a", Type::real, "0.5"},
        {"n", Type::text, ""},
        {"mixing", Type::text, "point:1"}}},
      {"semistable",
       {{"c", Type::real, "2"},
        {"horizon", Type::text, "2^256"},
        {"m", Type::uint, "40"},
        {"index", Type::text, "log"}}},
      {"allocations",
       {{"r", Type::uint, "0"},
        {"path", Type::text, "central"},
        {"N", Type::uint, "10000"},
        {"lambda", Type::real, "1"}}},
      {"psi-law",
       {{"n", Type::uint, "1000000"},
        {"c", Type::real, "2"},
        {"tolerance", Type::real, "0.15"},
        {"slack", Type::real, "1.1"}}},
  };
  const auto it = table.find(experiment);
  if (it == table.end()) {
    std::string ids;
    for (const auto& id : experiment_ids()) ids += (ids.empty() ? "" : ", ") + id;
    throw ConfigError("unknown experiment '" + experiment + "' (expected one of " + ids + ")");
  }
  return it->second;
}

std::string as_text(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  throw ConfigError("config key '" + key + "' must be a number or a string");
}

double parse_real(const std::string& text, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw ConfigError("config key '" + key + "': '" + text + "' is not a finite number");
  }
  return v;
}

// Accepts decimal integers, integral scientific notation and "2^k".
std::uint64_t parse_uint(const std::string& text, const std::string& key) {
  const auto caret = text.find('^');
  if (caret != std::string::npos) {
    const auto base = parse_uint(text.substr(0, caret), key);
    const auto exp = parse_uint(text.substr(caret + 1), key);
    std::uint64_t v = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
      if (base != 0 && v > std::numeric_limits<std::uint64_t>::max() / base) {
        throw ConfigError("config key '" + key + "': '" + text + "' overflows");
      }
      v *= base;
    }
    return v;
  }
  if (!text.empty() && std::all_of(text.begin(), text.end(),
                                   [](char ch) { return ch >= '0' && ch <= '9'; })) {
    try {
      return std::stoull(text);
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': '" + text + "' overflows");
    }
  }
  const double v = parse_real(text, key);
  if (v < 0.0 || v != std::floor(v) || v >= 0x1.0p64) {
    throw ConfigError("config key '" + key + "': '" + text +
                      "' is not a nonnegative integer");
  }
  return static_cast<std::uint64_t>(v);
}

ojson typed(Type type, const std::string& text, const std::string& key) {
  switch (type) {
    case Type::uint: return parse_uint(text, key);
    case Type::real: return parse_real(text, key);
    case Type::text: return text;
  }
  return text;
}

std::vector<std::uint64_t> parse_uint_list(const std::string& text, const std::string& key) {
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    out.push_back(parse_uint(text.substr(start, end - start), key));
    start = end + 1;
  }
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

// "2^P" selects the dyadic horizon 2^P; a plain integer an explicit horizon.
struct HorizonSpec {
  unsigned exponent = 0;
  std::uint64_t n = 0;
};

HorizonSpec parse_horizon(const std::string& text) {
  HorizonSpec h;
  if (text.rfind("2^", 0) == 0) {
    const auto p = parse_uint(text.substr(2), "horizon");
    require(p <= 1000, "semistable: horizon exponent must be <= 1000");
    h.exponent = static_cast<unsigned>(p);
  } else {
    h.n = parse_uint(text, "horizon");
    require(h.n >= 1 && h.n <= (std::uint64_t{1} << 62),
            "semistable: explicit horizon must be in [1, 2^62]; use 2^P beyond");
  }
  return h;
}

// Mixing laws of the transfer experiments live on [0, inf)^d.
void check_mixing(const std::string& experiment, const std::string& text, std::size_t d) {
  std::optional<MixingLaw> rho;
  try {
    rho.emplace(MixingLaw::parse(text, d));
  } catch (const Error& e) {
    throw ConfigError(experiment + ": mixing '" + text + "': " + e.what());
  }
  bool ok = true;
  if (rho->is_discrete()) {
    for (const auto& a : rho->atoms()) {
      for (double v : a.t) ok = ok && v >= 0.0;
    }
  } else {
    for (double v : rho->lower()) ok = ok && v >= 0.0;
  }
  require(ok, experiment + ": mixing law must live on [0, inf)^d");
}

// Experiment-specific range checks that need no computation.
void validate_params(const RunConfig& cfg) {
  const auto& p = cfg.params;
  if (cfg.experiment == "random-sum") {
    const auto d = p["d"].get<std::uint64_t>();
    require(d >= 1 && d <= 3, "random-sum: d must be 1, 2 or 3");
    SamplingSequence::parse(p["kseq"].get<std::string>());
    require(p["stage"].get<std::uint64_t>() <= 62, "random-sum: stage must be <= 62");
    check_mixing(cfg.experiment, p["mixing"].get<std::string>(), d);
  } else if (cfg.experiment == "na-field") {
    const auto d = p["d"].get<std::uint64_t>();
    require(d >= 1 && d <= 3, "na-field: d must be 1, 2 or 3");
    const double a = p["a"].get<double>();
    require(a > 0.0 && a < 1.0, "na-field: a must lie in (0, 1)");
    const auto n = parse_uint_list(p["n"].get<std::string>(), "n");
    require(n.size() == d, "na-field: n needs one entry or d entries");
    for (auto v : n) require(v >= 1, "na-field: n entries must be >= 1");
    check_mixing(cfg.experiment, p["mixing"].get<std::string>(), d);
  } else if (cfg.experiment == "semistable") {
    require(p["c"].get<double>() == 2.0, "semistable: only c = 2 is supported");
    parse_horizon(p["horizon"].get<std::string>());
    require(p["m"].get<std::uint64_t>() <= 60, "semistable: m must be <= 60");
    const auto idx = p["index"].get<std::string>();
    require(idx == "log" || idx == "fixed", "semistable: index must be 'log' or 'fixed'");
  } else if (cfg.experiment == "allocations") {
    require(p["r"].get<std::uint64_t>() <= 64, "allocations: r must be <= 64");
    const auto path = p["path"].get<std::string>();
    if (path != "mixed") parse_allocation_path(path);
    require(!(p["r"].get<std::uint64_t>() == 1 && path == "sparse"),
            "allocations: r = 1 has no sparse Poisson regime; use path dense");
    const auto N = p["N"].get<std::uint64_t>();
    require(N >= 2 && N <= (std::uint64_t{1} << 26), "allocations: N must be in [2, 2^26]");
    const double lambda = p["lambda"].get<double>();
    require(lambda > 0.0, "allocations: lambda must be > 0");
  } else if (cfg.experiment == "psi-law") {
    const auto n = p["n"].get<std::uint64_t>();
    require(n >= 1 && n <= 20000000, "psi-law: n must be in [1, 2e7]");
    require(p["c"].get<double>() > 1.0, "psi-law: c must be > 1");
    require(p["tolerance"].get<double>() > 0.0, "psi-law: tolerance must be > 0");
    require(p["slack"].get<double>() >= 1.0, "psi-law: slack must be >= 1");
  }
}

Check from_gof(const std::string& name, const std::string& kind, const GofReport& g,
               const std::string& csv) {
  Check c;
  c.name = name;
  c.kind = kind;
  c.statistic = g.value;
  c.critical = g.critical;
  c.pass = g.pass;
  c.alpha = g.alpha;
  c.n = g.n;
  c.m = g.m;
  c.csv = csv;
  return c;
}

Check bound(const std::string& name, double statistic, double critical, std::uint64_t n) {
  Check c;
  c.name = name;
  c.kind = "bound";
  c.statistic = statistic;
  c.critical = critical;
  c.pass = statistic < critical;
  c.n = n;
  return c;
}

void add_ks(RunReport& rep, const std::string& name, const EmpiricalDistribution& emp,
            const Distribution& target) {
  std::vector<EcdfRow> rows;
  const auto g = ks_one_sample(emp, target, rep.config.alpha, &rows);
  const std::string csv = name + ".csv";
  rep.checks.push_back(from_gof(name, "ks", g, csv));
  rep.csv.push_back({csv, ecdf_csv(rows)});
}

ojson sample_summary(const EmpiricalDistribution& e) {
  ojson j;
  j["size"] = e.size();
  j["mean"] = e.mean();
  j["variance"] = e.variance();
  j["median"] = e.quantile(0.5);
  return j;
}

ReplicationPlan plan_for(const RunConfig& cfg, unsigned workers) {
  ReplicationPlan plan;
  plan.replicates = cfg.replicates;
  plan.seed = SeedSpec{cfg.seed, 0};
  plan.workers = workers;
  return plan;
}

void run_random_sum_exp(RunReport& rep, unsigned workers) {
  const auto& p = rep.config.params;
  const auto d = p["d"].get<std::uint64_t>();
  RandomSumConfig cfg;
  cfg.k_seq.assign(d, SamplingSequence::parse(p["kseq"].get<std::string>()));
  cfg.stage = p["stage"].get<std::uint64_t>();
  cfg.mixing = MixingLaw::parse(p["mixing"].get<std::string>(), d);
  const auto result = run_random_sum(cfg, plan_for(rep.config, workers));
  add_ks(rep, "ks_mixture", result.empirical, *result.target);
  rep.details["target"] = result.target->describe();
  auto kn = ojson::array();
  for (const auto& k : cfg.k_seq) kn.push_back(k.integer(cfg.stage));
  rep.details["k_n"] = kn;
  rep.details["sample"] = sample_summary(result.empirical);
}

void run_na_field_exp(RunReport& rep, unsigned workers) {
  const auto& p = rep.config.params;
  const auto d = p["d"].get<std::uint64_t>();
  NAFieldConfig cfg;
  cfg.a = p["a"].get<double>();
  cfg.n = parse_uint_list(p["n"].get<std::string>(), "n");
  cfg.mixing = MixingLaw::parse(p["mixing"].get<std::string>(), d);
  const auto result = run_na_field(cfg, plan_for(rep.config, workers));
  add_ks(rep, "ks_mixture", result.transfer.empirical, *result.transfer.target);
  if (result.finite_n) add_ks(rep, "ks_finite_n", result.transfer.empirical, *result.finite_n);
  const auto& cov = result.covariance;
  const double tol = 0.02;
  rep.checks.push_back(bound("lag1_covariance", std::abs(cov.lag1 + cfg.a), tol, 0));
  rep.checks.push_back(bound("lag2_covariance", std::abs(cov.lag2), tol, 0));
  if (cov.cross) rep.checks.push_back(bound("cross_lag_covariance", std::abs(*cov.cross), tol, 0));
  rep.details["target"] = result.transfer.target->describe();
  rep.details["sigma2"] = result.sigma2;
  ojson c;
  c["variance"] = cov.variance;
  c["lag1"] = cov.lag1;
  c["lag2"] = cov.lag2;
  if (cov.cross) c["cross"] = *cov.cross;
  c["expected_lag1"] = -cfg.a;
  c["expected_variance"] = 1.0 + cfg.a * cfg.a;
  rep.details["covariance"] = c;
  if (result.finite_n) rep.details["finite_n_variance"] = result.finite_n->variance();
  rep.details["sample"] = sample_summary(result.transfer.empirical);
}

void run_semistable_exp(RunReport& rep, unsigned workers) {
  const auto& p = rep.config.params;
  SemistableConfig cfg;
  cfg.c = p["c"].get<double>();
  const auto horizon = parse_horizon(p["horizon"].get<std::string>());
  cfg.horizon = horizon.n;
  cfg.horizon_exponent = horizon.exponent;
  cfg.fixed_exponent = static_cast<unsigned>(p["m"].get<std::uint64_t>());
  cfg.index_law = p["index"].get<std::string>() == "fixed"
                      ? SemistableConfig::IndexLaw::fixed
                      : SemistableConfig::IndexLaw::logarithmic;
  const auto result = run_semistable_demo(cfg, plan_for(rep.config, workers));
  std::vector<EcdfRow> rows;
  const auto g = ks_two_sample(result.random_index, result.mixture_of_subsequences,
                               rep.config.alpha, &rows);
  rep.checks.push_back(from_gof("ks_random_vs_mixture", "ks-two-sample", g,
                                "ks_random_vs_mixture.csv"));
  rep.csv.push_back({"ks_random_vs_mixture.csv", ecdf_csv(rows)});
  if (cfg.index_law == SemistableConfig::IndexLaw::logarithmic) {
    if (cfg.horizon > 0) {
      const PsiPushforwardLaw psi_law(cfg.horizon, SamplingSequence::power_of_two());
      add_ks(rep, "ks_psi_marginal", result.psi_marginal, psi_law);
    } else {
      add_ks(rep, "ks_psi_marginal", result.psi_marginal, DyadicPsiLaw(cfg.horizon_exponent));
    }
  }
  rep.details["wasserstein1"] =
      wasserstein1(result.random_index, result.mixture_of_subsequences);
  rep.details["random_index"] = sample_summary(result.random_index);
  rep.details["mixture_of_subsequences"] = sample_summary(result.mixture_of_subsequences);
}

void run_allocations_exp(RunReport& rep, unsigned workers) {
  const auto& p = rep.config.params;
  const auto r = static_cast<unsigned>(p["r"].get<std::uint64_t>());
  const auto N = p["N"].get<std::uint64_t>();
  const double lambda = p["lambda"].get<double>();
  const auto path = p["path"].get<std::string>();
  AllocationConfig cfg;
  cfg.r = r;
  if (path == "mixed") {
    const auto poisson = r == 1 ? AllocationPath::dense : AllocationPath::sparse;
    cfg.index_law.push_back({canonical_path(r, AllocationPath::central, N, lambda), 0.5});
    cfg.index_law.push_back({canonical_path(r, poisson, N, lambda), 0.5});
  } else {
    cfg.index_law.push_back({canonical_path(r, parse_allocation_path(path), N, lambda), 1.0});
  }
  const auto result = run_allocations(cfg, plan_for(rep.config, workers));

  std::vector<EcdfRow> rows;
  const auto g = ks_one_sample_lattice(result.values, result.half_widths, *result.target,
                                       rep.config.alpha, &rows);
  rep.checks.push_back(from_gof("ks_regime", "ks-lattice", g, "ks_regime.csv"));
  rep.csv.push_back({"ks_regime.csv", ecdf_csv(rows)});
  const double R = static_cast<double>(result.values.size());
  rep.checks.push_back(bound("standardized_mean", std::abs(result.empirical.mean()),
                             4.0 / std::sqrt(R), result.values.size()));
  rep.checks.push_back(bound("standardized_variance",
                             std::abs(result.empirical.variance() - 1.0), 0.05,
                             result.values.size()));

  auto idx = ojson::array();
  for (std::size_t i = 0; i < cfg.index_law.size(); ++i) {
    const auto& c = cfg.index_law[i];
    const auto phi = phi_alloc(r, c.index.balls, c.index.boxes);
    ojson j;
    j["path"] = to_string(c.index.path);
    j["weight"] = c.weight;
    j["n"] = c.index.balls;
    j["N"] = c.index.boxes;
    j["phi"] = {phi.g, phi.d};
    j["limit"] = {c.index.limit.g, c.index.limit.d};
    j["limit_law"] = to_string(classify_regime(r, c.index.limit));
    j["exact_mean"] = result.means[i];
    j["exact_variance"] = result.variances[i];
    idx.push_back(std::move(j));
  }
  rep.details["index_law"] = idx;
  rep.details["target"] = result.target->describe();
  rep.details["sample"] = sample_summary(result.empirical);
}

void run_psi_law_exp(RunReport& rep) {
  const auto& p = rep.config.params;
  const auto n = p["n"].get<std::uint64_t>();
  const double c = p["c"].get<double>();
  const auto k_seq = c == 2.0 ? SamplingSequence::power_of_two() : SamplingSequence::geometric(c);

  std::vector<std::uint64_t> horizons;
  for (std::uint64_t h = 100; h < n; h *= 10) horizons.push_back(h);
  horizons.push_back(n);
  auto decades = ojson::array();
  std::vector<double> sup;
  for (auto h : horizons) {
    const auto dist = psi_sup_distance(h, k_seq);
    sup.push_back(dist.sup);
    ojson j;
    j["n"] = h;
    j["sup_distance"] = dist.sup;
    j["at"] = dist.at;
    j["atoms"] = dist.atoms;
    decades.push_back(std::move(j));
  }
  rep.checks.push_back(bound("sup_distance", sup.back(), p["tolerance"].get<double>(), n));
  double worst = 0.0;
  for (std::size_t i = 1; i < sup.size(); ++i) {
    if (sup[i - 1] > 0.0) worst = std::max(worst, sup[i] / sup[i - 1]);
  }
  auto mono = bound("decade_monotone", worst, p["slack"].get<double>(), horizons.size());
  rep.checks.push_back(mono);

  std::vector<EcdfRow> rows;
  constexpr int kGrid = 1000;
  for (int i = 0; i <= kGrid; ++i) {
    const double t = 1.0 + (c - 1.0) * i / kGrid;
    const double fe = psi_pushforward_cdf(n, k_seq, t);
    const double ft = log_law_cdf(c, t);
    rows.push_back({t, fe, ft, std::abs(fe - ft)});
  }
  rep.csv.push_back({"psi_cdf.csv", ecdf_csv(rows)});
  rep.details["sequence"] = k_seq.name();
  rep.details["decades"] = decades;
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& flat) {
  if (!flat.is_object()) throw ConfigError("config must be a flat JSON object");
  for (const auto& [k, v] : flat.items()) {
    if (v.is_object() || v.is_array()) {
      throw ConfigError("config key '" + k + "' must be a scalar (config is flat)");
    }
  }
  RunConfig cfg;
  if (!flat.contains("experiment")) throw ConfigError("config lacks 'experiment'");
  cfg.experiment = as_text(flat["experiment"], "experiment");
  const auto& keys = keys_for(cfg.experiment);

  for (const auto& [k, v] : flat.items()) {
    const bool common = k == "experiment" || k == "seed" || k == "replicates" ||
                        k == "alpha" || k == "out";
    const bool known = common || std::any_of(keys.begin(), keys.end(),
                                             [&](const Key& key) { return k == key.name; });
    if (!known) {
      throw ConfigError("unknown config key '" + k + "' for experiment " + cfg.experiment);
    }
  }
  if (flat.contains("seed")) cfg.seed = parse_uint(as_text(flat["seed"], "seed"), "seed");
  if (flat.contains("replicates")) {
    cfg.replicates = parse_uint(as_text(flat["replicates"], "replicates"), "replicates");
  }
  if (flat.contains("alpha")) cfg.alpha = parse_real(as_text(flat["alpha"], "alpha"), "alpha");
  if (flat.contains("out")) cfg.out = as_text(flat["out"], "out");
  require(cfg.replicates >= 1 && cfg.replicates <= 100000000,
          "replicates must be in [1, 1e8]");
  require(cfg.alpha > 0.0 && cfg.alpha < 1.0, "alpha must lie in (0, 1)");

  for (const auto& key : keys) {
    std::string text = flat.contains(key.name) ? as_text(flat[key.name], key.name)
                                               : std::string(key.fallback);
    if (text.empty() && cfg.experiment == "na-field" && std::string(key.name) == "n") {
      const auto d = cfg.params["d"].get<std::uint64_t>();
      text = d == 1 ? "10000" : d == 2 ? "200" : "40";
    }
    cfg.params[key.name] = typed(key.type, text, key.name);
  }
  if (cfg.experiment == "na-field") {
    // A single n is used for every coordinate.
    const auto d = cfg.params["d"].get<std::uint64_t>();
    auto n = parse_uint_list(cfg.params["n"].get<std::string>(), "n");
    if (n.size() == 1 && d > 1) {
      std::string joined;
      for (std::uint64_t i = 0; i < d; ++i) joined += (i ? "," : "") + std::to_string(n[0]);
      cfg.params["n"] = joined;
    }
  }
  try {
    validate_params(cfg);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ojson config_echo(const RunConfig& cfg) {
  ojson j;
  j["experiment"] = cfg.experiment;
  j["seed"] = cfg.seed;
  j["replicates"] = cfg.replicates;
  j["alpha"] = cfg.alpha;
  j["out"] = cfg.out;
  for (const auto& [k, v] : cfg.params.items()) j[k] = v;
  return j;
}

bool RunReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

RunReport run_experiment(const RunConfig& cfg, unsigned workers) {
  RunReport rep;
  rep.config = cfg;
  const auto start = std::chrono::steady_clock::now();
  if (cfg.experiment == "random-sum") {
    run_random_sum_exp(rep, workers);
  } else if (cfg.experiment == "na-field") {
    run_na_field_exp(rep, workers);
  } else if (cfg.experiment == "semistable") {
    run_semistable_exp(rep, workers);
  } else if (cfg.experiment == "allocations") {
    run_allocations_exp(rep, workers);
  } else if (cfg.experiment == "psi-law") {
    run_psi_law_exp(rep);
  } else {
    keys_for(cfg.experiment);  // throws
  }
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace transferlab
