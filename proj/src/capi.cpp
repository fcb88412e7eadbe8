// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include "transferlab/transferlab.h"

#include <memory>
#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "distributions.hpp"
#include "errors.hpp"
#include "experiments/allocations.hpp"
#include "experiments/semistable.hpp"
#include "families.hpp"
#include "index_control.hpp"
#include "mc_engine.hpp"
#include "report.hpp"
#include "runner.hpp"
#include "stats.hpp"

namespace tl = transferlab;

struct tl_mixture {
  std::shared_ptr<const tl::MixtureLaw> law;
};

struct tl_run {
  tl::RunReport report;
  std::string json;
};

namespace {

thread_local std::string g_last_error;

tl_status status_of(tl::ErrorCode code) {
  switch (code) {
    case tl::ErrorCode::invalid_argument: return TL_INVALID_ARGUMENT;
    case tl::ErrorCode::domain: return TL_DOMAIN_ERROR;
    case tl::ErrorCode::config: return TL_CONFIG_ERROR;
    case tl::ErrorCode::io: return TL_IO_ERROR;
    case tl::ErrorCode::numeric: return TL_NUMERIC_ERROR;
    case tl::ErrorCode::replicate: return TL_REPLICATE_ERROR;
  }
  return TL_INTERNAL_ERROR;
}

template <class F>
tl_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return TL_OK;
  } catch (const tl::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("malformed JSON: ") + e.what();
    return TL_CONFIG_ERROR;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TL_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TL_INTERNAL_ERROR;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) {
    throw tl::Error(tl::ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
  }
}

tl::SamplingSequence sequence(const char* kseq) {
  need(kseq, "kseq");
  return tl::SamplingSequence::parse(kseq);
}

tl::LimitFamilyPtr parse_family(const std::string& spec, std::size_t mixing_dim) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "gaussian") {
    double sigma2 = 1.0;
    std::size_t d = mixing_dim;
    if (!body.empty()) {
      const auto comma = body.find(',');
      sigma2 = std::stod(body.substr(0, comma));
      if (comma != std::string::npos) d = std::stoul(body.substr(comma + 1));
    }
    return std::make_shared<tl::GaussianScaleFamily>(d, sigma2);
  }
  if (kind == "poisson-std") return std::make_shared<tl::StdPoissonFamily>();
  if (kind == "normal") {
    return std::make_shared<tl::ConstantFamily>(mixing_dim,
                                                std::make_shared<tl::Normal>(0.0, 1.0));
  }
  if (kind == "alloc") {
    return std::make_shared<tl::AllocationRegimeFamily>(
        static_cast<unsigned>(std::stoul(body.empty() ? "0" : body)));
  }
  throw tl::ConfigError("unknown family '" + spec + "'");
}

tl_gof to_gof(const tl::GofReport& g) {
  return tl_gof{g.value, g.critical, g.alpha, g.n, g.m, g.pass ? 1 : 0};
}

}  // namespace

extern "C" {

const char* tl_version(void) { return "0.1.0"; }

const char* tl_status_string(tl_status status) {
  switch (status) {
    case TL_OK: return "ok";
    case TL_INVALID_ARGUMENT: return "invalid argument";
    case TL_DOMAIN_ERROR: return "domain error";
    case TL_CONFIG_ERROR: return "configuration error";
    case TL_IO_ERROR: return "i/o error";
    case TL_NUMERIC_ERROR: return "numeric error";
    case TL_REPLICATE_ERROR: return "replicate failed";
    case TL_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

const char* tl_last_error(void) { return g_last_error.c_str(); }

tl_status tl_phi_triangular(uint64_t n, const uint64_t* N, size_t d, const char* kseq,
                            double* out) {
  return guarded([&] {
    need(N, "N");
    need(out, "out");
    if (n == 0 || d == 0) throw tl::DomainError("phi_triangular: need n >= 1 and d >= 1");
    const tl::MultiIndex idx(std::vector<std::uint64_t>(N, N + d));
    const std::vector<tl::SamplingSequence> seq(d, sequence(kseq));
    const auto v = tl::phi_triangular(n, idx, seq);
    std::copy(v.begin(), v.end(), out);
  });
}

tl_status tl_phi_alloc(unsigned r, uint64_t T, uint64_t U, double* g, double* d,
                       int* saturated) {
  return guarded([&] {
    need(g, "g");
    need(d, "d");
    const auto p = tl::phi_alloc(r, T, U);
    *g = p.g;
    *d = p.d;
    if (saturated != nullptr) *saturated = p.saturated ? 1 : 0;
  });
}

tl_status tl_classify_regime(unsigned r, double g, double d, tl_limit_kind* kind,
                             double* lambda) {
  return guarded([&] {
    need(kind, "kind");
    const auto tag = tl::classify_regime(r, tl::RegimePoint{g, d, false});
    switch (tag.kind) {
      case tl::LimitTag::Kind::normal: *kind = TL_LIMIT_NORMAL; break;
      case tl::LimitTag::Kind::poisson_std: *kind = TL_LIMIT_POISSON_STD; break;
      case tl::LimitTag::Kind::undefined: *kind = TL_LIMIT_UNDEFINED; break;
    }
    if (lambda != nullptr) *lambda = tag.lambda;
  });
}

tl_status tl_std_poisson_cdf(double lambda, double x, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = tl::std_poisson_cdf(lambda, x);
  });
}

tl_status tl_log_law_cdf(double c, double t, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = tl::log_law_cdf(c, t);
  });
}

tl_status tl_mantissa_psi(uint64_t n, const char* kseq, double* t, uint64_t* block) {
  return guarded([&] {
    need(t, "t");
    if (n == 0) throw tl::DomainError("mantissa: n must be >= 1");
    const auto m = tl::mantissa_psi(n, sequence(kseq));
    *t = m.t;
    if (block != nullptr) *block = m.block;
  });
}

tl_status tl_psi_pushforward_cdf(uint64_t n, const char* kseq, double t, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = tl::psi_pushforward_cdf(n, sequence(kseq), t);
  });
}

tl_status tl_alloc_exact_moments(unsigned r, uint64_t n, uint64_t N, double* mean,
                                 double* variance) {
  return guarded([&] {
    need(mean, "mean");
    need(variance, "variance");
    *mean = tl::alloc_exact_mean(r, n, N);
    *variance = tl::alloc_exact_var(r, n, N);
  });
}

tl_status tl_mixture_create(const char* family, const char* mixing, tl_mixture** out) {
  return guarded([&] {
    need(family, "family");
    need(mixing, "mixing");
    need(out, "out");
    *out = nullptr;
    const std::string fam(family);
    // The mixing dimension follows the family for fixed-dimension families.
    std::size_t dim = 1;
    if (fam.rfind("alloc", 0) == 0) dim = 2;
    if (fam.rfind("gaussian:", 0) == 0 && fam.find(',') != std::string::npos) {
      dim = std::stoul(fam.substr(fam.find(',') + 1));
    }
    auto law = std::make_shared<const tl::MixtureLaw>(parse_family(fam, dim),
                                                      tl::MixingLaw::parse(mixing, dim));
    *out = new tl_mixture{std::move(law)};
  });
}

void tl_mixture_destroy(tl_mixture* m) { delete m; }

tl_status tl_mixture_cdf(const tl_mixture* m, double x, double* out) {
  return guarded([&] {
    need(m, "mixture");
    need(out, "out");
    *out = tl::mixture_cdf(*m->law, x);
  });
}

tl_status tl_mixture_sample(const tl_mixture* m, uint64_t seed, size_t count, double* out) {
  return guarded([&] {
    need(m, "mixture");
    need(out, "out");
    if (count == 0) return;
    tl::ReplicationPlan plan;
    plan.replicates = count;
    plan.seed = tl::SeedSpec{seed, 0};
    const auto v = tl::replicate<double>(
        plan, [&](tl::Rng& rng) { return tl::mixture_sample(*m->law, rng); });
    std::copy(v.begin(), v.end(), out);
  });
}

tl_status tl_ks_one_sample(const double* values, size_t n, const tl_mixture* target,
                           double alpha, tl_gof* out) {
  return guarded([&] {
    need(values, "values");
    need(target, "target");
    need(out, "out");
    if (n == 0) throw tl::Error(tl::ErrorCode::invalid_argument, "empty sample");
    const tl::EmpiricalDistribution emp(std::vector<double>(values, values + n));
    *out = to_gof(tl::ks_one_sample(emp, *target->law, alpha));
  });
}

tl_status tl_ks_two_sample(const double* a, size_t n, const double* b, size_t m, double alpha,
                           tl_gof* out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    if (n == 0 || m == 0) throw tl::Error(tl::ErrorCode::invalid_argument, "empty sample");
    const tl::EmpiricalDistribution ea(std::vector<double>(a, a + n));
    const tl::EmpiricalDistribution eb(std::vector<double>(b, b + m));
    *out = to_gof(tl::ks_two_sample(ea, eb, alpha));
  });
}

tl_status tl_wasserstein1(const double* a, size_t n, const double* b, size_t m, double* out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    if (n == 0 || m == 0) throw tl::Error(tl::ErrorCode::invalid_argument, "empty sample");
    *out = tl::wasserstein1(tl::EmpiricalDistribution(std::vector<double>(a, a + n)),
                            tl::EmpiricalDistribution(std::vector<double>(b, b + m)));
  });
}

tl_status tl_run_experiment(const char* config_json, unsigned workers, tl_run** out) {
  return guarded([&] {
    need(config_json, "config_json");
    need(out, "out");
    *out = nullptr;
    const auto cfg = tl::parse_run_config(nlohmann::json::parse(config_json));
    if (!cfg.out.empty()) tl::ensure_output_dir(cfg.out);
    auto run = std::make_unique<tl_run>();
    run->report = tl::run_experiment(cfg, workers);
    run->json = tl::report_json(run->report);
    if (!cfg.out.empty()) tl::write_report(run->report, cfg.out);
    *out = run.release();
  });
}

int tl_run_all_passed(const tl_run* run) {
  return run != nullptr && run->report.all_passed() ? 1 : 0;
}

const char* tl_run_report_json(const tl_run* run) {
  return run == nullptr ? "" : run->json.c_str();
}

void tl_run_destroy(tl_run* run) { delete run; }

}  // extern "C"
