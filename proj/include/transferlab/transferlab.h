/* Copyright 2026 The transferlab Authors.
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the transferlab Monte Carlo library. Every function returns
 * a tl_status; on failure tl_last_error() describes the problem for the
 * calling thread. Handles are opaque and owned by the caller.
 */
#ifndef TRANSFERLAB_TRANSFERLAB_H_
#define TRANSFERLAB_TRANSFERLAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(TRANSFERLAB_BUILDING_LIBRARY)
#define TL_API __attribute__((visibility("default")))
#else
#define TL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tl_status {
  TL_OK = 0,
  TL_INVALID_ARGUMENT = 1,
  TL_DOMAIN_ERROR = 2,
  TL_CONFIG_ERROR = 3,
  TL_IO_ERROR = 4,
  TL_NUMERIC_ERROR = 5,
  TL_REPLICATE_ERROR = 6,
  TL_INTERNAL_ERROR = 7
} tl_status;

typedef enum tl_limit_kind {
  TL_LIMIT_NORMAL = 0,
  TL_LIMIT_POISSON_STD = 1,
  TL_LIMIT_UNDEFINED = 2
} tl_limit_kind;

typedef struct tl_gof {
  double statistic;
  double critical;
  double alpha;
  uint64_t n;
  uint64_t m;
  int pass;
} tl_gof;

typedef struct tl_mixture tl_mixture;
typedef struct tl_run tl_run;

TL_API const char* tl_version(void);
TL_API const char* tl_status_string(tl_status status);
/* Message of the last failure on this thread; "" if none. */
TL_API const char* tl_last_error(void);

/* Control maps. `kseq` is "identity", "square", "pow2" or "geom:<c>". */
TL_API tl_status tl_phi_triangular(uint64_t n, const uint64_t* N, size_t d, const char* kseq,
                                   double* out /* d + 1 */);
/* *saturated is set to 1 when e^{T/U} overflowed to +inf. */
TL_API tl_status tl_phi_alloc(unsigned r, uint64_t T, uint64_t U, double* g, double* d,
                              int* saturated);
TL_API tl_status tl_classify_regime(unsigned r, double g, double d, tl_limit_kind* kind,
                                    double* lambda);

TL_API tl_status tl_std_poisson_cdf(double lambda, double x, double* out);
TL_API tl_status tl_log_law_cdf(double c, double t, double* out);

/* Mantissa psi(n) = n / k_p with k_p <= n < k_{p+1}. */
TL_API tl_status tl_mantissa_psi(uint64_t n, const char* kseq, double* t, uint64_t* block);
TL_API tl_status tl_psi_pushforward_cdf(uint64_t n, const char* kseq, double t, double* out);
TL_API tl_status tl_alloc_exact_moments(unsigned r, uint64_t n, uint64_t N, double* mean,
                                        double* variance);

/* Mixture laws. family: "gaussian:<sigma2>[,<d>]", "poisson-std", "normal" (constant
 * N(0,1)) or "alloc:<r>". mixing: "point:..", "uniform:a,b", "log:c",
 * "discrete:t@w;t@w". */
TL_API tl_status tl_mixture_create(const char* family, const char* mixing, tl_mixture** out);
TL_API void tl_mixture_destroy(tl_mixture* m);
TL_API tl_status tl_mixture_cdf(const tl_mixture* m, double x, double* out);
/* Draws `count` values using replicate streams (seed, 0..count-1). */
TL_API tl_status tl_mixture_sample(const tl_mixture* m, uint64_t seed, size_t count,
                                   double* out);

/* Goodness of fit. */
TL_API tl_status tl_ks_one_sample(const double* values, size_t n, const tl_mixture* target,
                                  double alpha, tl_gof* out);
TL_API tl_status tl_ks_two_sample(const double* a, size_t n, const double* b, size_t m,
                                  double alpha, tl_gof* out);
TL_API tl_status tl_wasserstein1(const double* a, size_t n, const double* b, size_t m,
                                 double* out);

/* Experiments. config_json is a flat JSON object (see README). When it has an
 * "out" key, report.json and the CSV files are written there. workers = 0
 * uses TRANSFERLAB_WORKERS or the hardware concurrency. */
TL_API tl_status tl_run_experiment(const char* config_json, unsigned workers, tl_run** out);
TL_API int tl_run_all_passed(const tl_run* run);
/* report.json text; owned by the run handle. */
TL_API const char* tl_run_report_json(const tl_run* run);
TL_API void tl_run_destroy(tl_run* run);

#ifdef __cplusplus
}
#endif

#endif /* TRANSFERLAB_TRANSFERLAB_H_ */
