//
// Copyright 2026 The Anonhist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

/* Anonymized histogram release: C interface.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an anonhist_status;
 * on failure anonhist_last_error() describes the problem (per thread, valid
 * until the next failing call on that thread). */

#ifndef ANONHIST_ANONHIST_H_
#define ANONHIST_ANONHIST_H_

#include <stddef.h>
#include <stdint.h>

#if defined(ANONHIST_BUILDING_LIBRARY)
#define ANONHIST_API __attribute__((visibility("default")))
#else
#define ANONHIST_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum anonhist_status {
  ANONHIST_OK = 0,
  ANONHIST_INVALID_ARGUMENT = 1,
  /* Constraints could not be met; only fallback output was produced. */
  ANONHIST_INFEASIBLE = 2,
  ANONHIST_IO = 3,
  ANONHIST_OUT_OF_RANGE = 4,
  ANONHIST_INTERNAL = 5
} anonhist_status;

typedef enum anonhist_privacy_mode {
  ANONHIST_CENTRAL = 0,            /* p = exp(-eps/2) */
  ANONHIST_TWO_HIST = 1,           /* p = exp(-eps/4) */
  ANONHIST_PAN_PRIVATE_STRICT = 2  /* p = exp(-eps/4), two noise layers */
} anonhist_privacy_mode;

typedef enum anonhist_estimator {
  ANONHIST_SMALL_L1 = 0,
  ANONHIST_SMALL_L2SQ = 1,
  ANONHIST_LARGE_L1_REFERENCE = 2,
  ANONHIST_LARGE_L1_FAST = 3,
  ANONHIST_LARGE_L2SQ = 4
} anonhist_estimator;

typedef enum anonhist_property {
  ANONHIST_ENTROPY = 0,
  ANONHIST_SUPPORT_COVERAGE = 1,
  ANONHIST_SUPPORT_SIZE = 2
} anonhist_property;

typedef struct anonhist_histogram anonhist_histogram;
typedef struct anonhist_anon anonhist_anon;
typedef struct anonhist_noised anonhist_noised;

ANONHIST_API const char* anonhist_last_error(void);
ANONHIST_API const char* anonhist_status_name(anonhist_status status);
ANONHIST_API const char* anonhist_version(void);
/* Frees strings returned by this library. */
ANONHIST_API void anonhist_string_free(char* s);

/* ---- Labeled histograms over [0, domain_size). ---- */

ANONHIST_API anonhist_status anonhist_histogram_create(
    uint64_t domain_size, anonhist_histogram** out);
ANONHIST_API anonhist_status anonhist_histogram_add(anonhist_histogram* h,
                                                    uint64_t item,
                                                    int64_t count);
/* domain_size 0 infers D = max id + 1. */
ANONHIST_API anonhist_status anonhist_histogram_read(
    const char* path, uint64_t domain_size, anonhist_histogram** out);
ANONHIST_API anonhist_status anonhist_histogram_write(
    const anonhist_histogram* h, const char* path);
ANONHIST_API uint64_t anonhist_histogram_domain_size(
    const anonhist_histogram* h);
ANONHIST_API int64_t anonhist_histogram_total(const anonhist_histogram* h);
ANONHIST_API void anonhist_histogram_free(anonhist_histogram* h);

/* generator: "uniform:k=50", "zipf:k=100:s=1", "geometric:k=100:q=0.5",
 * "two-spike:B=10000[:variant=1]"; k = 0 means k = D. */
ANONHIST_API anonhist_status anonhist_generate(const char* generator,
                                               int64_t n, uint64_t D,
                                               uint64_t seed,
                                               anonhist_histogram** out);
/* Samples n items and pairs sample i with batch i / m (see
 * anonhist_batch_augment). */
ANONHIST_API anonhist_status anonhist_generate_batched(
    const char* generator, int64_t n, uint64_t D, uint64_t m, uint64_t seed,
    anonhist_histogram** out);
ANONHIST_API anonhist_status anonhist_batch_augment(
    const uint64_t* items, size_t len, uint64_t domain_size, uint64_t m,
    anonhist_histogram** out);

/* ---- Anonymized histograms: nonincreasing positive counts. ---- */

ANONHIST_API anonhist_status anonhist_anonymize(const anonhist_histogram* h,
                                                anonhist_anon** out);
/* counts must already be nonincreasing and positive. */
ANONHIST_API anonhist_status anonhist_anon_create(const int64_t* counts,
                                                  size_t len,
                                                  anonhist_anon** out);
ANONHIST_API anonhist_status anonhist_anon_read(const char* path,
                                                anonhist_anon** out);
ANONHIST_API anonhist_status anonhist_anon_write(const anonhist_anon* a,
                                                 const char* path);
ANONHIST_API size_t anonhist_anon_size(const anonhist_anon* a);
ANONHIST_API int64_t anonhist_anon_total(const anonhist_anon* a);
/* Copies up to capacity counts; returns the full length. */
ANONHIST_API size_t anonhist_anon_counts(const anonhist_anon* a, int64_t* buf,
                                         size_t capacity);
ANONHIST_API void anonhist_anon_free(anonhist_anon* a);

/* out[r - 1] = number of entries >= r, r = 1..r_max. Fails if r_max is
 * below the largest count. */
ANONHIST_API anonhist_status anonhist_cumulative_prevalence(
    const anonhist_anon* a, size_t r_max, int64_t* out);

typedef struct anonhist_distances {
  int64_t l1;
  int64_t l2sq;
  int64_t linf;
} anonhist_distances;

ANONHIST_API anonhist_status anonhist_distances_compute(
    const anonhist_anon* a, const anonhist_anon* b, anonhist_distances* out);

/* ---- Noise. ---- */

ANONHIST_API anonhist_status anonhist_noise_parameter(
    double epsilon, anonhist_privacy_mode mode, double* p);
/* Discrete Laplace noise on every slot. Pan-private-strict mode streams the
 * histogram's items through the two-layer pan-private state. */
ANONHIST_API anonhist_status anonhist_noise(const anonhist_histogram* h,
                                            double epsilon,
                                            anonhist_privacy_mode mode,
                                            uint64_t seed,
                                            anonhist_noised** out);
/* Hashes items into `buckets` buckets first. Large bucket counts produce a
 * summarized noised histogram (value multiset only). */
ANONHIST_API anonhist_status anonhist_noise_reduced(
    const anonhist_histogram* h, uint64_t buckets, uint64_t hash_seed,
    double epsilon, anonhist_privacy_mode mode, uint64_t seed,
    anonhist_noised** out);
ANONHIST_API anonhist_status anonhist_noised_read(const char* path,
                                                  anonhist_noised** out);
ANONHIST_API anonhist_status anonhist_noised_write(const anonhist_noised* nh,
                                                   const char* path);
ANONHIST_API uint64_t anonhist_noised_domain_size(const anonhist_noised* nh);
ANONHIST_API double anonhist_noised_p(const anonhist_noised* nh);
ANONHIST_API int anonhist_noised_layers(const anonhist_noised* nh);
ANONHIST_API int64_t anonhist_noised_total(const anonhist_noised* nh);
ANONHIST_API void anonhist_noised_free(anonhist_noised* nh);

/* ---- Estimation. ---- */

typedef struct anonhist_estimate_config {
  anonhist_estimator mode;
  int64_t n;     /* public total; negative: estimate it, no sum constraint */
  int64_t gamma; /* 0: default radius */
  uint64_t head; /* 0: default head length */
} anonhist_estimate_config;

typedef struct anonhist_estimate_info {
  int fallback;    /* infeasible projection; output is empty */
  int n_estimated; /* n was derived from the noisy total */
  int64_t n;
  int64_t gamma;
  uint64_t head;
} anonhist_estimate_info;

ANONHIST_API void anonhist_estimate_config_init(anonhist_estimate_config* cfg);
ANONHIST_API uint64_t anonhist_default_buckets(anonhist_estimator mode,
                                               int64_t n, uint64_t D,
                                               double epsilon, int second);

/* `secondary` is the reduced histogram for LARGE_L1_FAST and the B2-bucket
 * histogram for LARGE_L2SQ; NULL otherwise. `info` may be NULL. */
ANONHIST_API anonhist_status anonhist_estimate(
    const anonhist_noised* primary, const anonhist_noised* secondary,
    const anonhist_estimate_config* cfg, anonhist_anon** out,
    anonhist_estimate_info* info);

/* ---- Properties. ---- */

ANONHIST_API anonhist_status anonhist_entropy(const anonhist_anon* a,
                                              double* nats);
ANONHIST_API anonhist_status anonhist_support_coverage(const anonhist_anon* a,
                                                       int64_t n, uint64_t m,
                                                       double* out);
ANONHIST_API anonhist_status anonhist_support_size(const anonhist_anon* a,
                                                   int64_t n, double K,
                                                   double alpha, double* out);

typedef struct anonhist_property_request {
  anonhist_property property;
  double alpha;
  uint64_t m;
  double K;
  int repeats;
  double epsilon;
  anonhist_privacy_mode mode;
} anonhist_property_request;

ANONHIST_API void anonhist_property_request_init(anonhist_property_request* r);
/* Median over req->repeats private runs. per_repeat, if not NULL, receives
 * req->repeats values. */
ANONHIST_API anonhist_status anonhist_private_property(
    const anonhist_histogram* h, const anonhist_property_request* req,
    uint64_t seed, double* value, double* per_repeat);
ANONHIST_API anonhist_status anonhist_sample_complexity(
    anonhist_property property, double alpha, double epsilon,
    double size_param, double* out);

/* ---- Experiments. ---- */

/* Runs a JSON plan. out_path overrides the plan's output file when not NULL.
 * threads 0: ANONHIST_THREADS or hardware concurrency. Returns
 * ANONHIST_INFEASIBLE when every row fell back. */
ANONHIST_API anonhist_status anonhist_run_plan(const char* plan_json,
                                               const char* out_path,
                                               int threads, size_t* rows);
/* Summaries of a results CSV; either output may be NULL. Free the strings
 * with anonhist_string_free. */
ANONHIST_API anonhist_status anonhist_summarize(const char* csv_path,
                                                char** text, char** csv);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* ANONHIST_ANONHIST_H_ */
