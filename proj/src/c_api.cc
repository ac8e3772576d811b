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

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "anonhist/anonhist.h"
#include "src/core.h"
#include "src/estimators.h"
#include "src/harness.h"
#include "src/hashing.h"
#include "src/io.h"
#include "src/noise.h"
#include "src/properties.h"

struct anonhist_histogram {
  uint64_t domain_size = 0;
  std::map<anonhist::ItemId, anonhist::Count> counts;
};

struct anonhist_anon {
  anonhist::AnonymizedHistogram value;
};

struct anonhist_noised {
  anonhist::NoisedHistogram value;
};

namespace {

using anonhist::AnonymizedHistogram;
using anonhist::Histogram;
using anonhist::NoisedHistogram;

thread_local std::string last_error;

anonhist_status Fail(anonhist_status code, std::string message) {
  last_error = std::move(message);
  return code;
}

anonhist_status FromStatus(const absl::Status& s) {
  if (s.ok()) return ANONHIST_OK;
  anonhist_status code = ANONHIST_INTERNAL;
  switch (s.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kFailedPrecondition:
      code = ANONHIST_INVALID_ARGUMENT;
      break;
    case absl::StatusCode::kOutOfRange:
      code = ANONHIST_OUT_OF_RANGE;
      break;
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kPermissionDenied:
    case absl::StatusCode::kDataLoss:
      code = ANONHIST_IO;
      break;
    default:
      break;
  }
  return Fail(code, std::string(s.message()));
}

anonhist_status NullArg(const char* what) {
  return Fail(ANONHIST_INVALID_ARGUMENT, std::string(what) + " is NULL");
}

absl::StatusOr<Histogram> ToHistogram(const anonhist_histogram* h) {
  return Histogram::Create(h->domain_size, h->counts);
}

anonhist_histogram* FromHistogram(const Histogram& h) {
  auto* out = new anonhist_histogram;
  out->domain_size = h.domain_size();
  out->counts = h.counts();
  return out;
}

absl::StatusOr<anonhist::PrivacyMode> ToMode(anonhist_privacy_mode mode) {
  switch (mode) {
    case ANONHIST_CENTRAL:
      return anonhist::PrivacyMode::kCentralOneHist;
    case ANONHIST_TWO_HIST:
      return anonhist::PrivacyMode::kTwoHist;
    case ANONHIST_PAN_PRIVATE_STRICT:
      return anonhist::PrivacyMode::kPanPrivateStrict;
  }
  return absl::InvalidArgumentError("unknown privacy mode");
}

absl::StatusOr<anonhist::EstimatorMode> ToEstimator(anonhist_estimator mode) {
  switch (mode) {
    case ANONHIST_SMALL_L1:
      return anonhist::EstimatorMode::kSmallL1;
    case ANONHIST_SMALL_L2SQ:
      return anonhist::EstimatorMode::kSmallL2sq;
    case ANONHIST_LARGE_L1_REFERENCE:
      return anonhist::EstimatorMode::kLargeL1Reference;
    case ANONHIST_LARGE_L1_FAST:
      return anonhist::EstimatorMode::kLargeL1Fast;
    case ANONHIST_LARGE_L2SQ:
      return anonhist::EstimatorMode::kLargeL2sq;
  }
  return absl::InvalidArgumentError("unknown estimator");
}

absl::StatusOr<anonhist::PropertyKind> ToProperty(anonhist_property p) {
  switch (p) {
    case ANONHIST_ENTROPY:
      return anonhist::PropertyKind::kEntropy;
    case ANONHIST_SUPPORT_COVERAGE:
      return anonhist::PropertyKind::kSupportCoverage;
    case ANONHIST_SUPPORT_SIZE:
      return anonhist::PropertyKind::kSupportSize;
  }
  return absl::InvalidArgumentError("unknown property");
}

std::vector<anonhist::ItemId> Expand(const Histogram& h) {
  std::vector<anonhist::ItemId> stream;
  stream.reserve(static_cast<size_t>(h.total()));
  for (const auto& [item, count] : h.counts()) {
    stream.insert(stream.end(), static_cast<size_t>(count), item);
  }
  return stream;
}

absl::StatusOr<NoisedHistogram> NoiseWith(const Histogram& h, double epsilon,
                                          anonhist_privacy_mode mode,
                                          uint64_t seed) {
  auto m = ToMode(mode);
  if (!m.ok()) return m.status();
  auto params = anonhist::PrivacyParams::Create(epsilon, *m);
  if (!params.ok()) return params.status();
  if (*m == anonhist::PrivacyMode::kPanPrivateStrict) {
    return anonhist::PanPrivateRun(Expand(h), h.domain_size(), *params, seed);
  }
  return anonhist::NoiseHistogramAuto(h, *params, seed);
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* anonhist_last_error(void) { return last_error.c_str(); }

const char* anonhist_status_name(anonhist_status status) {
  switch (status) {
    case ANONHIST_OK:
      return "ok";
    case ANONHIST_INVALID_ARGUMENT:
      return "invalid argument";
    case ANONHIST_INFEASIBLE:
      return "infeasible";
    case ANONHIST_IO:
      return "io error";
    case ANONHIST_OUT_OF_RANGE:
      return "out of range";
    case ANONHIST_INTERNAL:
      return "internal error";
  }
  return "unknown";
}

const char* anonhist_version(void) { return "0.1.0"; }

void anonhist_string_free(char* s) { std::free(s); }

anonhist_status anonhist_histogram_create(uint64_t domain_size,
                                          anonhist_histogram** out) {
  if (out == nullptr) return NullArg("out");
  if (domain_size == 0) {
    return Fail(ANONHIST_INVALID_ARGUMENT, "domain size must be positive");
  }
  *out = new anonhist_histogram;
  (*out)->domain_size = domain_size;
  return ANONHIST_OK;
}

anonhist_status anonhist_histogram_add(anonhist_histogram* h, uint64_t item,
                                       int64_t count) {
  if (h == nullptr) return NullArg("histogram");
  if (item >= h->domain_size) {
    return Fail(ANONHIST_OUT_OF_RANGE, "item outside the domain");
  }
  const int64_t next = h->counts[item] + count;
  if (next < 0) {
    if (h->counts[item] == 0) h->counts.erase(item);
    return Fail(ANONHIST_INVALID_ARGUMENT, "count would become negative");
  }
  if (next == 0) {
    h->counts.erase(item);
  } else {
    h->counts[item] = next;
  }
  return ANONHIST_OK;
}

anonhist_status anonhist_histogram_read(const char* path, uint64_t domain_size,
                                        anonhist_histogram** out) {
  if (path == nullptr) return NullArg("path");
  if (out == nullptr) return NullArg("out");
  auto text = anonhist::ReadFile(path);
  if (!text.ok()) return FromStatus(text.status());
  auto h = anonhist::ParseHistogram(
      *text, domain_size ? std::optional<uint64_t>(domain_size) : std::nullopt);
  if (!h.ok()) return FromStatus(h.status());
  *out = FromHistogram(*h);
  return ANONHIST_OK;
}

anonhist_status anonhist_histogram_write(const anonhist_histogram* h,
                                         const char* path) {
  if (h == nullptr) return NullArg("histogram");
  if (path == nullptr) return NullArg("path");
  auto hist = ToHistogram(h);
  if (!hist.ok()) return FromStatus(hist.status());
  return FromStatus(anonhist::WriteFile(path, anonhist::FormatHistogram(*hist)));
}

uint64_t anonhist_histogram_domain_size(const anonhist_histogram* h) {
  return h == nullptr ? 0 : h->domain_size;
}

int64_t anonhist_histogram_total(const anonhist_histogram* h) {
  if (h == nullptr) return 0;
  int64_t total = 0;
  for (const auto& [item, count] : h->counts) total += count;
  return total;
}

void anonhist_histogram_free(anonhist_histogram* h) { delete h; }

anonhist_status anonhist_generate(const char* generator, int64_t n, uint64_t D,
                                  uint64_t seed, anonhist_histogram** out) {
  if (generator == nullptr) return NullArg("generator");
  if (out == nullptr) return NullArg("out");
  auto spec = anonhist::ParseGenerator(generator);
  if (!spec.ok()) return FromStatus(spec.status());
  auto h = anonhist::Generate(*spec, n, D, seed);
  if (!h.ok()) return FromStatus(h.status());
  *out = FromHistogram(*h);
  return ANONHIST_OK;
}

anonhist_status anonhist_generate_batched(const char* generator, int64_t n,
                                          uint64_t D, uint64_t m, uint64_t seed,
                                          anonhist_histogram** out) {
  if (generator == nullptr) return NullArg("generator");
  if (out == nullptr) return NullArg("out");
  auto spec = anonhist::ParseGenerator(generator);
  if (!spec.ok()) return FromStatus(spec.status());
  auto items = anonhist::GenerateItems(*spec, n, D, seed);
  if (!items.ok()) return FromStatus(items.status());
  auto h = anonhist::BatchAugment(*items, D, static_cast<size_t>(m));
  if (!h.ok()) return FromStatus(h.status());
  *out = FromHistogram(*h);
  return ANONHIST_OK;
}

anonhist_status anonhist_batch_augment(const uint64_t* items, size_t len,
                                       uint64_t domain_size, uint64_t m,
                                       anonhist_histogram** out) {
  if (items == nullptr && len > 0) return NullArg("items");
  if (out == nullptr) return NullArg("out");
  std::vector<anonhist::ItemId> v(items, items + len);
  auto h = anonhist::BatchAugment(v, domain_size, static_cast<size_t>(m));
  if (!h.ok()) return FromStatus(h.status());
  *out = FromHistogram(*h);
  return ANONHIST_OK;
}

anonhist_status anonhist_anonymize(const anonhist_histogram* h,
                                   anonhist_anon** out) {
  if (h == nullptr) return NullArg("histogram");
  if (out == nullptr) return NullArg("out");
  auto hist = ToHistogram(h);
  if (!hist.ok()) return FromStatus(hist.status());
  *out = new anonhist_anon{anonhist::Anonymize(*hist)};
  return ANONHIST_OK;
}

anonhist_status anonhist_anon_create(const int64_t* counts, size_t len,
                                     anonhist_anon** out) {
  if (counts == nullptr && len > 0) return NullArg("counts");
  if (out == nullptr) return NullArg("out");
  auto a = AnonymizedHistogram::Create(std::vector<int64_t>(counts, counts + len));
  if (!a.ok()) return FromStatus(a.status());
  *out = new anonhist_anon{*std::move(a)};
  return ANONHIST_OK;
}

anonhist_status anonhist_anon_read(const char* path, anonhist_anon** out) {
  if (path == nullptr) return NullArg("path");
  if (out == nullptr) return NullArg("out");
  auto text = anonhist::ReadFile(path);
  if (!text.ok()) return FromStatus(text.status());
  auto a = anonhist::ParseAnonymized(*text);
  if (!a.ok()) return FromStatus(a.status());
  *out = new anonhist_anon{*std::move(a)};
  return ANONHIST_OK;
}

anonhist_status anonhist_anon_write(const anonhist_anon* a, const char* path) {
  if (a == nullptr) return NullArg("anonymized histogram");
  if (path == nullptr) return NullArg("path");
  return FromStatus(
      anonhist::WriteFile(path, anonhist::FormatAnonymized(a->value)));
}

size_t anonhist_anon_size(const anonhist_anon* a) {
  return a == nullptr ? 0 : a->value.size();
}

int64_t anonhist_anon_total(const anonhist_anon* a) {
  return a == nullptr ? 0 : a->value.total();
}

size_t anonhist_anon_counts(const anonhist_anon* a, int64_t* buf,
                            size_t capacity) {
  if (a == nullptr) return 0;
  const auto counts = a->value.counts();
  if (buf != nullptr) {
    std::copy_n(counts.begin(), std::min(capacity, counts.size()), buf);
  }
  return counts.size();
}

void anonhist_anon_free(anonhist_anon* a) { delete a; }

anonhist_status anonhist_cumulative_prevalence(const anonhist_anon* a,
                                               size_t r_max, int64_t* out) {
  if (a == nullptr) return NullArg("anonymized histogram");
  if (out == nullptr && r_max > 0) return NullArg("out");
  auto c = anonhist::CumulativePrevalenceOf(a->value, r_max);
  if (!c.ok()) return FromStatus(c.status());
  const std::vector<int64_t> v = c->ExactValues();
  std::copy(v.begin(), v.end(), out);
  return ANONHIST_OK;
}

anonhist_status anonhist_distances_compute(const anonhist_anon* a,
                                           const anonhist_anon* b,
                                           anonhist_distances* out) {
  if (a == nullptr || b == nullptr) return NullArg("anonymized histogram");
  if (out == nullptr) return NullArg("out");
  const anonhist::Distances d = anonhist::ComputeDistances(a->value, b->value);
  out->l1 = d.l1;
  out->l2sq = d.l2sq;
  out->linf = d.linf;
  return ANONHIST_OK;
}

anonhist_status anonhist_noise_parameter(double epsilon,
                                         anonhist_privacy_mode mode,
                                         double* p) {
  if (p == nullptr) return NullArg("p");
  auto m = ToMode(mode);
  if (!m.ok()) return FromStatus(m.status());
  auto params = anonhist::PrivacyParams::Create(epsilon, *m);
  if (!params.ok()) return FromStatus(params.status());
  *p = params->p;
  return ANONHIST_OK;
}

anonhist_status anonhist_noise(const anonhist_histogram* h, double epsilon,
                               anonhist_privacy_mode mode, uint64_t seed,
                               anonhist_noised** out) {
  if (h == nullptr) return NullArg("histogram");
  if (out == nullptr) return NullArg("out");
  auto hist = ToHistogram(h);
  if (!hist.ok()) return FromStatus(hist.status());
  auto nh = NoiseWith(*hist, epsilon, mode, seed);
  if (!nh.ok()) return FromStatus(nh.status());
  *out = new anonhist_noised{*std::move(nh)};
  return ANONHIST_OK;
}

anonhist_status anonhist_noise_reduced(const anonhist_histogram* h,
                                       uint64_t buckets, uint64_t hash_seed,
                                       double epsilon,
                                       anonhist_privacy_mode mode,
                                       uint64_t seed, anonhist_noised** out) {
  if (h == nullptr) return NullArg("histogram");
  if (out == nullptr) return NullArg("out");
  auto hist = ToHistogram(h);
  if (!hist.ok()) return FromStatus(hist.status());
  auto hash = anonhist::HashReduction::Create(buckets, hash_seed);
  if (!hash.ok()) return FromStatus(hash.status());
  auto nh = NoiseWith(anonhist::ReduceHistogram(*hist, *hash), epsilon, mode,
                      seed);
  if (!nh.ok()) return FromStatus(nh.status());
  *out = new anonhist_noised{*std::move(nh)};
  return ANONHIST_OK;
}

anonhist_status anonhist_noised_read(const char* path, anonhist_noised** out) {
  if (path == nullptr) return NullArg("path");
  if (out == nullptr) return NullArg("out");
  auto text = anonhist::ReadFile(path);
  if (!text.ok()) return FromStatus(text.status());
  auto nh = anonhist::ParseNoised(*text);
  if (!nh.ok()) return FromStatus(nh.status());
  *out = new anonhist_noised{*std::move(nh)};
  return ANONHIST_OK;
}

anonhist_status anonhist_noised_write(const anonhist_noised* nh,
                                      const char* path) {
  if (nh == nullptr) return NullArg("noised histogram");
  if (path == nullptr) return NullArg("path");
  return FromStatus(anonhist::WriteFile(path, anonhist::FormatNoised(nh->value)));
}

uint64_t anonhist_noised_domain_size(const anonhist_noised* nh) {
  return nh == nullptr ? 0 : nh->value.domain_size();
}

double anonhist_noised_p(const anonhist_noised* nh) {
  return nh == nullptr ? 0.0 : nh->value.p();
}

int anonhist_noised_layers(const anonhist_noised* nh) {
  return nh == nullptr ? 0 : nh->value.noise_layers();
}

int64_t anonhist_noised_total(const anonhist_noised* nh) {
  return nh == nullptr ? 0 : nh->value.NoisyTotal();
}

void anonhist_noised_free(anonhist_noised* nh) { delete nh; }

void anonhist_estimate_config_init(anonhist_estimate_config* cfg) {
  if (cfg == nullptr) return;
  cfg->mode = ANONHIST_SMALL_L1;
  cfg->n = -1;
  cfg->gamma = 0;
  cfg->head = 0;
}

uint64_t anonhist_default_buckets(anonhist_estimator mode, int64_t n,
                                  uint64_t D, double epsilon, int second) {
  if (n < 1) return 0;
  auto params =
      anonhist::PrivacyParams::Create(epsilon, anonhist::PrivacyMode::kTwoHist);
  switch (mode) {
    case ANONHIST_LARGE_L1_REFERENCE:
      return anonhist::DefaultHashBuckets(n);
    case ANONHIST_LARGE_L1_FAST:
      if (!params.ok()) return 0;
      return anonhist::DefaultFastBuckets(n, anonhist::DefaultHead(D, params->p));
    case ANONHIST_LARGE_L2SQ:
      return second ? anonhist::DefaultSecondBuckets(n)
                    : anonhist::DefaultHashBuckets(n);
    default:
      return 0;
  }
}

anonhist_status anonhist_estimate(const anonhist_noised* primary,
                                  const anonhist_noised* secondary,
                                  const anonhist_estimate_config* cfg,
                                  anonhist_anon** out,
                                  anonhist_estimate_info* info) {
  if (primary == nullptr) return NullArg("primary");
  if (cfg == nullptr) return NullArg("config");
  if (out == nullptr) return NullArg("out");
  auto mode = ToEstimator(cfg->mode);
  if (!mode.ok()) return FromStatus(mode.status());
  anonhist::EstimatorConfig c;
  c.mode = *mode;
  if (cfg->n >= 0) c.n = cfg->n;
  c.gamma = cfg->gamma;
  c.head = static_cast<size_t>(cfg->head);
  auto est = anonhist::RunEstimator(
      primary->value, secondary ? &secondary->value : nullptr, c);
  if (!est.ok()) return FromStatus(est.status());
  if (info != nullptr) {
    info->fallback = est->fallback ? 1 : 0;
    info->n_estimated = est->n_estimated ? 1 : 0;
    info->n = est->n;
    info->gamma = est->gamma;
    info->head = est->head;
  }
  *out = new anonhist_anon{std::move(est->histogram)};
  return ANONHIST_OK;
}

anonhist_status anonhist_entropy(const anonhist_anon* a, double* nats) {
  if (a == nullptr) return NullArg("anonymized histogram");
  if (nats == nullptr) return NullArg("out");
  auto v = anonhist::EmpiricalEntropy(a->value);
  if (!v.ok()) return FromStatus(v.status());
  *nats = *v;
  return ANONHIST_OK;
}

anonhist_status anonhist_support_coverage(const anonhist_anon* a, int64_t n,
                                          uint64_t m, double* out) {
  if (a == nullptr) return NullArg("anonymized histogram");
  if (out == nullptr) return NullArg("out");
  auto v = anonhist::SupportCoverageDense(a->value, n, static_cast<size_t>(m));
  if (!v.ok()) return FromStatus(v.status());
  *out = *v;
  return ANONHIST_OK;
}

anonhist_status anonhist_support_size(const anonhist_anon* a, int64_t n,
                                      double K, double alpha, double* out) {
  if (a == nullptr) return NullArg("anonymized histogram");
  if (out == nullptr) return NullArg("out");
  auto v = anonhist::SupportSize(a->value, n, K, alpha);
  if (!v.ok()) return FromStatus(v.status());
  *out = *v;
  return ANONHIST_OK;
}

void anonhist_property_request_init(anonhist_property_request* r) {
  if (r == nullptr) return;
  r->property = ANONHIST_ENTROPY;
  r->alpha = 0.1;
  r->m = 0;
  r->K = 0;
  r->repeats = 1;
  r->epsilon = 1.0;
  r->mode = ANONHIST_CENTRAL;
}

anonhist_status anonhist_private_property(const anonhist_histogram* h,
                                          const anonhist_property_request* req,
                                          uint64_t seed, double* value,
                                          double* per_repeat) {
  if (h == nullptr) return NullArg("histogram");
  if (req == nullptr) return NullArg("request");
  if (value == nullptr) return NullArg("value");
  auto hist = ToHistogram(h);
  if (!hist.ok()) return FromStatus(hist.status());
  auto kind = ToProperty(req->property);
  if (!kind.ok()) return FromStatus(kind.status());
  auto mode = ToMode(req->mode);
  if (!mode.ok()) return FromStatus(mode.status());
  auto params = anonhist::PrivacyParams::Create(req->epsilon, *mode);
  if (!params.ok()) return FromStatus(params.status());
  anonhist::PropertyRequest r;
  r.kind = *kind;
  r.alpha = req->alpha;
  r.m = static_cast<size_t>(req->m);
  r.K = req->K;
  r.repeats = req->repeats;
  std::vector<double> runs;
  auto v = anonhist::PrivateProperty(*hist, r, *params, seed, &runs);
  if (!v.ok()) return FromStatus(v.status());
  *value = *v;
  if (per_repeat != nullptr) std::copy(runs.begin(), runs.end(), per_repeat);
  return ANONHIST_OK;
}

anonhist_status anonhist_sample_complexity(anonhist_property property,
                                           double alpha, double epsilon,
                                           double size_param, double* out) {
  if (out == nullptr) return NullArg("out");
  auto kind = ToProperty(property);
  if (!kind.ok()) return FromStatus(kind.status());
  auto sc = anonhist::SampleComplexityBounds(*kind, alpha, epsilon, size_param);
  if (!sc.ok()) return FromStatus(sc.status());
  *out = sc->value;
  return ANONHIST_OK;
}

anonhist_status anonhist_run_plan(const char* plan_json, const char* out_path,
                                  int threads, size_t* rows) {
  if (plan_json == nullptr) return NullArg("plan");
  auto plan = anonhist::ParsePlan(plan_json);
  if (!plan.ok()) return FromStatus(plan.status());
  if (out_path != nullptr) plan->out = out_path;
  auto result = anonhist::RunPlan(*plan, threads);
  if (!result.ok()) return FromStatus(result.status());
  if (rows != nullptr) *rows = result->size();
  const bool all_fallback =
      !result->empty() &&
      std::all_of(result->begin(), result->end(),
                  [](const anonhist::ResultRow& r) { return r.fallback; });
  if (all_fallback) {
    return Fail(ANONHIST_INFEASIBLE, "every trial fell back to the empty estimate");
  }
  return ANONHIST_OK;
}

anonhist_status anonhist_summarize(const char* csv_path, char** text,
                                   char** csv) {
  if (csv_path == nullptr) return NullArg("path");
  auto contents = anonhist::ReadFile(csv_path);
  if (!contents.ok()) return FromStatus(contents.status());
  auto rows = anonhist::ParseResultsCsv(*contents);
  if (!rows.ok()) return FromStatus(rows.status());
  const auto cells = anonhist::Summarize(*rows);
  if (text != nullptr) *text = CopyString(anonhist::FormatSummaryText(cells));
  if (csv != nullptr) *csv = CopyString(anonhist::FormatSummaryCsv(cells));
  return ANONHIST_OK;
}

}  // extern "C"
