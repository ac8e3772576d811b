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

#ifndef ANONHIST_SRC_ESTIMATORS_H_
#define ANONHIST_SRC_ESTIMATORS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "src/core.h"
#include "src/noise.h"

namespace anonhist {

enum class EstimatorMode {
  kSmallL1,
  kSmallL2sq,
  kLargeL1Reference,
  kLargeL1Fast,
  kLargeL2sq,
};

std::string_view EstimatorModeName(EstimatorMode mode);
absl::StatusOr<EstimatorMode> ParseEstimatorMode(std::string_view name);

struct EstimatorConfig {
  EstimatorMode mode = EstimatorMode::kSmallL1;
  // Public total count. When unset it is estimated from the noisy total and
  // the sum constraint is dropped.
  std::optional<int64_t> n;
  // Zero selects the default for each of these.
  int64_t gamma = 0;
  size_t head = 0;
};

struct Estimate {
  AnonymizedHistogram histogram;
  // The l2sq projection was infeasible and the all-zeros histogram returned.
  bool fallback = false;
  // n was not given and was estimated; no sum constraint applied.
  bool n_estimated = false;
  int64_t n = 0;
  int64_t gamma = 0;
  size_t head = 0;
};

// ceil(10 ln(2 n domain) / ln(1/p)): the l-infinity radius for l2sq modes.
int64_t DefaultGamma(int64_t n, uint64_t domain_size, double p);
// ceil(10 ln D / ln(1/p)), at least 1.
size_t DefaultHead(uint64_t domain_size, double p);
// 10 n m, the bucket count of the fast large-domain estimator.
uint64_t DefaultFastBuckets(int64_t n, size_t head);
// n ceil(sqrt(ln n)), at least 2.
uint64_t DefaultHashBuckets(int64_t n);
// min(n^4, 2^32).
uint64_t DefaultSecondBuckets(int64_t n);
// n^2 / B: bound on the probability that some pair of n entries collides.
double CollisionBound(int64_t n, uint64_t B);

// Kernel estimate of the cumulative prevalence, then l1 isotonic projection.
absl::StatusOr<AnonymizedHistogram> EstimateSmallL1(const NoisedHistogram& nh,
                                                    size_t r_max);

// Same estimate projected under |n_hat - n_{h'}|_inf <= gamma and, when n is
// given, |n_hat|_1 = n. Falls back to all zeros if infeasible.
absl::StatusOr<Estimate> EstimateSmallL2sq(const NoisedHistogram& nh,
                                           std::optional<int64_t> n,
                                           int64_t gamma);

// Exhaustive minimization of |Gamma^B(n_hat) - phi(n_hat^red)|_1 over all
// anonymized histograms with total n, n <= kReferenceMaxN. Ties go to the
// lexicographically smallest histogram.
inline constexpr int64_t kReferenceMaxN = 12;
absl::StatusOr<AnonymizedHistogram> EstimateLargeReference(
    const NoisedHistogram& nh_red, int64_t n);

// Objective of the reference estimator for a candidate.
absl::StatusOr<double> ReferenceObjective(const AnonymizedHistogram& candidate,
                                          const AnonymizedHistogram& reduced,
                                          uint64_t B);

struct LargeFastTrace {
  std::vector<int64_t> head;        // phi_hat_{>=1..m}
  std::vector<double> head_target;  // phi(n_hat^{2,red}) on the head
};

// Binary-search inversion of Gamma^B on the first m coordinates, tail from
// the full-domain estimate, then l1 isotonic projection. Requires B > 3nm
// unless `check_buckets` is false.
absl::StatusOr<AnonymizedHistogram> EstimateLargeFast(
    const NoisedHistogram& nh_full, const NoisedHistogram& nh_red, int64_t n,
    size_t head, bool check_buckets = true, LargeFastTrace* trace = nullptr);

// Two-hash l2sq estimator: l1 estimate from the B1-bucket histogram (with the
// collision-free B2-bucket histogram standing in for the full domain), then
// projected around n_{h2} with radius gamma and repaired to total n.
absl::StatusOr<Estimate> EstimateLargeL2sq(const NoisedHistogram& nh_red1,
                                           const NoisedHistogram& nh_red2,
                                           std::optional<int64_t> n,
                                           int64_t gamma, size_t head);

// max over ranks j in [D] of |a_j - n'_j|, with n' the noisy slot values in
// nonincreasing order (negative values included) and a zero-padded.
int64_t RankLinfToNoisy(const AnonymizedHistogram& a,
                        const NoisedHistogram& nh);

// Dispatch on cfg.mode. `secondary` is the reduced histogram for
// large-l1-fast and the B2 histogram for large-l2sq; unused otherwise.
absl::StatusOr<Estimate> RunEstimator(const NoisedHistogram& primary,
                                      const NoisedHistogram* secondary,
                                      const EstimatorConfig& cfg);

}  // namespace anonhist

#endif  // ANONHIST_SRC_ESTIMATORS_H_
