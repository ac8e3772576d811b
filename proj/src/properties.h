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

#ifndef ANONHIST_SRC_PROPERTIES_H_
#define ANONHIST_SRC_PROPERTIES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "src/core.h"

namespace anonhist {

// Entropy of the empirical distribution, in nats.
absl::StatusOr<double> EmpiricalEntropy(const AnonymizedHistogram& a);
inline double NatsToBits(double nats) { return nats * 1.4426950408889634; }

// Items i = 0..n-1 of the stream are split into n/m batches of m consecutive
// samples; sample i becomes the pair (item, i / m), encoded as
// item * (n/m) + i / m over a domain of D * (n/m).
absl::StatusOr<Histogram> BatchAugment(std::span<const ItemId> items,
                                       uint64_t domain_size, size_t m);

// m * phi_{>=1} / n on a batch-augmented histogram: estimates S_m, the
// expected number of distinct items among m samples.
absl::StatusOr<double> SupportCoverageDense(const AnonymizedHistogram& a,
                                            int64_t n, size_t m);

// ceil(K ln(3/alpha)). Rejects alpha >= 3.
absl::StatusOr<size_t> SupportSizeBatch(double K, double alpha);
// Support coverage with m = SupportSizeBatch(K, alpha). Assumes every atom
// has mass at least 1/K; the caller is responsible for that promise.
absl::StatusOr<double> SupportSize(const AnonymizedHistogram& a, int64_t n,
                                   double K, double alpha);

// S_m for a distribution given by its probabilities.
double ExpectedDistinct(std::span<const double> probabilities, size_t m);

// Middle order statistic of an odd number of values.
absl::StatusOr<double> Median(std::vector<double> values);

enum class PropertyKind { kEntropy, kSupportCoverage, kSupportSize };
std::string_view PropertyKindName(PropertyKind kind);
absl::StatusOr<PropertyKind> ParsePropertyKind(std::string_view name);

struct PropertyRequest {
  PropertyKind kind = PropertyKind::kEntropy;
  double alpha = 0.1;
  size_t m = 0;     // support coverage batch size
  double K = 0;     // support size: minimum mass 1/K
  int repeats = 1;  // odd; median over independent runs
};

// Plug-in value of the requested property on a released histogram. For the
// coverage properties `a` must be batch-augmented and n is the sample count.
absl::StatusOr<double> Mechanism(const AnonymizedHistogram& a,
                                 const PropertyRequest& req, int64_t n);

// Closed-form sample complexity expressions with all hidden constants set to
// one; for planning only.
struct SampleComplexity {
  // Entropy: empirical estimator, and the best lambda for the second one.
  double entropy_empirical = 0;
  double entropy_lambda = 0;
  double entropy_best_lambda = 0;
  // Support coverage.
  double coverage_threshold = 0;  // log^1.5(1/(a e)) / (a^2 e^5)
  double coverage = 0;
  bool coverage_sparse = false;
  // Support size.
  double support_size = 0;
  bool support_size_large = false;
  double value = 0;  // the entry for the requested property
};

absl::StatusOr<SampleComplexity> SampleComplexityBounds(PropertyKind kind,
                                                        double alpha,
                                                        double epsilon,
                                                        double size_param);

}  // namespace anonhist

#endif  // ANONHIST_SRC_PROPERTIES_H_
