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

#ifndef ANONHIST_SRC_CORE_H_
#define ANONHIST_SRC_CORE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"

namespace anonhist {

using ItemId = uint64_t;
using Count = int64_t;

// Labeled counts over the domain [0, domain_size). Stored sparsely; items
// with count zero are not kept.
class Histogram {
 public:
  static absl::StatusOr<Histogram> Create(uint64_t domain_size,
                                          const std::map<ItemId, Count>& counts);
  // Histogram of a stream of item ids.
  static absl::StatusOr<Histogram> FromItems(uint64_t domain_size,
                                             std::span<const ItemId> items);

  uint64_t domain_size() const { return domain_size_; }
  Count total() const { return total_; }
  const std::map<ItemId, Count>& counts() const { return counts_; }
  Count count(ItemId item) const;
  size_t support_size() const { return counts_.size(); }

  friend bool operator==(const Histogram&, const Histogram&) = default;

 private:
  Histogram(uint64_t domain_size, std::map<ItemId, Count> counts, Count total)
      : domain_size_(domain_size), counts_(std::move(counts)), total_(total) {}

  uint64_t domain_size_ = 0;
  std::map<ItemId, Count> counts_;
  Count total_ = 0;
};

// Multiset of positive counts in nonincreasing order; the release target.
class AnonymizedHistogram {
 public:
  AnonymizedHistogram() = default;

  // Requires a canonical sequence: nonincreasing and every entry >= 1.
  static absl::StatusOr<AnonymizedHistogram> Create(std::vector<Count> counts);
  // Sorts and drops zeros. Rejects negative entries.
  static absl::StatusOr<AnonymizedHistogram> FromUnsorted(
      std::vector<Count> counts);

  std::span<const Count> counts() const { return counts_; }
  size_t size() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }
  Count total() const { return total_; }
  Count max_count() const { return counts_.empty() ? 0 : counts_.front(); }
  // Zero for ranks past the end.
  Count at_rank(size_t rank) const {
    return rank < counts_.size() ? counts_[rank] : 0;
  }

  friend bool operator==(const AnonymizedHistogram&,
                         const AnonymizedHistogram&) = default;

 private:
  explicit AnonymizedHistogram(std::vector<Count> counts);

  std::vector<Count> counts_;
  Count total_ = 0;
};

// phi_{>=r} for r = 1..r_max. Exact values come from a histogram and are
// nonincreasing integers; estimated values are raw estimator output.
class CumulativePrevalence {
 public:
  enum class Kind { kExact, kEstimated };

  CumulativePrevalence() = default;

  static absl::StatusOr<CumulativePrevalence> Exact(
      std::vector<int64_t> values);
  static CumulativePrevalence Estimated(std::vector<double> values);

  Kind kind() const { return kind_; }
  size_t r_max() const { return values_.size(); }
  // 1-based: at(1) is phi_{>=1}. Zero past r_max.
  double at(size_t r) const {
    return (r >= 1 && r <= values_.size()) ? values_[r - 1] : 0.0;
  }
  std::span<const double> values() const { return values_; }
  std::vector<int64_t> ExactValues() const;

 private:
  CumulativePrevalence(Kind kind, std::vector<double> values)
      : kind_(kind), values_(std::move(values)) {}

  Kind kind_ = Kind::kExact;
  std::vector<double> values_;
};

enum class PrivacyMode { kCentralOneHist, kTwoHist, kPanPrivateStrict };

std::string_view PrivacyModeName(PrivacyMode mode);
absl::StatusOr<PrivacyMode> ParsePrivacyMode(std::string_view name);

// Privacy budget and the derived discrete Laplace parameter:
// p = exp(-eps/2) for a single central histogram, exp(-eps/4) when the
// budget is split over two histograms or two noise layers.
struct PrivacyParams {
  double epsilon = 1.0;
  double delta = 0.0;
  PrivacyMode mode = PrivacyMode::kCentralOneHist;
  double p = 0.0;

  static absl::StatusOr<PrivacyParams> Create(double epsilon, PrivacyMode mode,
                                              double delta = 0.0);
};

AnonymizedHistogram Anonymize(const Histogram& histogram);

// values[r] = |{j : a_j >= r}| for r = 1..r_max. A r_max below the largest
// count is an error unless truncation is requested.
absl::StatusOr<CumulativePrevalence> CumulativePrevalenceOf(
    const AnonymizedHistogram& a, size_t r_max, bool allow_truncation = false);
// r_max = total count.
CumulativePrevalence CumulativePrevalenceOf(const AnonymizedHistogram& a);

// Inverse of CumulativePrevalenceOf. Input must be exact: nonincreasing,
// nonnegative and integral.
absl::StatusOr<AnonymizedHistogram> FromCumulativePrevalence(
    const CumulativePrevalence& c);
absl::StatusOr<AnonymizedHistogram> FromCumulativePrevalence(
    std::span<const int64_t> values);

// phi_r = |{j : a_j = r}| for r = 1..r_max.
std::vector<int64_t> PrevalenceOf(const AnonymizedHistogram& a, size_t r_max);

// Rank-wise distances; the shorter sequence is padded with zeros.
int64_t L1Distance(const AnonymizedHistogram& a, const AnonymizedHistogram& b);
int64_t L2SquaredDistance(const AnonymizedHistogram& a,
                          const AnonymizedHistogram& b);
int64_t LinfDistance(const AnonymizedHistogram& a,
                     const AnonymizedHistogram& b);

struct Distances {
  int64_t l1 = 0;
  int64_t l2sq = 0;
  int64_t linf = 0;
};
Distances ComputeDistances(const AnonymizedHistogram& a,
                           const AnonymizedHistogram& b);

}  // namespace anonhist

#endif  // ANONHIST_SRC_CORE_H_
