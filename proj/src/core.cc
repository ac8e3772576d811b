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

#include "src/core.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace anonhist {

absl::StatusOr<Histogram> Histogram::Create(
    uint64_t domain_size, const std::map<ItemId, Count>& counts) {
  if (domain_size == 0) {
    return absl::InvalidArgumentError("domain size must be positive");
  }
  std::map<ItemId, Count> kept;
  Count total = 0;
  for (const auto& [item, count] : counts) {
    if (item >= domain_size) {
      return absl::InvalidArgumentError(
          absl::StrCat("item id ", item, " outside domain of size ",
                       domain_size));
    }
    if (count < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("negative count ", count, " for item ", item));
    }
    if (count > 0) {
      kept.emplace(item, count);
      total += count;
    }
  }
  return Histogram(domain_size, std::move(kept), total);
}

absl::StatusOr<Histogram> Histogram::FromItems(uint64_t domain_size,
                                               std::span<const ItemId> items) {
  if (domain_size == 0) {
    return absl::InvalidArgumentError("domain size must be positive");
  }
  std::map<ItemId, Count> counts;
  for (ItemId item : items) {
    if (item >= domain_size) {
      return absl::InvalidArgumentError(
          absl::StrCat("item id ", item, " outside domain of size ",
                       domain_size));
    }
    ++counts[item];
  }
  return Histogram(domain_size, std::move(counts),
                   static_cast<Count>(items.size()));
}

Count Histogram::count(ItemId item) const {
  auto it = counts_.find(item);
  return it == counts_.end() ? 0 : it->second;
}

AnonymizedHistogram::AnonymizedHistogram(std::vector<Count> counts)
    : counts_(std::move(counts)) {
  for (Count c : counts_) total_ += c;
}

absl::StatusOr<AnonymizedHistogram> AnonymizedHistogram::Create(
    std::vector<Count> counts) {
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("anonymized histogram entry ", i, " is ", counts[i],
                       "; entries must be positive"));
    }
    if (i > 0 && counts[i] > counts[i - 1]) {
      return absl::InvalidArgumentError(
          absl::StrCat("anonymized histogram is not nonincreasing at rank ",
                       i));
    }
  }
  return AnonymizedHistogram(std::move(counts));
}

absl::StatusOr<AnonymizedHistogram> AnonymizedHistogram::FromUnsorted(
    std::vector<Count> counts) {
  for (Count c : counts) {
    if (c < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("negative count ", c));
    }
  }
  std::erase(counts, 0);
  std::sort(counts.begin(), counts.end(), std::greater<>());
  return AnonymizedHistogram(std::move(counts));
}

absl::StatusOr<CumulativePrevalence> CumulativePrevalence::Exact(
    std::vector<int64_t> values) {
  std::vector<double> as_double(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("cumulative prevalence at r=", i + 1, " is negative"));
    }
    if (i > 0 && values[i] > values[i - 1]) {
      return absl::InvalidArgumentError(
          absl::StrCat("cumulative prevalence increases at r=", i + 1));
    }
    as_double[i] = static_cast<double>(values[i]);
  }
  return CumulativePrevalence(Kind::kExact, std::move(as_double));
}

CumulativePrevalence CumulativePrevalence::Estimated(
    std::vector<double> values) {
  return CumulativePrevalence(Kind::kEstimated, std::move(values));
}

std::vector<int64_t> CumulativePrevalence::ExactValues() const {
  std::vector<int64_t> out(values_.size());
  for (size_t i = 0; i < values_.size(); ++i) {
    out[i] = static_cast<int64_t>(std::llround(values_[i]));
  }
  return out;
}

std::string_view PrivacyModeName(PrivacyMode mode) {
  switch (mode) {
    case PrivacyMode::kCentralOneHist:
      return "central";
    case PrivacyMode::kTwoHist:
      return "two-hist";
    case PrivacyMode::kPanPrivateStrict:
      return "pan-strict";
  }
  return "unknown";
}

absl::StatusOr<PrivacyMode> ParsePrivacyMode(std::string_view name) {
  if (name == "central" || name == "central-one-hist") {
    return PrivacyMode::kCentralOneHist;
  }
  if (name == "two-hist") return PrivacyMode::kTwoHist;
  if (name == "pan-strict" || name == "pan-private-strict") {
    return PrivacyMode::kPanPrivateStrict;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown privacy mode '", std::string(name), "'"));
}

absl::StatusOr<PrivacyParams> PrivacyParams::Create(double epsilon,
                                                    PrivacyMode mode,
                                                    double delta) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError("epsilon must be positive and finite");
  }
  if (!(delta >= 0 && delta <= 1)) {
    return absl::InvalidArgumentError("delta must lie in [0, 1]");
  }
  PrivacyParams params;
  params.epsilon = epsilon;
  params.delta = delta;
  params.mode = mode;
  const double divisor = mode == PrivacyMode::kCentralOneHist ? 2.0 : 4.0;
  params.p = std::exp(-epsilon / divisor);
  if (!(params.p > 0 && params.p < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon ", epsilon,
                     " gives a noise parameter outside (0, 1)"));
  }
  return params;
}

AnonymizedHistogram Anonymize(const Histogram& histogram) {
  std::vector<Count> counts;
  counts.reserve(histogram.counts().size());
  for (const auto& [item, count] : histogram.counts()) counts.push_back(count);
  // Counts in a Histogram are already validated positive.
  return *AnonymizedHistogram::FromUnsorted(std::move(counts));
}

namespace {

std::vector<int64_t> CumulativeValues(const AnonymizedHistogram& a,
                                      size_t r_max) {
  // Counts are sorted nonincreasing, so phi_{>=r} is the first rank whose
  // count drops below r.
  std::vector<int64_t> values(r_max, 0);
  const auto counts = a.counts();
  size_t rank = counts.size();
  for (size_t r = 1; r <= r_max; ++r) {
    while (rank > 0 && counts[rank - 1] < static_cast<Count>(r)) --rank;
    values[r - 1] = static_cast<int64_t>(rank);
  }
  return values;
}

}  // namespace

absl::StatusOr<CumulativePrevalence> CumulativePrevalenceOf(
    const AnonymizedHistogram& a, size_t r_max, bool allow_truncation) {
  if (!allow_truncation && static_cast<Count>(r_max) < a.max_count()) {
    return absl::InvalidArgumentError(
        absl::StrCat("r_max ", r_max, " is below the largest count ",
                     a.max_count()));
  }
  return *CumulativePrevalence::Exact(CumulativeValues(a, r_max));
}

CumulativePrevalence CumulativePrevalenceOf(const AnonymizedHistogram& a) {
  return *CumulativePrevalence::Exact(
      CumulativeValues(a, static_cast<size_t>(a.total())));
}

absl::StatusOr<AnonymizedHistogram> FromCumulativePrevalence(
    const CumulativePrevalence& c) {
  if (c.kind() != CumulativePrevalence::Kind::kExact) {
    return absl::InvalidArgumentError(
        "only exact cumulative prevalences map to anonymized histograms");
  }
  for (double v : c.values()) {
    if (v != std::floor(v)) {
      return absl::InvalidArgumentError(
          "cumulative prevalence has a non-integer entry");
    }
  }
  const std::vector<int64_t> values = c.ExactValues();
  return FromCumulativePrevalence(values);
}

absl::StatusOr<AnonymizedHistogram> FromCumulativePrevalence(
    std::span<const int64_t> values) {
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("cumulative prevalence at r=", i + 1, " is negative"));
    }
    if (i > 0 && values[i] > values[i - 1]) {
      return absl::InvalidArgumentError(
          absl::StrCat("cumulative prevalence increases at r=", i + 1));
    }
  }
  // Rank j (0-based) has count = number of r with phi_{>=r} > j.
  const int64_t entries = values.empty() ? 0 : values.front();
  std::vector<Count> counts(static_cast<size_t>(entries), 0);
  for (size_t r = 1; r <= values.size(); ++r) {
    const int64_t upper = values[r - 1];
    const int64_t lower = r < values.size() ? values[r] : 0;
    for (int64_t j = lower; j < upper; ++j) {
      counts[static_cast<size_t>(j)] = static_cast<Count>(r);
    }
  }
  return *AnonymizedHistogram::Create(std::move(counts));
}

std::vector<int64_t> PrevalenceOf(const AnonymizedHistogram& a, size_t r_max) {
  std::vector<int64_t> phi(r_max, 0);
  for (Count c : a.counts()) {
    if (c >= 1 && static_cast<size_t>(c) <= r_max) ++phi[c - 1];
  }
  return phi;
}

Distances ComputeDistances(const AnonymizedHistogram& a,
                           const AnonymizedHistogram& b) {
  Distances d;
  const size_t len = std::max(a.size(), b.size());
  for (size_t i = 0; i < len; ++i) {
    const int64_t diff = std::abs(a.at_rank(i) - b.at_rank(i));
    d.l1 += diff;
    d.l2sq += diff * diff;
    d.linf = std::max(d.linf, diff);
  }
  return d;
}

int64_t L1Distance(const AnonymizedHistogram& a, const AnonymizedHistogram& b) {
  return ComputeDistances(a, b).l1;
}

int64_t L2SquaredDistance(const AnonymizedHistogram& a,
                          const AnonymizedHistogram& b) {
  return ComputeDistances(a, b).l2sq;
}

int64_t LinfDistance(const AnonymizedHistogram& a,
                     const AnonymizedHistogram& b) {
  return ComputeDistances(a, b).linf;
}

}  // namespace anonhist
