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

#include "src/noise.h"

#include <cmath>
#include <limits>
#include <utility>

#include "absl/strings/str_cat.h"

namespace anonhist {

absl::Status ValidateNoiseParameter(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("noise parameter p must lie in (0, 1), got ", p));
  }
  return absl::OkStatus();
}

absl::StatusOr<DiscreteLaplace> DiscreteLaplace::Create(double p) {
  if (absl::Status s = ValidateNoiseParameter(p); !s.ok()) return s;
  return DiscreteLaplace(p);
}

DiscreteLaplace::DiscreteLaplace(double p)
    : p_(p), log_p_(std::log(p)), left_mass_(p / (1.0 + p)) {}

double DiscreteLaplace::Pmf(int64_t i) const {
  const double magnitude = static_cast<double>(i < 0 ? -i : i);
  return (1.0 - p_) / (1.0 + p_) * std::exp(magnitude * log_p_);
}

double DiscreteLaplace::Variance() const {
  return 2.0 * p_ / ((1.0 - p_) * (1.0 - p_));
}

int64_t DiscreteLaplace::SampleFromBits(uint64_t bits) const {
  // CDF: F(x) = p^|x| / (1+p) for x <= -1 and 1 - p^(x+1) / (1+p) for x >= 0.
  const double u = BitsToOpenUnit(bits);
  if (u <= left_mass_) {
    const double k = std::floor(std::log(u * (1.0 + p_)) / log_p_);
    return -static_cast<int64_t>(k);
  }
  // 1 - u from the complemented bits; 1.0 - u rounds to 0 near the top.
  const double v = BitsToOpenUnit(~bits);
  const double k = std::ceil(std::log(v * (1.0 + p_)) / log_p_) - 1.0;
  return k > 0 ? static_cast<int64_t>(k) : 0;
}

absl::StatusOr<double> DLapPmf(int64_t i, double p) {
  auto dist = DiscreteLaplace::Create(p);
  if (!dist.ok()) return dist.status();
  return dist->Pmf(i);
}

absl::StatusOr<NoisedHistogram> NoisedHistogram::Dense(
    std::vector<int64_t> noisy_counts, double p, int noise_layers) {
  if (absl::Status s = ValidateNoiseParameter(p); !s.ok()) return s;
  if (noise_layers != 1 && noise_layers != 2) {
    return absl::InvalidArgumentError("noise layers must be 1 or 2");
  }
  if (noisy_counts.empty()) {
    return absl::InvalidArgumentError("noised histogram has no slots");
  }
  NoisedHistogram h;
  h.domain_size_ = noisy_counts.size();
  h.p_ = p;
  h.noise_layers_ = noise_layers;
  h.dense_ = true;
  for (int64_t v : noisy_counts) ++h.value_counts_[v];
  h.noisy_counts_ = std::move(noisy_counts);
  return h;
}

absl::StatusOr<NoisedHistogram> NoisedHistogram::Summarized(
    uint64_t domain_size, double p, int noise_layers,
    std::map<int64_t, uint64_t> value_counts) {
  if (absl::Status s = ValidateNoiseParameter(p); !s.ok()) return s;
  if (noise_layers != 1 && noise_layers != 2) {
    return absl::InvalidArgumentError("noise layers must be 1 or 2");
  }
  uint64_t slots = 0;
  for (const auto& [value, count] : value_counts) slots += count;
  if (slots != domain_size || domain_size == 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("value counts cover ", slots, " slots, expected ",
                     domain_size));
  }
  std::erase_if(value_counts, [](const auto& kv) { return kv.second == 0; });
  NoisedHistogram h;
  h.domain_size_ = domain_size;
  h.p_ = p;
  h.noise_layers_ = noise_layers;
  h.dense_ = false;
  h.value_counts_ = std::move(value_counts);
  return h;
}

int64_t NoisedHistogram::NoisyTotal() const {
  int64_t total = 0;
  for (const auto& [value, count] : value_counts_) {
    total += value * static_cast<int64_t>(count);
  }
  return total;
}

namespace {

absl::Status CheckSingleLayerMode(const PrivacyParams& params) {
  if (params.mode == PrivacyMode::kPanPrivateStrict) {
    return absl::InvalidArgumentError(
        "pan-private-strict noise is produced by PanPrivateRun");
  }
  return ValidateNoiseParameter(params.p);
}

int64_t SlotNoise(const DiscreteLaplace& dlap, uint64_t layer_key,
                  uint64_t slot) {
  return dlap.SampleFromBits(KeyedHash(layer_key, slot));
}

// Multiset of `slots` i.i.d. DLap(p) draws: the count at 0 is binomial, and
// given |X| >= k the magnitude equals k with probability 1 - p.
void AddBackgroundNoise(uint64_t slots, double p, CounterRng& rng,
                        std::map<int64_t, uint64_t>& value_counts) {
  const uint64_t zeros = SampleBinomial(rng, slots, (1.0 - p) / (1.0 + p));
  if (zeros > 0) value_counts[0] += zeros;
  uint64_t remaining = slots - zeros;
  for (int64_t k = 1; remaining > 0; ++k) {
    const uint64_t at_k = SampleBinomial(rng, remaining, 1.0 - p);
    remaining -= at_k;
    const uint64_t positive = SampleBinomial(rng, at_k, 0.5);
    if (positive > 0) value_counts[k] += positive;
    if (at_k > positive) value_counts[-k] += at_k - positive;
  }
}

}  // namespace

absl::StatusOr<NoisedHistogram> NoiseHistogram(const Histogram& histogram,
                                               const PrivacyParams& params,
                                               uint64_t seed) {
  if (absl::Status s = CheckSingleLayerMode(params); !s.ok()) return s;
  const uint64_t d = histogram.domain_size();
  if (d > (uint64_t{1} << 31)) {
    return absl::InvalidArgumentError(
        absl::StrCat("domain of size ", d,
                     " is too large for a dense noised histogram"));
  }
  const DiscreteLaplace dlap = *DiscreteLaplace::Create(params.p);
  const uint64_t key = DeriveSeed(seed, kInitialLayerStream);
  std::vector<int64_t> noisy(d);
  for (uint64_t j = 0; j < d; ++j) noisy[j] = SlotNoise(dlap, key, j);
  for (const auto& [item, count] : histogram.counts()) noisy[item] += count;
  return NoisedHistogram::Dense(std::move(noisy), params.p, 1);
}

absl::StatusOr<NoisedHistogram> NoiseHistogramSummarized(
    const Histogram& histogram, const PrivacyParams& params, uint64_t seed) {
  if (absl::Status s = CheckSingleLayerMode(params); !s.ok()) return s;
  const DiscreteLaplace dlap = *DiscreteLaplace::Create(params.p);
  const uint64_t key = DeriveSeed(seed, kInitialLayerStream);
  std::map<int64_t, uint64_t> value_counts;
  for (const auto& [item, count] : histogram.counts()) {
    ++value_counts[count + SlotNoise(dlap, key, item)];
  }
  CounterRng rng(seed, kBackgroundStream);
  AddBackgroundNoise(histogram.domain_size() - histogram.support_size(),
                     params.p, rng, value_counts);
  return NoisedHistogram::Summarized(histogram.domain_size(), params.p, 1,
                                     std::move(value_counts));
}

absl::StatusOr<PanPrivateState> PanPrivateState::Create(
    uint64_t domain_size, const PrivacyParams& params, uint64_t seed) {
  if (absl::Status s = ValidateNoiseParameter(params.p); !s.ok()) return s;
  if (domain_size == 0 || domain_size > (uint64_t{1} << 31)) {
    return absl::InvalidArgumentError(
        absl::StrCat("unsupported domain size ", domain_size));
  }
  const DiscreteLaplace dlap = *DiscreteLaplace::Create(params.p);
  const uint64_t key = DeriveSeed(seed, kInitialLayerStream);
  std::vector<int64_t> counts(domain_size);
  for (uint64_t j = 0; j < domain_size; ++j) {
    counts[j] = SlotNoise(dlap, key, j);
  }
  return PanPrivateState(params, seed, std::move(counts));
}

absl::Status PanPrivateState::Observe(ItemId item) {
  if (item >= counts_.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("item id ", item, " outside domain of size ",
                     counts_.size()));
  }
  ++counts_[item];
  ++items_seen_;
  return absl::OkStatus();
}

NoisedHistogram PanPrivateState::Finalize() const {
  std::vector<int64_t> out = counts_;
  if (noise_layers() == 2) {
    const DiscreteLaplace dlap = *DiscreteLaplace::Create(params_.p);
    const uint64_t key = DeriveSeed(seed_, kFinalLayerStream);
    for (uint64_t j = 0; j < out.size(); ++j) out[j] += SlotNoise(dlap, key, j);
  }
  return *NoisedHistogram::Dense(std::move(out), params_.p, noise_layers());
}

absl::StatusOr<NoisedHistogram> PanPrivateRun(std::span<const ItemId> stream,
                                              uint64_t domain_size,
                                              const PrivacyParams& params,
                                              uint64_t seed) {
  auto state = PanPrivateState::Create(domain_size, params, seed);
  if (!state.ok()) return state.status();
  for (ItemId item : stream) {
    if (absl::Status s = state->Observe(item); !s.ok()) return s;
  }
  return state->Finalize();
}

absl::StatusOr<NoisedHistogram> NoiseHistogramAuto(const Histogram& histogram,
                                                   const PrivacyParams& params,
                                                   uint64_t seed) {
  if (histogram.domain_size() <= kDenseNoiseLimit) {
    return NoiseHistogram(histogram, params, seed);
  }
  return NoiseHistogramSummarized(histogram, params, seed);
}

}  // namespace anonhist
