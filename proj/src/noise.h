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

#ifndef ANONHIST_SRC_NOISE_H_
#define ANONHIST_SRC_NOISE_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "src/core.h"
#include "src/random.h"

namespace anonhist {

// Discrete Laplace distribution DLap(p): Pr[X = i] = (1-p)/(1+p) * p^|i|.
class DiscreteLaplace {
 public:
  static absl::StatusOr<DiscreteLaplace> Create(double p);

  double p() const { return p_; }
  double Pmf(int64_t i) const;
  // 2p / (1-p)^2.
  double Variance() const;

  // Inverse CDF on a single 64-bit uniform word. Pure function of the bits.
  int64_t SampleFromBits(uint64_t bits) const;
  int64_t Sample(CounterRng& rng) const { return SampleFromBits(rng()); }

 private:
  explicit DiscreteLaplace(double p);

  double p_;
  double log_p_;
  double left_mass_;  // Pr[X <= -1] = p / (1 + p)
};

absl::Status ValidateNoiseParameter(double p);
absl::StatusOr<double> DLapPmf(int64_t i, double p);

// A histogram with independent discrete Laplace noise on every one of its D
// slots, zero slots included.
//
// Dense histograms keep one value per slot. Summarized histograms, used for
// hashed domains too large to materialize, keep only the multiset of noisy
// values; every estimator in this library depends on the noisy histogram
// only through that multiset.
class NoisedHistogram {
 public:
  NoisedHistogram() = default;

  static absl::StatusOr<NoisedHistogram> Dense(std::vector<int64_t> noisy_counts,
                                               double p, int noise_layers);
  static absl::StatusOr<NoisedHistogram> Summarized(
      uint64_t domain_size, double p, int noise_layers,
      std::map<int64_t, uint64_t> value_counts);

  uint64_t domain_size() const { return domain_size_; }
  double p() const { return p_; }
  int noise_layers() const { return noise_layers_; }
  bool is_dense() const { return dense_; }
  // Per-slot values; empty for summarized histograms.
  std::span<const int64_t> noisy_counts() const { return noisy_counts_; }
  // Noisy value -> number of slots holding it. Sums to domain_size().
  const std::map<int64_t, uint64_t>& value_counts() const {
    return value_counts_;
  }
  // Sum of all noisy slot values.
  int64_t NoisyTotal() const;

 private:
  uint64_t domain_size_ = 0;
  double p_ = 0.5;
  int noise_layers_ = 1;
  bool dense_ = true;
  std::vector<int64_t> noisy_counts_;
  std::map<int64_t, uint64_t> value_counts_;
};

// Seed streams for the noise layers. Slot j of layer L draws its noise from
// KeyedHash(DeriveSeed(seed, L), j), so noising is order independent.
inline constexpr uint64_t kInitialLayerStream = 1;
inline constexpr uint64_t kFinalLayerStream = 2;
inline constexpr uint64_t kBackgroundStream = 3;

// h'_j = h_j + DLap(p) for every j in [D]. Mode must be central or two-hist.
absl::StatusOr<NoisedHistogram> NoiseHistogram(const Histogram& histogram,
                                               const PrivacyParams& params,
                                               uint64_t seed);

// Same distribution as NoiseHistogram, but the noise on the D - |support|
// empty slots is drawn directly as a multiset (sequential binomials). Slots
// in the support get exactly the noise NoiseHistogram would give them.
absl::StatusOr<NoisedHistogram> NoiseHistogramSummarized(
    const Histogram& histogram, const PrivacyParams& params, uint64_t seed);

// Streaming noised histogram. Starts from one DLap(p) draw per slot and
// increments the slot of every observed item. In pan-private-strict mode a
// second independent DLap(p) layer is added when the stream is finalized.
// Dense up to kDenseNoiseLimit slots, summarized beyond.
inline constexpr uint64_t kDenseNoiseLimit = uint64_t{1} << 24;
absl::StatusOr<NoisedHistogram> NoiseHistogramAuto(const Histogram& histogram,
                                                   const PrivacyParams& params,
                                                   uint64_t seed);

class PanPrivateState {
 public:
  static absl::StatusOr<PanPrivateState> Create(uint64_t domain_size,
                                                const PrivacyParams& params,
                                                uint64_t seed);

  absl::Status Observe(ItemId item);
  uint64_t items_seen() const { return items_seen_; }
  // The running internal state. Exposed for inspection; only the finalized
  // histogram is meant for release.
  std::span<const int64_t> current_counts() const { return counts_; }
  int noise_layers() const {
    return params_.mode == PrivacyMode::kPanPrivateStrict ? 2 : 1;
  }

  NoisedHistogram Finalize() const;

 private:
  PanPrivateState(PrivacyParams params, uint64_t seed,
                  std::vector<int64_t> counts)
      : params_(params), seed_(seed), counts_(std::move(counts)) {}

  PrivacyParams params_;
  uint64_t seed_ = 0;
  std::vector<int64_t> counts_;
  uint64_t items_seen_ = 0;
};

absl::StatusOr<NoisedHistogram> PanPrivateRun(std::span<const ItemId> stream,
                                              uint64_t domain_size,
                                              const PrivacyParams& params,
                                              uint64_t seed);

}  // namespace anonhist

#endif  // ANONHIST_SRC_NOISE_H_
