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

#ifndef ANONHIST_SRC_RANDOM_H_
#define ANONHIST_SRC_RANDOM_H_

#include <cstdint>
#include <limits>

namespace anonhist {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Keyed hash of a (key, counter) pair. This is the single source of
// randomness for the library: every random quantity is a pure function of a
// seed and an index, so results do not depend on evaluation order.
constexpr uint64_t KeyedHash(uint64_t key, uint64_t counter) {
  return Mix64(Mix64(key) ^ Mix64(counter ^ 0x6a09e667f3bcc909ULL));
}

// Derives an independent child seed, e.g. per trial or per noise layer.
constexpr uint64_t DeriveSeed(uint64_t seed, uint64_t stream) {
  return KeyedHash(seed ^ 0xd1b54a32d192ed03ULL, stream);
}

// Maps 64 random bits to a double in the open interval (0, 1).
inline double BitsToOpenUnit(uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Counter-based generator. Satisfies UniformRandomBitGenerator so it can
// drive <random> distributions where a portable sampler is not needed.
class CounterRng {
 public:
  using result_type = uint64_t;

  explicit CounterRng(uint64_t seed, uint64_t stream = 0)
      : key_(DeriveSeed(seed, stream)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return KeyedHash(key_, counter_++); }

  // Uniform double in (0, 1).
  double Uniform() { return BitsToOpenUnit((*this)()); }

  // Uniform integer in [0, bound). Requires bound > 0.
  uint64_t UniformInt(uint64_t bound) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>((*this)()) * bound) >> 64);
  }

  uint64_t counter() const { return counter_; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

// Binomial(trials, prob) draw. Backed by std::binomial_distribution, so the
// exact stream is only reproducible for a given standard library.
uint64_t SampleBinomial(CounterRng& rng, uint64_t trials, double prob);

}  // namespace anonhist

#endif  // ANONHIST_SRC_RANDOM_H_
