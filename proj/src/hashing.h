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

#ifndef ANONHIST_SRC_HASHING_H_
#define ANONHIST_SRC_HASHING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "src/core.h"

namespace anonhist {

// A seeded pseudorandom function [D] -> [B] standing in for a uniformly
// random hash.
class HashReduction {
 public:
  static absl::StatusOr<HashReduction> Create(uint64_t bucket_count,
                                              uint64_t seed);

  uint64_t bucket_count() const { return bucket_count_; }
  uint64_t seed() const { return seed_; }
  uint64_t Bucket(uint64_t item) const;

 private:
  HashReduction(uint64_t bucket_count, uint64_t seed)
      : bucket_count_(bucket_count), seed_(seed) {}

  uint64_t bucket_count_;
  uint64_t seed_;
};

// Entry j of `a` (by rank) goes to bucket Bucket(j); bucket totals are
// re-anonymized. Total is preserved.
AnonymizedHistogram Reduce(const AnonymizedHistogram& a,
                           const HashReduction& hash);
// Item-level reduction: a histogram over the B buckets.
Histogram ReduceHistogram(const Histogram& h, const HashReduction& hash);

// Expected number of buckets with total >= ell when the entries described by
// the cumulative prevalence prefix phi_{>=1..ell} are hashed into B buckets.
// Entries of value >= ell are all treated as value ell. O(n * ell).
absl::StatusOr<double> GammaB(std::span<const int64_t> prefix, uint64_t B);

// Gamma^B(a)_r for r = 1..r_max in one O(n * r_max) pass.
absl::StatusOr<std::vector<double>> GammaBVector(const AnonymizedHistogram& a,
                                                 uint64_t B, size_t r_max);

// Evaluates Gamma^B(c_1, ..., c_{r-1}, mid)_r for a committed prefix c and a
// trial last coordinate in O(1), then extends the prefix in
// O(#new entries * r_max). Used by the binary search of the fast large-domain
// estimator. c_0 is the total n.
class GammaPrefixEvaluator {
 public:
  static absl::StatusOr<GammaPrefixEvaluator> Create(uint64_t B, int64_t n,
                                                     size_t r_max);

  // Coordinate being searched (1-based).
  size_t r() const { return committed_.size() + 1; }
  // c_{r-1}: the upper end of the search interval.
  int64_t previous() const;
  // Requires 0 <= mid <= previous().
  double Evaluate(int64_t mid) const;
  // Fixes c_r = value and moves to r + 1.
  absl::Status Commit(int64_t value);
  const std::vector<int64_t>& committed() const { return committed_; }

 private:
  GammaPrefixEvaluator(uint64_t B, int64_t n, size_t r_max);
  void AddEntry(int64_t value);

  double b_;
  double log_q_;  // log(1 - 1/B)
  int64_t n_;
  size_t r_max_;
  // xi_[k] = Pr[a fixed bucket's total >= k] over the entries of value at
  // most r - 2.
  std::vector<double> xi_;
  std::vector<int64_t> committed_;
};

struct MonteCarloEstimate {
  double mean = 0;
  double std_error = 0;
};

// Average of phi_{>=ell} of the reduced histogram over independently seeded
// hash functions.
absl::StatusOr<MonteCarloEstimate> GammaBMonteCarlo(
    const AnonymizedHistogram& a, uint64_t B, size_t ell, int trials,
    uint64_t seed);

}  // namespace anonhist

#endif  // ANONHIST_SRC_HASHING_H_
