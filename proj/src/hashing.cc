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

#include "src/hashing.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <utility>

#include "absl/strings/str_cat.h"
#include "src/random.h"

namespace anonhist {

namespace {

// Folds one entry of value v into the per-bucket tail probabilities.
void AddToXi(std::vector<double>& xi, int64_t v, double b) {
  const double stay = (b - 1.0) / b;
  const double move = 1.0 / b;
  for (size_t k = xi.size() - 1; k >= 1; --k) {
    const int64_t from = std::max<int64_t>(static_cast<int64_t>(k) - v, 0);
    xi[k] = stay * xi[k] + move * xi[from];
  }
}

absl::Status CheckBuckets(uint64_t B) {
  if (B == 0) return absl::InvalidArgumentError("bucket count must be >= 1");
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<HashReduction> HashReduction::Create(uint64_t bucket_count,
                                                    uint64_t seed) {
  if (absl::Status s = CheckBuckets(bucket_count); !s.ok()) return s;
  return HashReduction(bucket_count, seed);
}

uint64_t HashReduction::Bucket(uint64_t item) const {
  return static_cast<uint64_t>(
      (static_cast<unsigned __int128>(KeyedHash(seed_, item)) *
       bucket_count_) >>
      64);
}

AnonymizedHistogram Reduce(const AnonymizedHistogram& a,
                           const HashReduction& hash) {
  std::unordered_map<uint64_t, Count> buckets;
  const auto counts = a.counts();
  for (size_t j = 0; j < counts.size(); ++j) {
    buckets[hash.Bucket(j)] += counts[j];
  }
  std::vector<Count> out;
  out.reserve(buckets.size());
  for (const auto& [bucket, total] : buckets) out.push_back(total);
  return *AnonymizedHistogram::FromUnsorted(std::move(out));
}

Histogram ReduceHistogram(const Histogram& h, const HashReduction& hash) {
  std::map<ItemId, Count> buckets;
  for (const auto& [item, count] : h.counts()) {
    buckets[hash.Bucket(item)] += count;
  }
  return *Histogram::Create(hash.bucket_count(), buckets);
}

absl::StatusOr<double> GammaB(std::span<const int64_t> prefix, uint64_t B) {
  if (absl::Status s = CheckBuckets(B); !s.ok()) return s;
  if (prefix.empty()) {
    return absl::InvalidArgumentError("prefix must have length >= 1");
  }
  for (size_t i = 0; i < prefix.size(); ++i) {
    if (prefix[i] < 0 || (i + 1 < prefix.size() && prefix[i] < prefix[i + 1])) {
      return absl::InvalidArgumentError(
          "prefix must be nonincreasing and nonnegative");
    }
  }
  const size_t ell = prefix.size();
  std::vector<double> xi(ell + 1, 0.0);
  xi[0] = 1.0;
  const double b = static_cast<double>(B);
  for (size_t r = 1; r <= ell; ++r) {
    const int64_t next = r < ell ? prefix[r] : 0;
    for (int64_t j = 0; j < prefix[r - 1] - next; ++j) {
      AddToXi(xi, static_cast<int64_t>(r), b);
    }
  }
  return b * xi[ell];
}

absl::StatusOr<std::vector<double>> GammaBVector(const AnonymizedHistogram& a,
                                                 uint64_t B, size_t r_max) {
  if (absl::Status s = CheckBuckets(B); !s.ok()) return s;
  std::vector<double> xi(r_max + 1, 0.0);
  xi[0] = 1.0;
  const double b = static_cast<double>(B);
  if (r_max > 0) {
    for (Count v : a.counts()) {
      AddToXi(xi, std::min<int64_t>(v, static_cast<int64_t>(r_max)), b);
    }
  }
  std::vector<double> out(r_max);
  for (size_t r = 1; r <= r_max; ++r) out[r - 1] = b * xi[r];
  return out;
}

absl::StatusOr<GammaPrefixEvaluator> GammaPrefixEvaluator::Create(
    uint64_t B, int64_t n, size_t r_max) {
  if (B < 2) {
    return absl::InvalidArgumentError("prefix evaluator needs B >= 2");
  }
  if (n < 0) return absl::InvalidArgumentError("n must be nonnegative");
  return GammaPrefixEvaluator(B, n, r_max);
}

GammaPrefixEvaluator::GammaPrefixEvaluator(uint64_t B, int64_t n,
                                           size_t r_max)
    : b_(static_cast<double>(B)),
      log_q_(std::log1p(-1.0 / static_cast<double>(B))),
      n_(n),
      r_max_(r_max),
      xi_(r_max + 2, 0.0) {
  xi_[0] = 1.0;
}

int64_t GammaPrefixEvaluator::previous() const {
  return committed_.empty() ? n_ : committed_.back();
}

double GammaPrefixEvaluator::Evaluate(int64_t mid) const {
  const size_t r = this->r();
  if (r == 1) {
    return -b_ * std::expm1(static_cast<double>(mid) * log_q_);
  }
  // A bucket reaches r if it gets an entry of value >= r, or two entries of
  // value r - 1, or one of them plus anything, or enough small entries.
  const double c = static_cast<double>(previous());
  const double a = c - static_cast<double>(mid);
  const double q_c = std::exp(c * log_q_);
  const double miss = -std::expm1(c * log_q_);
  const double one_mid_entry =
      a > 0 ? (a / b_) * std::exp((c - 1.0) * log_q_) : 0.0;
  const double xi_r = r < xi_.size() ? xi_[r] : 0.0;
  return b_ * (miss + q_c * xi_r - one_mid_entry * (1.0 - xi_[1]));
}

void GammaPrefixEvaluator::AddEntry(int64_t value) {
  AddToXi(xi_, value, b_);
}

absl::Status GammaPrefixEvaluator::Commit(int64_t value) {
  if (value < 0 || value > previous()) {
    return absl::InvalidArgumentError(
        absl::StrCat("committed value ", value, " outside [0, ", previous(),
                     "]"));
  }
  if (committed_.size() >= r_max_) {
    return absl::OutOfRangeError("prefix evaluator is full");
  }
  // Entries of value r - 1 are now known: c_{r-1} - c_r of them.
  const size_t r = this->r();
  if (r >= 2) {
    const int64_t entries = previous() - value;
    for (int64_t j = 0; j < entries; ++j) {
      AddEntry(static_cast<int64_t>(r) - 1);
    }
  }
  committed_.push_back(value);
  return absl::OkStatus();
}

absl::StatusOr<MonteCarloEstimate> GammaBMonteCarlo(
    const AnonymizedHistogram& a, uint64_t B, size_t ell, int trials,
    uint64_t seed) {
  if (absl::Status s = CheckBuckets(B); !s.ok()) return s;
  if (trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  if (ell < 1) return absl::InvalidArgumentError("ell must be >= 1");
  double sum = 0;
  double sum_sq = 0;
  for (int t = 0; t < trials; ++t) {
    CounterRng rng(seed, static_cast<uint64_t>(t));
    std::unordered_map<uint64_t, Count> buckets;
    for (Count v : a.counts()) buckets[rng.UniformInt(B)] += v;
    double hits = 0;
    for (const auto& [bucket, total] : buckets) {
      if (total >= static_cast<Count>(ell)) hits += 1;
    }
    sum += hits;
    sum_sq += hits * hits;
  }
  MonteCarloEstimate est;
  est.mean = sum / trials;
  if (trials > 1) {
    const double var =
        std::max(0.0, (sum_sq - trials * est.mean * est.mean) / (trials - 1));
    est.std_error = std::sqrt(var / trials);
  }
  return est;
}

}  // namespace anonhist
