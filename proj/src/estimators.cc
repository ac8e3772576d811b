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

#include "src/estimators.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include "absl/strings/str_cat.h"
#include "src/hashing.h"
#include "src/isotonic.h"
#include "src/kernels.h"

namespace anonhist {

namespace {

// Number of noisy slots with value >= v, for every v in [lo, hi], from the
// value counts. out[v - lo].
std::vector<int64_t> SlotsAtLeast(const NoisedHistogram& nh, int64_t lo,
                                  int64_t hi) {
  std::vector<int64_t> out(hi >= lo ? hi - lo + 1 : 0, 0);
  int64_t above = 0;  // slots with value > hi
  const auto& vc = nh.value_counts();
  for (auto it = vc.rbegin(); it != vc.rend() && it->first > hi; ++it) {
    above += static_cast<int64_t>(it->second);
  }
  int64_t running = above;
  for (int64_t v = hi; v >= lo; --v) {
    auto it = vc.find(v);
    if (it != vc.end()) running += static_cast<int64_t>(it->second);
    out[v - lo] = running;
  }
  return out;
}

int64_t MaxNoisyValue(const NoisedHistogram& nh) {
  return nh.value_counts().empty() ? 0 : nh.value_counts().rbegin()->first;
}

int64_t MinNoisyValue(const NoisedHistogram& nh) {
  return nh.value_counts().empty() ? 0 : nh.value_counts().begin()->first;
}

// Total used when n is not public.
int64_t EstimatedTotal(const NoisedHistogram& nh) {
  return std::max<int64_t>(nh.NoisyTotal(), 0);
}

size_t RangeFor(int64_t n, const NoisedHistogram& nh) {
  return static_cast<size_t>(
      std::max<int64_t>({n, MaxNoisyValue(nh), int64_t{1}}));
}

absl::StatusOr<AnonymizedHistogram> FromValues(std::vector<int64_t> values) {
  return FromCumulativePrevalence(std::span<const int64_t>(values));
}

// Projects `targets` onto sequences within gamma of n_{h'} in every rank.
absl::StatusOr<Estimate> BoxedProjection(const NoisedHistogram& around,
                                         std::vector<double> targets,
                                         std::optional<int64_t> n,
                                         int64_t gamma) {
  Estimate est;
  est.gamma = gamma;
  const int64_t r_max = static_cast<int64_t>(targets.size());
  const uint64_t domain = around.domain_size();

  // Rank j needs n_hat_j in [n'_j - gamma, n'_j + gamma] and n_hat_j >= 0.
  // The lower end must also fit under r_max (and under n when given).
  const int64_t ceiling = n ? std::min<int64_t>(*n, r_max) : r_max;
  if (MinNoisyValue(around) + gamma < 0 ||
      MaxNoisyValue(around) - gamma > ceiling) {
    est.fallback = true;
    return est;
  }
  // #{j : n'_j >= v} for v in [1 - gamma, r_max + gamma].
  const int64_t lo = 1 - gamma;
  const std::vector<int64_t> at_least = SlotsAtLeast(around, lo, r_max + gamma);
  ProjectionSpec spec;
  spec.lower.emplace(r_max);
  spec.upper.emplace(r_max);
  for (int64_t r = 1; r <= r_max; ++r) {
    (*spec.lower)[r - 1] = at_least[r + gamma - lo];
    (*spec.upper)[r - 1] = at_least[r - gamma - lo];
  }
  spec.value_cap = static_cast<int64_t>(
      std::min<uint64_t>(domain, std::numeric_limits<int64_t>::max()));
  spec.targets = std::move(targets);
  if (n) spec.sum_constraint = *n;

  auto projection = Project(spec);
  if (!projection.ok()) return projection.status();
  if (!projection->feasible) {
    est.fallback = true;
    return est;
  }
  auto hist = FromValues(std::move(projection->values));
  if (!hist.ok()) return hist.status();
  est.histogram = *std::move(hist);
  return est;
}

std::vector<double> ToDoubles(const CumulativePrevalence& c) {
  return std::vector<double>(c.values().begin(), c.values().end());
}

absl::Status CheckTotal(int64_t n) {
  if (n < 0) return absl::InvalidArgumentError("n must be nonnegative");
  return absl::OkStatus();
}

// All partitions of n as nonincreasing vectors, in lexicographic order.
void Partitions(int64_t remaining, int64_t max_part, std::vector<Count>& cur,
                const std::function<void(const std::vector<Count>&)>& visit) {
  if (remaining == 0) {
    visit(cur);
    return;
  }
  for (int64_t part = 1; part <= std::min(remaining, max_part); ++part) {
    cur.push_back(part);
    Partitions(remaining - part, part, cur, visit);
    cur.pop_back();
  }
}

}  // namespace

std::string_view EstimatorModeName(EstimatorMode mode) {
  switch (mode) {
    case EstimatorMode::kSmallL1:
      return "small-l1";
    case EstimatorMode::kSmallL2sq:
      return "small-l2sq";
    case EstimatorMode::kLargeL1Reference:
      return "large-l1-reference";
    case EstimatorMode::kLargeL1Fast:
      return "large-l1-fast";
    case EstimatorMode::kLargeL2sq:
      return "large-l2sq";
  }
  return "unknown";
}

absl::StatusOr<EstimatorMode> ParseEstimatorMode(std::string_view name) {
  for (EstimatorMode m :
       {EstimatorMode::kSmallL1, EstimatorMode::kSmallL2sq,
        EstimatorMode::kLargeL1Reference, EstimatorMode::kLargeL1Fast,
        EstimatorMode::kLargeL2sq}) {
    if (EstimatorModeName(m) == name) return m;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown estimator mode '", std::string(name), "'"));
}

int64_t DefaultGamma(int64_t n, uint64_t domain_size, double p) {
  const double v = 10.0 *
                   std::log(2.0 * std::max<double>(n, 1) *
                            static_cast<double>(domain_size)) /
                   std::log(1.0 / p);
  return static_cast<int64_t>(std::ceil(v));
}

size_t DefaultHead(uint64_t domain_size, double p) {
  const double v =
      10.0 * std::log(static_cast<double>(domain_size)) / std::log(1.0 / p);
  return std::max<size_t>(1, static_cast<size_t>(std::ceil(v)));
}

uint64_t DefaultFastBuckets(int64_t n, size_t head) {
  return 10 * static_cast<uint64_t>(std::max<int64_t>(n, 1)) * head;
}

uint64_t DefaultHashBuckets(int64_t n) {
  if (n < 2) return 2;
  const double root = std::ceil(std::sqrt(std::log(static_cast<double>(n))));
  return std::max<uint64_t>(2, static_cast<uint64_t>(n) *
                                   static_cast<uint64_t>(root));
}

uint64_t DefaultSecondBuckets(int64_t n) {
  constexpr uint64_t kCap = uint64_t{1} << 32;
  const double n4 = std::pow(static_cast<double>(std::max<int64_t>(n, 2)), 4);
  return n4 >= static_cast<double>(kCap) ? kCap : static_cast<uint64_t>(n4);
}

double CollisionBound(int64_t n, uint64_t B) {
  return static_cast<double>(n) * static_cast<double>(n) /
         static_cast<double>(B);
}

absl::StatusOr<AnonymizedHistogram> EstimateSmallL1(const NoisedHistogram& nh,
                                                    size_t r_max) {
  auto phi = EstimateCumulativePrevalence(nh, r_max);
  if (!phi.ok()) return phi.status();
  return FromValues(IsotonicL1(phi->values()));
}

absl::StatusOr<Estimate> EstimateSmallL2sq(const NoisedHistogram& nh,
                                           std::optional<int64_t> n,
                                           int64_t gamma) {
  if (n) {
    if (absl::Status s = CheckTotal(*n); !s.ok()) return s;
  }
  const int64_t total = n ? *n : EstimatedTotal(nh);
  if (gamma <= 0) gamma = DefaultGamma(total, nh.domain_size(), nh.p());
  const size_t r_max = n ? static_cast<size_t>(std::max<int64_t>(*n, 1))
                         : RangeFor(total, nh);
  auto phi = EstimateCumulativePrevalence(nh, r_max);
  if (!phi.ok()) return phi.status();
  auto est = BoxedProjection(nh, ToDoubles(*phi), n, gamma);
  if (!est.ok()) return est.status();
  est->n = total;
  est->n_estimated = !n.has_value();
  return est;
}

absl::StatusOr<double> ReferenceObjective(const AnonymizedHistogram& candidate,
                                          const AnonymizedHistogram& reduced,
                                          uint64_t B) {
  const size_t r_max = static_cast<size_t>(
      std::max<int64_t>({candidate.total(), reduced.max_count(), 1}));
  auto gamma = GammaBVector(candidate, B, r_max);
  if (!gamma.ok()) return gamma.status();
  auto target = CumulativePrevalenceOf(reduced, r_max);
  if (!target.ok()) return target.status();
  double cost = 0;
  for (size_t r = 1; r <= r_max; ++r) {
    cost += std::abs((*gamma)[r - 1] - target->at(r));
  }
  return cost;
}

absl::StatusOr<AnonymizedHistogram> EstimateLargeReference(
    const NoisedHistogram& nh_red, int64_t n) {
  if (absl::Status s = CheckTotal(n); !s.ok()) return s;
  if (n > kReferenceMaxN) {
    return absl::InvalidArgumentError(
        absl::StrCat("reference estimator enumerates partitions only up to n = ",
                     kReferenceMaxN, ", got ", n));
  }
  if (n == 0) return AnonymizedHistogram();
  auto reduced =
      EstimateSmallL1(nh_red, static_cast<size_t>(std::max<int64_t>(n, 1)));
  if (!reduced.ok()) return reduced.status();
  const uint64_t B = nh_red.domain_size();

  // Lexicographically ascending order: visit with ascending first part.
  std::vector<std::vector<Count>> all;
  std::vector<Count> cur;
  Partitions(n, n, cur, [&](const std::vector<Count>& p) { all.push_back(p); });
  std::sort(all.begin(), all.end());

  double best_cost = std::numeric_limits<double>::infinity();
  AnonymizedHistogram best;
  for (const auto& p : all) {
    auto cand = *AnonymizedHistogram::Create(p);
    auto cost = ReferenceObjective(cand, *reduced, B);
    if (!cost.ok()) return cost.status();
    if (*cost < best_cost - 1e-12) {
      best_cost = *cost;
      best = std::move(cand);
    }
  }
  return best;
}

absl::StatusOr<AnonymizedHistogram> EstimateLargeFast(
    const NoisedHistogram& nh_full, const NoisedHistogram& nh_red, int64_t n,
    size_t head, bool check_buckets, LargeFastTrace* trace) {
  if (absl::Status s = CheckTotal(n); !s.ok()) return s;
  if (head == 0) head = DefaultHead(nh_full.domain_size(), nh_full.p());
  const uint64_t B = nh_red.domain_size();
  if (check_buckets &&
      static_cast<double>(B) <= 3.0 * static_cast<double>(n) * head) {
    return absl::InvalidArgumentError(absl::StrCat(
        "bucket count B = ", B, " must exceed 3 n m = ", 3 * n * head));
  }
  if (n == 0) return AnonymizedHistogram();
  const size_t r_max = static_cast<size_t>(n);
  auto full = EstimateSmallL1(nh_full, r_max);
  if (!full.ok()) return full.status();
  auto red = EstimateSmallL1(nh_red, r_max);
  if (!red.ok()) return red.status();
  const CumulativePrevalence full_phi = *CumulativePrevalenceOf(*full, r_max, true);
  const CumulativePrevalence red_phi = *CumulativePrevalenceOf(*red, r_max, true);

  const size_t h = std::min(head, r_max);
  auto eval = GammaPrefixEvaluator::Create(B, n, h);
  if (!eval.ok()) return eval.status();
  std::vector<double> targets(r_max);
  for (size_t r = 1; r <= h; ++r) {
    const double target = red_phi.at(r);
    int64_t lb = 0;
    int64_t ub = eval->previous();
    while (ub > lb + 1) {
      const int64_t mid = lb + (ub - lb) / 2;
      if (eval->Evaluate(mid) >= target) {
        ub = mid;
      } else {
        lb = mid;
      }
    }
    const double v_lb = eval->Evaluate(lb);
    const double v_ub = eval->Evaluate(ub);
    const int64_t chosen =
        std::abs(v_lb - target) <= std::abs(v_ub - target) ? lb : ub;
    if (absl::Status s = eval->Commit(chosen); !s.ok()) return s;
    targets[r - 1] = static_cast<double>(chosen);
    if (trace != nullptr) trace->head_target.push_back(target);
  }
  for (size_t r = h + 1; r <= r_max; ++r) targets[r - 1] = full_phi.at(r);
  if (trace != nullptr) trace->head = eval->committed();
  return FromValues(IsotonicL1(targets));
}

absl::StatusOr<Estimate> EstimateLargeL2sq(const NoisedHistogram& nh_red1,
                                           const NoisedHistogram& nh_red2,
                                           std::optional<int64_t> n,
                                           int64_t gamma, size_t head) {
  if (n) {
    if (absl::Status s = CheckTotal(*n); !s.ok()) return s;
  }
  const int64_t total = n ? *n : EstimatedTotal(nh_red1);
  if (gamma <= 0) gamma = DefaultGamma(total, nh_red2.domain_size(), nh_red2.p());
  if (head == 0) head = DefaultHead(nh_red2.domain_size(), nh_red2.p());
  auto first = EstimateLargeFast(nh_red2, nh_red1, total, head,
                                 /*check_buckets=*/false);
  if (!first.ok()) return first.status();
  const size_t r_max = static_cast<size_t>(std::max<int64_t>(total, 1));
  auto phi = CumulativePrevalenceOf(*first, r_max, true);
  if (!phi.ok()) return phi.status();
  auto est = BoxedProjection(nh_red2, ToDoubles(*phi), n, gamma);
  if (!est.ok()) return est.status();
  est->n = total;
  est->n_estimated = !n.has_value();
  est->head = head;
  return est;
}

int64_t RankLinfToNoisy(const AnonymizedHistogram& a,
                        const NoisedHistogram& nh) {
  int64_t worst = 0;
  uint64_t rank = 0;
  const auto counts = a.counts();
  const auto& vc = nh.value_counts();
  for (auto it = vc.rbegin(); it != vc.rend(); ++it) {
    const int64_t v = it->first;
    const uint64_t end = rank + it->second;
    // Ranks [rank, end) hold v; past a.size() the estimate is zero.
    for (; rank < end && rank < counts.size(); ++rank) {
      worst = std::max<int64_t>(worst, std::abs(counts[rank] - v));
    }
    if (rank < end) {
      worst = std::max<int64_t>(worst, std::abs(v));
      rank = end;
    }
  }
  for (; rank < counts.size(); ++rank) {
    worst = std::max<int64_t>(worst, counts[rank]);
  }
  return worst;
}

absl::StatusOr<Estimate> RunEstimator(const NoisedHistogram& primary,
                                      const NoisedHistogram* secondary,
                                      const EstimatorConfig& cfg) {
  const bool two_inputs = cfg.mode == EstimatorMode::kLargeL1Fast ||
                          cfg.mode == EstimatorMode::kLargeL2sq;
  if (two_inputs && secondary == nullptr) {
    return absl::InvalidArgumentError(
        absl::StrCat(std::string(EstimatorModeName(cfg.mode)),
                     " needs a second noised histogram"));
  }
  switch (cfg.mode) {
    case EstimatorMode::kSmallL2sq:
      return EstimateSmallL2sq(primary, cfg.n, cfg.gamma);
    case EstimatorMode::kLargeL2sq:
      return EstimateLargeL2sq(primary, *secondary, cfg.n, cfg.gamma, cfg.head);
    default:
      break;
  }
  Estimate est;
  est.n_estimated = !cfg.n.has_value();
  absl::StatusOr<AnonymizedHistogram> hist;
  switch (cfg.mode) {
    case EstimatorMode::kSmallL1: {
      est.n = cfg.n ? *cfg.n : EstimatedTotal(primary);
      hist = EstimateSmallL1(primary, cfg.n ? static_cast<size_t>(
                                                  std::max<int64_t>(*cfg.n, 1))
                                            : RangeFor(est.n, primary));
      break;
    }
    case EstimatorMode::kLargeL1Reference:
      if (!cfg.n) {
        return absl::InvalidArgumentError(
            "large-l1-reference needs the public total n");
      }
      est.n = *cfg.n;
      hist = EstimateLargeReference(primary, *cfg.n);
      break;
    case EstimatorMode::kLargeL1Fast:
      est.n = cfg.n ? *cfg.n : EstimatedTotal(primary);
      est.head = cfg.head ? cfg.head
                          : DefaultHead(primary.domain_size(), primary.p());
      hist = EstimateLargeFast(primary, *secondary, est.n, est.head);
      break;
    default:
      return absl::InternalError("unhandled estimator mode");
  }
  if (!hist.ok()) return hist.status();
  est.histogram = *std::move(hist);
  return est;
}

}  // namespace anonhist
