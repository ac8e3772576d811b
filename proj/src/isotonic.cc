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

#include "src/isotonic.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>

#include "absl/strings/str_cat.h"

namespace anonhist {

namespace {

constexpr int64_t kNoUpper = std::numeric_limits<int64_t>::max();
constexpr double kWeightEps = 1e-9;

absl::Status ValidateSpec(const ProjectionSpec& spec) {
  const size_t n = spec.targets.size();
  for (double t : spec.targets) {
    if (!std::isfinite(t)) {
      return absl::InvalidArgumentError("projection targets must be finite");
    }
  }
  if (spec.lower && spec.lower->size() != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("lower bound has length ", spec.lower->size(),
                     ", targets have length ", n));
  }
  if (spec.upper && spec.upper->size() != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("upper bound has length ", spec.upper->size(),
                     ", targets have length ", n));
  }
  if (spec.value_cap && *spec.value_cap < 0) {
    return absl::InvalidArgumentError("value cap must be nonnegative");
  }
  return absl::OkStatus();
}

int64_t LowerAt(const ProjectionSpec& spec, size_t r) {
  return spec.lower ? std::max<int64_t>((*spec.lower)[r], 0) : 0;
}

int64_t UpperAt(const ProjectionSpec& spec, size_t r) {
  int64_t u = spec.upper ? (*spec.upper)[r] : kNoUpper;
  if (spec.value_cap) u = std::min(u, *spec.value_cap);
  return u;
}

// Breakpoint of the running convex cost: (position, slope weight).
using Breakpoint = std::pair<int64_t, double>;

struct ByPosition {
  bool operator()(const Breakpoint& a, const Breakpoint& b) const {
    return a.first < b.first;
  }
};

}  // namespace

double L1Cost(std::span<const int64_t> values,
              std::span<const double> targets) {
  double cost = 0;
  for (size_t r = 0; r < values.size() && r < targets.size(); ++r) {
    cost += std::abs(static_cast<double>(values[r]) - targets[r]);
  }
  return cost;
}

absl::StatusOr<Projection> IsotonicL1Boxed(const ProjectionSpec& spec) {
  if (absl::Status s = ValidateSpec(spec); !s.ok()) return s;
  const size_t len = spec.targets.size();
  Projection result;
  if (len == 0) return result;

  // Solved on the reversed sequence, which must be nondecreasing. For
  // integer y, |y - t| = (1 - a)|y - floor(t)| + a|y - floor(t) - 1| with a
  // the fractional part of t, so each target adds two weighted integer
  // breakpoints. The heap holds the breakpoints of the prefix-minimized
  // cost; `floor` is the running maximum of the lower bounds.
  std::priority_queue<Breakpoint, std::vector<Breakpoint>, ByPosition> heap;
  std::vector<int64_t> opt(len);
  int64_t floor = 0;
  for (size_t i = 0; i < len; ++i) {
    const size_t r = len - 1 - i;
    floor = std::max(floor, LowerAt(spec, r));
    const int64_t upper = UpperAt(spec, r);
    if (upper < floor) {
      result.feasible = false;
      return result;
    }

    const double t = spec.targets[r];
    const double base = std::floor(t);
    const double frac = t - base;
    const int64_t b = static_cast<int64_t>(base);
    if (1.0 - frac > kWeightEps) heap.emplace(std::max(b, floor), 2.0 * (1.0 - frac));
    if (frac > kWeightEps) heap.emplace(std::max(b + 1, floor), 2.0 * frac);

    // Prefix minimum: drop unit slope weight from the right end.
    double to_pop = 1.0;
    while (to_pop > kWeightEps && !heap.empty() && heap.top().first > floor) {
      Breakpoint top = heap.top();
      heap.pop();
      if (top.second > to_pop + kWeightEps) {
        top.second -= to_pop;
        heap.push(top);
        to_pop = 0;
      } else {
        to_pop -= top.second;
      }
    }
    // Beyond the upper bound the cost is flat.
    if (!heap.empty() && heap.top().first > upper) {
      double moved = 0;
      while (!heap.empty() && heap.top().first > upper) {
        moved += heap.top().second;
        heap.pop();
      }
      heap.emplace(upper, moved);
    }
    opt[i] = heap.empty() ? floor : std::max(heap.top().first, floor);
  }

  std::vector<int64_t> y(len);
  y[len - 1] = opt[len - 1];
  for (size_t i = len - 1; i-- > 0;) y[i] = std::min(y[i + 1], opt[i]);
  result.values.assign(y.rbegin(), y.rend());
  result.cost = L1Cost(result.values, spec.targets);
  return result;
}

std::vector<int64_t> IsotonicL1(std::span<const double> targets) {
  ProjectionSpec spec;
  spec.targets.assign(targets.begin(), targets.end());
  return IsotonicL1Boxed(spec)->values;
}

absl::StatusOr<Projection> RepairSum(std::vector<int64_t> seq,
                                     const ProjectionSpec& spec) {
  if (absl::Status s = ValidateSpec(spec); !s.ok()) return s;
  const size_t len = seq.size();
  if (len != spec.targets.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("sequence has length ", len, ", targets have length ",
                     spec.targets.size()));
  }
  for (size_t r = 0; r < len; ++r) {
    if (seq[r] < LowerAt(spec, r) || seq[r] > UpperAt(spec, r) ||
        (r + 1 < len && seq[r] < seq[r + 1])) {
      return absl::InvalidArgumentError(
          absl::StrCat("sequence is not nonincreasing within its box at ", r));
    }
  }
  Projection result;
  if (!spec.sum_constraint) {
    result.cost = L1Cost(seq, spec.targets);
    result.values = std::move(seq);
    return result;
  }
  const int64_t want = *spec.sum_constraint;
  int64_t sum = 0;
  for (int64_t v : seq) sum += v;

  auto delta_cost = [&](size_t r, int64_t step) {
    const double t = spec.targets[r];
    return std::abs(static_cast<double>(seq[r] + step) - t) -
           std::abs(static_cast<double>(seq[r]) - t);
  };
  while (sum != want) {
    const int64_t step = sum > want ? -1 : 1;
    size_t best = len;
    double best_cost = std::numeric_limits<double>::infinity();
    for (size_t r = 0; r < len; ++r) {
      if (step < 0) {
        // Only the last entry of a run of equal values can go down.
        if (r + 1 < len && seq[r + 1] == seq[r]) continue;
        if (seq[r] - 1 < LowerAt(spec, r)) continue;
      } else {
        // Only the first entry of a run can go up.
        if (r > 0 && seq[r - 1] == seq[r]) continue;
        if (seq[r] + 1 > UpperAt(spec, r)) continue;
      }
      const double c = delta_cost(r, step);
      if (c < best_cost) {
        best_cost = c;
        best = r;
      }
    }
    if (best == len) {
      result.feasible = false;
      return result;
    }
    seq[best] += step;
    sum += step;
  }
  result.cost = L1Cost(seq, spec.targets);
  result.values = std::move(seq);
  return result;
}

absl::StatusOr<Projection> Project(const ProjectionSpec& spec) {
  auto boxed = IsotonicL1Boxed(spec);
  if (!boxed.ok() || !boxed->feasible || !spec.sum_constraint) return boxed;
  return RepairSum(std::move(boxed->values), spec);
}

}  // namespace anonhist
