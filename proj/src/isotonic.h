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

#ifndef ANONHIST_SRC_ISOTONIC_H_
#define ANONHIST_SRC_ISOTONIC_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace anonhist {

// Projection of a target sequence onto nonincreasing nonnegative integer
// sequences of the same length, under the l1 distance.
struct ProjectionSpec {
  std::vector<double> targets;
  // Per-index box; lower defaults to 0, upper to unbounded.
  std::optional<std::vector<int64_t>> lower;
  std::optional<std::vector<int64_t>> upper;
  // Required sum of the output.
  std::optional<int64_t> sum_constraint;
  // Every output entry is at most this (the domain size, for prevalences).
  std::optional<int64_t> value_cap;
};

struct Projection {
  // False when no sequence satisfies the constraints. `values` is then empty.
  bool feasible = true;
  std::vector<int64_t> values;
  double cost = 0;  // sum_r |values[r] - targets[r]|
};

double L1Cost(std::span<const int64_t> values, std::span<const double> targets);

// Exact minimizer of sum_r |out[r] - targets[r]| over nonincreasing,
// nonnegative integer sequences. Among minimizers, each entry is as small as
// possible. O(L log L).
std::vector<int64_t> IsotonicL1(std::span<const double> targets);

// As IsotonicL1, restricted to lower[r] <= out[r] <= min(upper[r], cap). The
// sum constraint, if any, is ignored here. Errors only on malformed specs.
absl::StatusOr<Projection> IsotonicL1Boxed(const ProjectionSpec& spec);

// Moves a feasible nonincreasing sequence one unit at a time, always taking
// the cheapest move that keeps it nonincreasing and inside the box, until it
// sums to spec.sum_constraint. Infeasible when no move is left.
absl::StatusOr<Projection> RepairSum(std::vector<int64_t> seq,
                                     const ProjectionSpec& spec);

// IsotonicL1Boxed followed by RepairSum when a sum is requested.
absl::StatusOr<Projection> Project(const ProjectionSpec& spec);

}  // namespace anonhist

#endif  // ANONHIST_SRC_ISOTONIC_H_
