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

#ifndef ANONHIST_SRC_HARNESS_H_
#define ANONHIST_SRC_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "src/core.h"
#include "src/estimators.h"
#include "src/properties.h"

namespace anonhist {

enum class GeneratorKind { kUniform, kZipf, kGeometric, kTwoSpike };

// uniform(k), zipf(k, s), geometric(k, q) draw n i.i.d. samples over the
// first k items (k = 0 means k = D). two-spike(B) is deterministic:
// c = ceil(10 sqrt(B)) items of value q = floor(n / c), or with `variant`
// c - 2 items of value q and one of value 2q.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kUniform;
  uint64_t k = 0;
  double s = 1.0;
  double q = 0.5;
  uint64_t B = 0;
  bool variant = false;
};

// Text form: "uniform:k=50", "zipf:k=100:s=1", "geometric:k=100:q=0.5",
// "two-spike:B=10000" or "two-spike:B=10000:variant=1".
absl::StatusOr<GeneratorSpec> ParseGenerator(std::string_view text);
std::string GeneratorName(const GeneratorSpec& spec);

struct TwoSpikeShape {
  uint64_t c = 0;
  int64_t q = 0;
};
TwoSpikeShape TwoSpike(uint64_t B, int64_t n);

// The sample stream (item ids in [0, D)).
absl::StatusOr<std::vector<ItemId>> GenerateItems(const GeneratorSpec& spec,
                                                  int64_t n, uint64_t D,
                                                  uint64_t seed);
absl::StatusOr<Histogram> Generate(const GeneratorSpec& spec, int64_t n,
                                   uint64_t D, uint64_t seed);

// End-to-end pipelines: an estimator mode plus "hashed-small-l2sq", which
// hashes once into B buckets and runs the small-domain l2sq estimator on
// the reduced histogram.
inline constexpr std::string_view kHashedSmallL2sq = "hashed-small-l2sq";
absl::Status ValidatePipeline(std::string_view pipeline);

struct Cell {
  GeneratorSpec generator;
  int64_t n = 0;
  uint64_t D = 0;
  double epsilon = 1.0;
  std::string pipeline = "small-l1";
  // Unset: central for single-histogram pipelines, two-hist otherwise.
  std::optional<PrivacyMode> privacy;
  uint64_t B = 0;   // 0: pipeline default
  uint64_t B2 = 0;  // 0: pipeline default
  int64_t gamma = 0;
  size_t head = 0;
};

struct ExperimentPlan {
  GeneratorSpec generator;
  std::vector<int64_t> n;
  std::vector<uint64_t> D;  // 0 entries mean D = n
  std::vector<double> epsilon;
  int trials = 1;
  uint64_t seed = 1;
  std::string pipeline = "small-l1";
  std::optional<PrivacyMode> privacy;
  uint64_t B = 0;
  uint64_t B2 = 0;
  int64_t gamma = 0;
  size_t head = 0;
  // Wall-clock runtimes break byte-identical reruns, so they are only
  // recorded on request.
  bool timing = false;
  std::string out;
};

absl::StatusOr<ExperimentPlan> ParsePlan(std::string_view json_text);
std::string PlanToJson(const ExperimentPlan& plan);
// Cells in (n, D, epsilon) row-major order.
std::vector<Cell> ExpandCells(const ExperimentPlan& plan);

struct ResultRow {
  std::string generator;
  int64_t n = 0;
  uint64_t D = 0;
  double epsilon = 0;
  std::string mode;
  int trial = 0;
  int64_t l1_error = 0;
  int64_t l2sq_error = 0;
  int64_t linf_error = 0;
  double runtime_ms = 0;
  bool fallback = false;
};

struct TrialOutput {
  ResultRow row;
  AnonymizedHistogram truth;
  Estimate estimate;
  // For l2sq pipelines: rank-wise l-infinity distance between the estimate
  // and the noisy histogram the box was built around.
  std::optional<int64_t> box_linf;
};

// Seed of trial t of cell c: independent of the number of cells or trials.
uint64_t TrialSeed(uint64_t master_seed, size_t cell_index, int trial);

absl::StatusOr<TrialOutput> RunTrial(const Cell& cell, int trial,
                                     uint64_t trial_seed, bool timing = false);

// Runs every cell and trial on up to `threads` workers (0: ANONHIST_THREADS
// or hardware concurrency). Rows come back in (cell, trial) order. When the
// plan names an output file the CSV is written there; on failure the rows of
// all cells before the failing one are written first.
absl::StatusOr<std::vector<ResultRow>> RunPlan(const ExperimentPlan& plan,
                                               int threads = 0);
int ThreadsFromEnv();

// Noises `h` under `params` (one noise draw per repeat), runs the
// small-domain l1 estimator with the public total, evaluates the plug-in
// property and returns the median over req.repeats runs. For coverage
// properties `h` must be batch-augmented.
absl::StatusOr<double> PrivateProperty(const Histogram& h,
                                       const PropertyRequest& req,
                                       const PrivacyParams& params,
                                       uint64_t seed,
                                       std::vector<double>* per_repeat = nullptr);

inline constexpr std::string_view kResultsHeader =
    "generator,n,D,epsilon,mode,trial,l1_error,l2sq_error,linf_error,"
    "runtime_ms,fallback";
std::string FormatResultsCsv(const std::vector<ResultRow>& rows);
absl::StatusOr<std::vector<ResultRow>> ParseResultsCsv(std::string_view text);

struct Stats {
  double mean = 0;
  double stddev = 0;  // sample standard deviation; 0 for a single row
};

struct CellSummary {
  std::string generator;
  int64_t n = 0;
  uint64_t D = 0;
  double epsilon = 0;
  std::string mode;
  int rows = 0;
  Stats l1, l2sq, linf, runtime_ms;
  int fallbacks = 0;
  // mean l1 / sqrt(n ln n)
  double l1_ratio = 0;
};

std::vector<CellSummary> Summarize(const std::vector<ResultRow>& rows);
std::string FormatSummaryText(const std::vector<CellSummary>& cells);
std::string FormatSummaryCsv(const std::vector<CellSummary>& cells);

}  // namespace anonhist

#endif  // ANONHIST_SRC_HARNESS_H_
