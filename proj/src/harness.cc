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

#include "src/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "json.hpp"
#include "src/hashing.h"
#include "src/io.h"
#include "src/noise.h"
#include "src/random.h"

namespace anonhist {

namespace {

using json = nlohmann::json;

// Sub-streams of a trial seed.
constexpr uint64_t kGenerateStream = 10;
constexpr uint64_t kNoiseStream1 = 11;
constexpr uint64_t kNoiseStream2 = 12;
constexpr uint64_t kHashStream1 = 13;
constexpr uint64_t kHashStream2 = 14;

absl::string_view AV(std::string_view s) { return {s.data(), s.size()}; }

std::string Fmt(double v) { return absl::StrFormat("%g", v); }

std::vector<double> SamplingWeights(const GeneratorSpec& spec, uint64_t k) {
  std::vector<double> w(k);
  for (uint64_t i = 0; i < k; ++i) {
    switch (spec.kind) {
      case GeneratorKind::kZipf:
        w[i] = std::pow(static_cast<double>(i + 1), -spec.s);
        break;
      case GeneratorKind::kGeometric:
        w[i] = std::pow(spec.q, static_cast<double>(i));
        break;
      default:
        w[i] = 1.0;
    }
  }
  return w;
}

absl::StatusOr<NoisedHistogram> NoiseAny(const Histogram& h,
                                         const PrivacyParams& params,
                                         uint64_t seed) {
  return NoiseHistogramAuto(h, params, seed);
}

PrivacyMode DefaultPrivacy(std::string_view pipeline) {
  if (pipeline == "large-l1-fast" || pipeline == "large-l2sq") {
    return PrivacyMode::kTwoHist;
  }
  return PrivacyMode::kCentralOneHist;
}

}  // namespace

absl::StatusOr<GeneratorSpec> ParseGenerator(std::string_view text) {
  std::vector<std::string> parts = absl::StrSplit(AV(text), ':');
  if (parts.empty()) return absl::InvalidArgumentError("empty generator");
  GeneratorSpec spec;
  const std::string& kind = parts[0];
  if (kind == "uniform") {
    spec.kind = GeneratorKind::kUniform;
  } else if (kind == "zipf") {
    spec.kind = GeneratorKind::kZipf;
  } else if (kind == "geometric") {
    spec.kind = GeneratorKind::kGeometric;
  } else if (kind == "two-spike") {
    spec.kind = GeneratorKind::kTwoSpike;
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown generator '", kind, "'"));
  }
  for (size_t i = 1; i < parts.size(); ++i) {
    std::vector<std::string> kv = absl::StrSplit(parts[i], '=');
    bool ok = kv.size() == 2;
    if (ok) {
      const std::string& key = kv[0];
      const std::string& value = kv[1];
      if (key == "k") {
        ok = absl::SimpleAtoi(value, &spec.k);
      } else if (key == "s") {
        ok = absl::SimpleAtod(value, &spec.s);
      } else if (key == "q") {
        ok = absl::SimpleAtod(value, &spec.q) && spec.q > 0 && spec.q < 1;
      } else if (key == "B") {
        ok = absl::SimpleAtoi(value, &spec.B) && spec.B >= 1;
      } else if (key == "variant") {
        int v = 0;
        ok = absl::SimpleAtoi(value, &v);
        spec.variant = v != 0;
      } else {
        ok = false;
      }
    }
    if (!ok) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad generator parameter '", parts[i], "'"));
    }
  }
  if (spec.kind == GeneratorKind::kTwoSpike && spec.B == 0) {
    return absl::InvalidArgumentError("two-spike needs B");
  }
  return spec;
}

std::string GeneratorName(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::kUniform:
      return absl::StrCat("uniform:k=", spec.k);
    case GeneratorKind::kZipf:
      return absl::StrCat("zipf:k=", spec.k, ":s=", Fmt(spec.s));
    case GeneratorKind::kGeometric:
      return absl::StrCat("geometric:k=", spec.k, ":q=", Fmt(spec.q));
    case GeneratorKind::kTwoSpike:
      return absl::StrCat("two-spike:B=", spec.B,
                          spec.variant ? ":variant=1" : "");
  }
  return "unknown";
}

TwoSpikeShape TwoSpike(uint64_t B, int64_t n) {
  TwoSpikeShape shape;
  shape.c = static_cast<uint64_t>(std::ceil(10.0 * std::sqrt(static_cast<double>(B))));
  shape.q = n / static_cast<int64_t>(shape.c);
  return shape;
}

absl::StatusOr<std::vector<ItemId>> GenerateItems(const GeneratorSpec& spec,
                                                  int64_t n, uint64_t D,
                                                  uint64_t seed) {
  if (n < 0) return absl::InvalidArgumentError("n must be nonnegative");
  if (D == 0) return absl::InvalidArgumentError("D must be >= 1");
  std::vector<ItemId> items;
  if (spec.kind == GeneratorKind::kTwoSpike) {
    const TwoSpikeShape shape = TwoSpike(spec.B, n);
    if (shape.c > D) {
      return absl::InvalidArgumentError(absl::StrCat(
          "two-spike needs ", shape.c, " items but D = ", D));
    }
    if (spec.variant && shape.c < 2) {
      return absl::InvalidArgumentError("two-spike variant needs c >= 2");
    }
    const uint64_t plain = spec.variant ? shape.c - 2 : shape.c;
    for (uint64_t i = 0; i < plain; ++i) {
      items.insert(items.end(), shape.q, i);
    }
    if (spec.variant) items.insert(items.end(), 2 * shape.q, plain);
    return items;
  }
  const uint64_t k = spec.k == 0 ? D : spec.k;
  if (k > D) {
    return absl::InvalidArgumentError(
        absl::StrCat("generator support k = ", k, " exceeds D = ", D));
  }
  CounterRng rng(seed, kGenerateStream);
  items.reserve(n);
  if (spec.kind == GeneratorKind::kUniform) {
    for (int64_t i = 0; i < n; ++i) items.push_back(rng.UniformInt(k));
    return items;
  }
  std::vector<double> cdf = SamplingWeights(spec, k);
  for (uint64_t i = 1; i < k; ++i) cdf[i] += cdf[i - 1];
  const double total = cdf.back();
  for (int64_t i = 0; i < n; ++i) {
    const double u = rng.Uniform() * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    items.push_back(std::min<uint64_t>(it - cdf.begin(), k - 1));
  }
  return items;
}

absl::StatusOr<Histogram> Generate(const GeneratorSpec& spec, int64_t n,
                                   uint64_t D, uint64_t seed) {
  auto items = GenerateItems(spec, n, D, seed);
  if (!items.ok()) return items.status();
  return Histogram::FromItems(D, *items);
}

absl::Status ValidatePipeline(std::string_view pipeline) {
  if (pipeline == kHashedSmallL2sq) return absl::OkStatus();
  return ParseEstimatorMode(pipeline).status();
}

absl::StatusOr<ExperimentPlan> ParsePlan(std::string_view json_text) {
  json j = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("plan is not a JSON object");
  }
  ExperimentPlan plan;
  try {
    auto gen = ParseGenerator(j.at("generator").get<std::string>());
    if (!gen.ok()) return gen.status();
    plan.generator = *gen;
    auto list = [&](const char* key, auto& out) {
      const json& v = j.at(key);
      using T = typename std::decay_t<decltype(out)>::value_type;
      if (v.is_array()) {
        for (const json& x : v) out.push_back(x.get<T>());
      } else {
        out.push_back(v.get<T>());
      }
    };
    list("n", plan.n);
    if (j.contains("D")) {
      list("D", plan.D);
    } else {
      plan.D.push_back(0);
    }
    list("epsilon", plan.epsilon);
    plan.trials = j.value("trials", 1);
    plan.seed = j.value("seed", uint64_t{1});
    plan.pipeline = j.value("mode", std::string("small-l1"));
    if (j.contains("privacy")) {
      auto mode = ParsePrivacyMode(j.at("privacy").get<std::string>());
      if (!mode.ok()) return mode.status();
      plan.privacy = *mode;
    }
    plan.B = j.value("B", uint64_t{0});
    plan.B2 = j.value("B2", uint64_t{0});
    plan.gamma = j.value("gamma", int64_t{0});
    plan.head = j.value("head", size_t{0});
    plan.timing = j.value("timing", false);
    plan.out = j.value("out", std::string());
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("plan: ", e.what()));
  }
  if (plan.trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  if (plan.n.empty() || plan.epsilon.empty()) {
    return absl::InvalidArgumentError("plan needs n and epsilon values");
  }
  for (double e : plan.epsilon) {
    if (!(e > 0)) return absl::InvalidArgumentError("epsilon must be > 0");
  }
  for (int64_t n : plan.n) {
    if (n < 1) return absl::InvalidArgumentError("n must be >= 1");
  }
  if (absl::Status s = ValidatePipeline(plan.pipeline); !s.ok()) return s;
  return plan;
}

std::string PlanToJson(const ExperimentPlan& plan) {
  json j;
  j["generator"] = GeneratorName(plan.generator);
  j["n"] = plan.n;
  j["D"] = plan.D;
  j["epsilon"] = plan.epsilon;
  j["trials"] = plan.trials;
  j["seed"] = plan.seed;
  j["mode"] = plan.pipeline;
  if (plan.privacy) j["privacy"] = std::string(PrivacyModeName(*plan.privacy));
  j["B"] = plan.B;
  j["B2"] = plan.B2;
  j["gamma"] = plan.gamma;
  j["head"] = plan.head;
  j["timing"] = plan.timing;
  j["out"] = plan.out;
  return j.dump(2);
}

std::vector<Cell> ExpandCells(const ExperimentPlan& plan) {
  std::vector<Cell> cells;
  for (int64_t n : plan.n) {
    for (uint64_t d : plan.D) {
      for (double eps : plan.epsilon) {
        Cell c;
        c.generator = plan.generator;
        c.n = n;
        c.D = d == 0 ? static_cast<uint64_t>(n) : d;
        c.epsilon = eps;
        c.pipeline = plan.pipeline;
        c.privacy = plan.privacy;
        c.B = plan.B;
        c.B2 = plan.B2;
        c.gamma = plan.gamma;
        c.head = plan.head;
        cells.push_back(c);
      }
    }
  }
  return cells;
}

uint64_t TrialSeed(uint64_t master_seed, size_t cell_index, int trial) {
  return DeriveSeed(DeriveSeed(master_seed, cell_index),
                    static_cast<uint64_t>(trial));
}

absl::StatusOr<TrialOutput> RunTrial(const Cell& cell, int trial,
                                     uint64_t trial_seed, bool timing) {
  if (absl::Status s = ValidatePipeline(cell.pipeline); !s.ok()) return s;
  auto items = GenerateItems(cell.generator, cell.n, cell.D, trial_seed);
  if (!items.ok()) return items.status();
  auto hist = Histogram::FromItems(cell.D, *items);
  if (!hist.ok()) return hist.status();
  const int64_t n = hist->total();

  const PrivacyMode privacy =
      cell.privacy ? *cell.privacy : DefaultPrivacy(cell.pipeline);
  auto params = PrivacyParams::Create(cell.epsilon, privacy);
  if (!params.ok()) return params.status();
  const uint64_t noise1 = DeriveSeed(trial_seed, kNoiseStream1);
  const uint64_t noise2 = DeriveSeed(trial_seed, kNoiseStream2);

  TrialOutput out;
  out.truth = Anonymize(*hist);
  const auto start = std::chrono::steady_clock::now();

  auto reduce = [&](uint64_t B, uint64_t stream) -> absl::StatusOr<Histogram> {
    auto hr = HashReduction::Create(B, DeriveSeed(trial_seed, stream));
    if (!hr.ok()) return hr.status();
    return ReduceHistogram(*hist, *hr);
  };
  auto single = [&](const Histogram& h) -> absl::StatusOr<NoisedHistogram> {
    if (privacy == PrivacyMode::kPanPrivateStrict) {
      if (&h != &*hist) {
        return absl::InvalidArgumentError(
            "pan-private-strict mode needs an unhashed pipeline");
      }
      return PanPrivateRun(*items, cell.D, *params, noise1);
    }
    return NoiseAny(h, *params, noise1);
  };

  absl::StatusOr<Estimate> est;
  if (cell.pipeline == kHashedSmallL2sq) {
    const uint64_t B = cell.B ? cell.B : static_cast<uint64_t>(std::max<int64_t>(n, 1));
    auto red = reduce(B, kHashStream1);
    if (!red.ok()) return red.status();
    auto nh = single(*red);
    if (!nh.ok()) return nh.status();
    est = EstimateSmallL2sq(*nh, n, cell.gamma);
    if (est.ok() && !est->fallback) {
      out.box_linf = RankLinfToNoisy(est->histogram, *nh);
    }
  } else {
    EstimatorConfig cfg;
    cfg.mode = *ParseEstimatorMode(cell.pipeline);
    cfg.n = n;
    cfg.gamma = cell.gamma;
    cfg.head = cell.head;
    switch (cfg.mode) {
      case EstimatorMode::kSmallL1:
      case EstimatorMode::kSmallL2sq: {
        auto nh = single(*hist);
        if (!nh.ok()) return nh.status();
        est = RunEstimator(*nh, nullptr, cfg);
        if (cfg.mode == EstimatorMode::kSmallL2sq && est.ok() &&
            !est->fallback) {
          out.box_linf = RankLinfToNoisy(est->histogram, *nh);
        }
        break;
      }
      case EstimatorMode::kLargeL1Reference: {
        const uint64_t B = cell.B ? cell.B : DefaultHashBuckets(n);
        auto red = reduce(B, kHashStream1);
        if (!red.ok()) return red.status();
        auto nh = NoiseAny(*red, *params, noise1);
        if (!nh.ok()) return nh.status();
        est = RunEstimator(*nh, nullptr, cfg);
        break;
      }
      case EstimatorMode::kLargeL1Fast: {
        auto full = NoiseAny(*hist, *params, noise1);
        if (!full.ok()) return full.status();
        const size_t head = cell.head ? cell.head : DefaultHead(cell.D, params->p);
        const uint64_t B = cell.B ? cell.B : DefaultFastBuckets(n, head);
        auto red = reduce(B, kHashStream1);
        if (!red.ok()) return red.status();
        auto nh_red = NoiseAny(*red, *params, noise2);
        if (!nh_red.ok()) return nh_red.status();
        cfg.head = head;
        est = RunEstimator(*full, &*nh_red, cfg);
        break;
      }
      case EstimatorMode::kLargeL2sq: {
        const uint64_t B1 = cell.B ? cell.B : DefaultHashBuckets(n);
        const uint64_t B2 = cell.B2 ? cell.B2 : DefaultSecondBuckets(n);
        auto red1 = reduce(B1, kHashStream1);
        if (!red1.ok()) return red1.status();
        auto red2 = reduce(B2, kHashStream2);
        if (!red2.ok()) return red2.status();
        auto nh1 = NoiseAny(*red1, *params, noise1);
        if (!nh1.ok()) return nh1.status();
        auto nh2 = NoiseAny(*red2, *params, noise2);
        if (!nh2.ok()) return nh2.status();
        est = RunEstimator(*nh1, &*nh2, cfg);
        if (est.ok() && !est->fallback) {
          out.box_linf = RankLinfToNoisy(est->histogram, *nh2);
        }
        break;
      }
    }
  }
  if (!est.ok()) return est.status();
  const auto stop = std::chrono::steady_clock::now();

  out.estimate = *std::move(est);
  const Distances d = ComputeDistances(out.truth, out.estimate.histogram);
  if (d.l2sq > d.l1 * d.linf) {
    return absl::InternalError(absl::StrCat(
        "l2sq error ", d.l2sq, " exceeds l1 * linf = ", d.l1 * d.linf));
  }
  ResultRow& row = out.row;
  row.generator = GeneratorName(cell.generator);
  row.n = cell.n;
  row.D = cell.D;
  row.epsilon = cell.epsilon;
  row.mode = cell.pipeline;
  row.trial = trial;
  row.l1_error = d.l1;
  row.l2sq_error = d.l2sq;
  row.linf_error = d.linf;
  row.runtime_ms =
      timing ? std::chrono::duration<double, std::milli>(stop - start).count()
             : 0.0;
  row.fallback = out.estimate.fallback;
  return out;
}

absl::StatusOr<double> PrivateProperty(const Histogram& h,
                                       const PropertyRequest& req,
                                       const PrivacyParams& params,
                                       uint64_t seed,
                                       std::vector<double>* per_repeat) {
  if (req.repeats < 1 || req.repeats % 2 == 0) {
    return absl::InvalidArgumentError("repeats must be a positive odd number");
  }
  std::vector<ItemId> stream;
  if (params.mode == PrivacyMode::kPanPrivateStrict) {
    for (const auto& [item, count] : h.counts()) {
      stream.insert(stream.end(), static_cast<size_t>(count), item);
    }
  }
  const int64_t n = h.total();
  std::vector<double> values;
  for (int i = 0; i < req.repeats; ++i) {
    const uint64_t s = DeriveSeed(seed, static_cast<uint64_t>(i));
    absl::StatusOr<NoisedHistogram> nh =
        params.mode == PrivacyMode::kPanPrivateStrict
            ? PanPrivateRun(stream, h.domain_size(), params, s)
            : NoiseAny(h, params, s);
    if (!nh.ok()) return nh.status();
    auto est = EstimateSmallL1(*nh, static_cast<size_t>(std::max<int64_t>(n, 1)));
    if (!est.ok()) return est.status();
    auto v = Mechanism(*est, req, n);
    if (!v.ok()) return v.status();
    values.push_back(*v);
  }
  if (per_repeat != nullptr) *per_repeat = values;
  return Median(std::move(values));
}

int ThreadsFromEnv() {
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ANONHIST_THREADS")) {
    int v = 0;
    if (absl::SimpleAtoi(env, &v) && v > 0) threads = v;
  }
  return std::max(threads, 1);
}

absl::StatusOr<std::vector<ResultRow>> RunPlan(const ExperimentPlan& plan,
                                               int threads) {
  const std::vector<Cell> cells = ExpandCells(plan);
  const size_t tasks = cells.size() * static_cast<size_t>(plan.trials);
  std::vector<absl::StatusOr<ResultRow>> results(
      tasks, absl::UnknownError("not run"));
  if (threads <= 0) threads = ThreadsFromEnv();
  threads = static_cast<int>(std::min<size_t>(threads, std::max<size_t>(tasks, 1)));

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < tasks; i = next++) {
      const size_t c = i / plan.trials;
      const int t = static_cast<int>(i % plan.trials);
      auto out = RunTrial(cells[c], t, TrialSeed(plan.seed, c, t), plan.timing);
      if (out.ok()) {
        results[i] = std::move(out->row);
      } else {
        results[i] = absl::Status(
            out.status().code(),
            absl::StrCat("cell ", c, " (n=", cells[c].n, ", D=", cells[c].D,
                         ", epsilon=", Fmt(cells[c].epsilon), ") trial ", t,
                         ": ", out.status().message()));
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<ResultRow> rows;
  absl::Status failure;
  for (size_t c = 0; c < cells.size() && failure.ok(); ++c) {
    std::vector<ResultRow> cell_rows;
    for (int t = 0; t < plan.trials; ++t) {
      auto& r = results[c * plan.trials + t];
      if (!r.ok()) {
        failure = r.status();
        break;
      }
      cell_rows.push_back(*r);
    }
    if (failure.ok()) rows.insert(rows.end(), cell_rows.begin(), cell_rows.end());
  }
  if (!plan.out.empty()) {
    if (absl::Status s = WriteFile(plan.out, FormatResultsCsv(rows)); !s.ok()) {
      return s;
    }
  }
  if (!failure.ok()) return failure;
  return rows;
}

std::string FormatResultsCsv(const std::vector<ResultRow>& rows) {
  std::string out = absl::StrCat(std::string(kResultsHeader), "\n");
  for (const ResultRow& r : rows) {
    absl::StrAppendFormat(&out, "%s,%d,%d,%s,%s,%d,%d,%d,%d,%.3f,%d\n",
                          r.generator, r.n, r.D, Fmt(r.epsilon), r.mode,
                          r.trial, r.l1_error, r.l2sq_error, r.linf_error,
                          r.runtime_ms, r.fallback ? 1 : 0);
  }
  return out;
}

absl::StatusOr<std::vector<ResultRow>> ParseResultsCsv(std::string_view text) {
  std::vector<ResultRow> rows;
  int number = 0;
  bool header_seen = false;
  for (absl::string_view line : absl::StrSplit(AV(text), '\n')) {
    ++number;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != AV(kResultsHeader)) {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", number, ": unexpected header"));
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> f = absl::StrSplit(line, ',');
    ResultRow r;
    int fallback = 0;
    const bool ok =
        f.size() == 11 && absl::SimpleAtoi(f[1], &r.n) &&
        absl::SimpleAtoi(f[2], &r.D) && absl::SimpleAtod(f[3], &r.epsilon) &&
        absl::SimpleAtoi(f[5], &r.trial) && absl::SimpleAtoi(f[6], &r.l1_error) &&
        absl::SimpleAtoi(f[7], &r.l2sq_error) &&
        absl::SimpleAtoi(f[8], &r.linf_error) &&
        absl::SimpleAtod(f[9], &r.runtime_ms) &&
        absl::SimpleAtoi(f[10], &fallback) && r.l1_error >= 0 &&
        r.l2sq_error >= 0 && r.linf_error >= 0 && r.runtime_ms >= 0;
    if (!ok) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", number, ": malformed result row"));
    }
    r.generator = f[0];
    r.mode = f[4];
    r.fallback = fallback != 0;
    rows.push_back(std::move(r));
  }
  if (!header_seen) return absl::InvalidArgumentError("missing CSV header");
  return rows;
}

std::vector<CellSummary> Summarize(const std::vector<ResultRow>& rows) {
  std::vector<CellSummary> cells;
  std::map<std::tuple<std::string, int64_t, uint64_t, double, std::string>,
           size_t>
      index;
  std::vector<std::vector<const ResultRow*>> members;
  for (const ResultRow& r : rows) {
    auto key = std::make_tuple(r.generator, r.n, r.D, r.epsilon, r.mode);
    auto [it, inserted] = index.emplace(key, cells.size());
    if (inserted) {
      CellSummary c;
      c.generator = r.generator;
      c.n = r.n;
      c.D = r.D;
      c.epsilon = r.epsilon;
      c.mode = r.mode;
      cells.push_back(c);
      members.emplace_back();
    }
    members[it->second].push_back(&r);
  }
  auto stats = [](const std::vector<const ResultRow*>& rs, auto field) {
    Stats s;
    for (const ResultRow* r : rs) s.mean += field(*r);
    s.mean /= rs.size();
    if (rs.size() > 1) {
      double ss = 0;
      for (const ResultRow* r : rs) {
        const double d = field(*r) - s.mean;
        ss += d * d;
      }
      s.stddev = std::sqrt(ss / (rs.size() - 1));
    }
    return s;
  };
  for (size_t i = 0; i < cells.size(); ++i) {
    CellSummary& c = cells[i];
    const auto& rs = members[i];
    c.rows = static_cast<int>(rs.size());
    c.l1 = stats(rs, [](const ResultRow& r) { return double(r.l1_error); });
    c.l2sq = stats(rs, [](const ResultRow& r) { return double(r.l2sq_error); });
    c.linf = stats(rs, [](const ResultRow& r) { return double(r.linf_error); });
    c.runtime_ms = stats(rs, [](const ResultRow& r) { return r.runtime_ms; });
    for (const ResultRow* r : rs) c.fallbacks += r->fallback ? 1 : 0;
    const double nn = static_cast<double>(c.n);
    c.l1_ratio = c.n > 1 ? c.l1.mean / std::sqrt(nn * std::log(nn)) : 0.0;
  }
  return cells;
}

std::string FormatSummaryText(const std::vector<CellSummary>& cells) {
  std::string out = absl::StrFormat(
      "%-24s %8s %10s %7s %-18s %5s %12s %12s %14s %10s %9s %4s\n",
      "generator", "n", "D", "eps", "mode", "rows", "l1_mean", "l1_std",
      "l2sq_mean", "linf_mean", "l1/sqrt", "fb");
  for (const CellSummary& c : cells) {
    absl::StrAppendFormat(
        &out, "%-24s %8d %10d %7s %-18s %5d %12.2f %12.2f %14.2f %10.2f %9.4f %4d\n",
        c.generator, c.n, c.D, Fmt(c.epsilon), c.mode, c.rows, c.l1.mean,
        c.l1.stddev, c.l2sq.mean, c.linf.mean, c.l1_ratio, c.fallbacks);
  }
  // Spread of the normalized l1 ratio across cells that differ only in n.
  std::map<std::tuple<std::string, double, std::string>, std::pair<double, double>>
      spread;
  for (const CellSummary& c : cells) {
    if (c.l1_ratio <= 0) continue;
    auto key = std::make_tuple(c.generator, c.epsilon, c.mode);
    auto [it, inserted] = spread.emplace(key, std::make_pair(c.l1_ratio, c.l1_ratio));
    if (!inserted) {
      it->second.first = std::min(it->second.first, c.l1_ratio);
      it->second.second = std::max(it->second.second, c.l1_ratio);
    }
  }
  for (const auto& [key, mm] : spread) {
    absl::StrAppendFormat(&out, "ratio spread %s eps=%s %s: %.3f\n",
                          std::get<0>(key), Fmt(std::get<1>(key)),
                          std::get<2>(key), mm.second / mm.first);
  }
  return out;
}

std::string FormatSummaryCsv(const std::vector<CellSummary>& cells) {
  std::string out =
      "generator,n,D,epsilon,mode,rows,l1_mean,l1_std,l2sq_mean,l2sq_std,"
      "linf_mean,linf_std,runtime_ms_mean,runtime_ms_std,fallbacks,l1_ratio\n";
  for (const CellSummary& c : cells) {
    absl::StrAppendFormat(&out,
                          "%s,%d,%d,%s,%s,%d,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,"
                          "%.6g,%.6g,%d,%.6g\n",
                          c.generator, c.n, c.D, Fmt(c.epsilon), c.mode, c.rows,
                          c.l1.mean, c.l1.stddev, c.l2sq.mean, c.l2sq.stddev,
                          c.linf.mean, c.linf.stddev, c.runtime_ms.mean,
                          c.runtime_ms.stddev, c.fallbacks, c.l1_ratio);
  }
  return out;
}

}  // namespace anonhist
