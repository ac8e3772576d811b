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

// anonhist: gen | noise | estimate | property | eval | summarize.
//
// Exit codes: 0 ok, 1 I/O or internal error, 2 configuration error,
// 3 infeasible (fallback-only output).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anonhist/anonhist.h"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

int Report(anonhist_status s, const std::string& what) {
  if (s == ANONHIST_OK) return kExitOk;
  std::cerr << "anonhist: " << what << ": " << anonhist_status_name(s) << ": "
            << anonhist_last_error() << "\n";
  switch (s) {
    case ANONHIST_INVALID_ARGUMENT:
    case ANONHIST_OUT_OF_RANGE:
      return kExitConfig;
    case ANONHIST_INFEASIBLE:
      return kExitInfeasible;
    default:
      return kExitError;
  }
}

int ConfigError(const std::string& msg) {
  std::cerr << "anonhist: " << msg << "\n";
  return kExitConfig;
}

const std::map<std::string, anonhist_privacy_mode> kPrivacy = {
    {"central", ANONHIST_CENTRAL},
    {"two-hist", ANONHIST_TWO_HIST},
    {"pan-strict", ANONHIST_PAN_PRIVATE_STRICT},
    {"pan-private-strict", ANONHIST_PAN_PRIVATE_STRICT},
};

const std::map<std::string, anonhist_estimator> kEstimators = {
    {"small-l1", ANONHIST_SMALL_L1},
    {"small-l2sq", ANONHIST_SMALL_L2SQ},
    {"large-l1-reference", ANONHIST_LARGE_L1_REFERENCE},
    {"large-l1-fast", ANONHIST_LARGE_L1_FAST},
    {"large-l2sq", ANONHIST_LARGE_L2SQ},
};

const std::map<std::string, anonhist_property> kProperties = {
    {"entropy", ANONHIST_ENTROPY},
    {"coverage", ANONHIST_SUPPORT_COVERAGE},
    {"support", ANONHIST_SUPPORT_SIZE},
};

struct Options {
  std::string generator = "uniform:k=0";
  int64_t n = -1;
  uint64_t D = 0;
  double epsilon = 1.0;
  uint64_t B = 0;
  uint64_t seed = 1;
  uint64_t hash_seed = 0;
  int trials = 1;
  std::string out;
  std::string in;
  std::string in2;
  std::string mode = "small-l1";
  std::string privacy = "central";
  int64_t gamma = 0;
  uint64_t head = 0;
  uint64_t m = 0;
  std::string property = "entropy";
  double alpha = 0.1;
  double K = 0;
  int repeats = 1;
  std::string plan;
  std::string truth;
  std::string estimate;
  int threads = 0;
};

template <typename T>
void Free(T* p);
template <>
void Free(anonhist_histogram* p) { anonhist_histogram_free(p); }
template <>
void Free(anonhist_anon* p) { anonhist_anon_free(p); }
template <>
void Free(anonhist_noised* p) { anonhist_noised_free(p); }

// Minimal owning handle.
template <typename T>
class Handle {
 public:
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() {
    if (p_ != nullptr) Free(p_);
  }
  T** out() { return &p_; }
  T* get() const { return p_; }

 private:
  T* p_ = nullptr;
};

int RunGen(const Options& o) {
  if (o.n < 1) return ConfigError("gen needs --n >= 1");
  if (o.out.empty()) return ConfigError("gen needs --out");
  const uint64_t D = o.D ? o.D : static_cast<uint64_t>(o.n);
  Handle<anonhist_histogram> h;
  anonhist_status s =
      o.m ? anonhist_generate_batched(o.generator.c_str(), o.n, D, o.m, o.seed,
                                      h.out())
          : anonhist_generate(o.generator.c_str(), o.n, D, o.seed, h.out());
  if (s != ANONHIST_OK) return Report(s, "gen");
  return Report(anonhist_histogram_write(h.get(), o.out.c_str()), "gen");
}

int RunNoise(const Options& o) {
  if (o.in.empty() || o.out.empty()) return ConfigError("noise needs --in and --out");
  auto pm = kPrivacy.find(o.privacy);
  if (pm == kPrivacy.end()) return ConfigError("unknown --privacy " + o.privacy);
  Handle<anonhist_histogram> h;
  anonhist_status s = anonhist_histogram_read(o.in.c_str(), o.D, h.out());
  if (s != ANONHIST_OK) return Report(s, "noise: reading " + o.in);
  Handle<anonhist_noised> nh;
  s = o.B ? anonhist_noise_reduced(h.get(), o.B, o.hash_seed, o.epsilon,
                                   pm->second, o.seed, nh.out())
          : anonhist_noise(h.get(), o.epsilon, pm->second, o.seed, nh.out());
  if (s != ANONHIST_OK) return Report(s, "noise");
  return Report(anonhist_noised_write(nh.get(), o.out.c_str()), "noise");
}

int RunEstimate(const Options& o) {
  if (o.in.empty() || o.out.empty()) {
    return ConfigError("estimate needs --in and --out");
  }
  auto em = kEstimators.find(o.mode);
  if (em == kEstimators.end()) return ConfigError("unknown --mode " + o.mode);
  Handle<anonhist_noised> primary, secondary;
  anonhist_status s = anonhist_noised_read(o.in.c_str(), primary.out());
  if (s != ANONHIST_OK) return Report(s, "estimate: reading " + o.in);
  if (!o.in2.empty()) {
    s = anonhist_noised_read(o.in2.c_str(), secondary.out());
    if (s != ANONHIST_OK) return Report(s, "estimate: reading " + o.in2);
  }
  anonhist_estimate_config cfg;
  anonhist_estimate_config_init(&cfg);
  cfg.mode = em->second;
  cfg.n = o.n;
  cfg.gamma = o.gamma;
  cfg.head = o.head;
  Handle<anonhist_anon> est;
  anonhist_estimate_info info{};
  s = anonhist_estimate(primary.get(), secondary.get(), &cfg, est.out(), &info);
  if (s != ANONHIST_OK) return Report(s, "estimate");
  s = anonhist_anon_write(est.get(), o.out.c_str());
  if (s != ANONHIST_OK) return Report(s, "estimate");
  std::cout << "mode=" << o.mode << " n=" << info.n
            << " n_estimated=" << info.n_estimated << " gamma=" << info.gamma
            << " head=" << info.head << " fallback=" << info.fallback
            << " entries=" << anonhist_anon_size(est.get()) << "\n";
  return info.fallback ? kExitInfeasible : kExitOk;
}

int RunProperty(const Options& o) {
  if (o.in.empty()) return ConfigError("property needs --in");
  auto pk = kProperties.find(o.property);
  if (pk == kProperties.end()) {
    return ConfigError("unknown --property " + o.property);
  }
  auto pm = kPrivacy.find(o.privacy);
  if (pm == kPrivacy.end()) return ConfigError("unknown --privacy " + o.privacy);
  Handle<anonhist_histogram> h;
  anonhist_status s = anonhist_histogram_read(o.in.c_str(), o.D, h.out());
  if (s != ANONHIST_OK) return Report(s, "property: reading " + o.in);
  anonhist_property_request req;
  anonhist_property_request_init(&req);
  req.property = pk->second;
  req.alpha = o.alpha;
  req.m = o.m;
  req.K = o.K;
  req.repeats = o.repeats;
  req.epsilon = o.epsilon;
  req.mode = pm->second;
  double value = 0;
  std::vector<double> runs(o.repeats > 0 ? o.repeats : 0);
  s = anonhist_private_property(h.get(), &req, o.seed, &value, runs.data());
  if (s != ANONHIST_OK) return Report(s, "property");
  std::ostringstream line;
  line.precision(10);
  line << o.property << "=" << value;
  if (o.property == "entropy") line << " nats";
  line << "\n";
  std::cout << line.str();
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    f << line.str();
    if (!f) return Report(ANONHIST_IO, "property: writing " + o.out);
  }
  return kExitOk;
}

// eval compares two anonymized histograms, or runs an experiment plan.
int RunEval(const Options& o, const CLI::App& app) {
  if (!o.truth.empty() || !o.estimate.empty()) {
    if (o.truth.empty() || o.estimate.empty()) {
      return ConfigError("eval needs both --truth and --estimate");
    }
    Handle<anonhist_anon> a, b;
    anonhist_status s = anonhist_anon_read(o.truth.c_str(), a.out());
    if (s != ANONHIST_OK) return Report(s, "eval: reading " + o.truth);
    s = anonhist_anon_read(o.estimate.c_str(), b.out());
    if (s != ANONHIST_OK) return Report(s, "eval: reading " + o.estimate);
    anonhist_distances d{};
    s = anonhist_distances_compute(a.get(), b.get(), &d);
    if (s != ANONHIST_OK) return Report(s, "eval");
    std::cout << "l1=" << d.l1 << " l2sq=" << d.l2sq << " linf=" << d.linf
              << "\n";
    return kExitOk;
  }
  std::string plan_text;
  if (!o.plan.empty()) {
    std::ifstream f(o.plan);
    if (!f) return Report(ANONHIST_IO, "eval: cannot open " + o.plan);
    std::stringstream ss;
    ss << f.rdbuf();
    plan_text = ss.str();
    // Command-line flags override the plan file.
    nlohmann::json j = nlohmann::json::parse(plan_text, nullptr, false);
    if (j.is_discarded()) return ConfigError("eval: plan is not valid JSON");
    if (app.count("--trials")) j["trials"] = o.trials;
    if (app.count("--seed")) j["seed"] = o.seed;
    plan_text = j.dump();
  } else {
    if (o.n < 1) return ConfigError("eval needs --plan, --truth/--estimate, or --n");
    nlohmann::json j;
    j["generator"] = o.generator;
    j["n"] = o.n;
    j["D"] = o.D;
    j["epsilon"] = o.epsilon;
    j["trials"] = o.trials;
    j["seed"] = o.seed;
    j["mode"] = o.mode;
    if (app.count("--privacy")) j["privacy"] = o.privacy;
    j["B"] = o.B;
    j["gamma"] = o.gamma;
    j["head"] = o.head;
    plan_text = j.dump();
  }
  size_t rows = 0;
  anonhist_status s = anonhist_run_plan(
      plan_text.c_str(), o.out.empty() ? nullptr : o.out.c_str(), o.threads,
      &rows);
  if (s == ANONHIST_OK || s == ANONHIST_INFEASIBLE) {
    std::cout << "rows=" << rows << "\n";
  }
  return Report(s, "eval");
}

int RunSummarize(const Options& o) {
  if (o.in.empty()) return ConfigError("summarize needs --in");
  char* text = nullptr;
  char* csv = nullptr;
  anonhist_status s = anonhist_summarize(o.in.c_str(), &text, &csv);
  if (s != ANONHIST_OK) return Report(s, "summarize");
  std::cout << text;
  int rc = kExitOk;
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    f << csv;
    if (!f) rc = Report(ANONHIST_IO, "summarize: writing " + o.out);
  }
  anonhist_string_free(text);
  anonhist_string_free(csv);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private anonymized histograms"};
  app.require_subcommand(1);
  app.set_version_flag("--version", anonhist_version());
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--out", o.out, "Output file");
  };

  CLI::App* gen = app.add_subcommand("gen", "Sample a labeled histogram");
  common(gen);
  gen->add_option("--generator", o.generator,
                  "uniform:k=K | zipf:k=K:s=S | geometric:k=K:q=Q | "
                  "two-spike:B=B[:variant=1] (k=0 means k=D)");
  gen->add_option("--n", o.n, "Number of samples")->required();
  gen->add_option("--D", o.D, "Domain size (default n)");
  gen->add_option("--m", o.m, "Batch size for support coverage (0: off)");

  CLI::App* noise = app.add_subcommand("noise", "Add discrete Laplace noise");
  common(noise);
  noise->add_option("--in", o.in, "Histogram file")->required();
  noise->add_option("--D", o.D, "Domain size (default: from file)");
  noise->add_option("--epsilon", o.epsilon, "Privacy parameter");
  noise->add_option("--privacy", o.privacy, "central | two-hist | pan-strict");
  noise->add_option("--B", o.B, "Hash into B buckets first (0: off)");
  noise->add_option("--hash-seed", o.hash_seed, "Hash seed");

  CLI::App* est = app.add_subcommand("estimate", "Estimate the anonymized histogram");
  common(est);
  est->add_option("--in", o.in, "Noised histogram")->required();
  est->add_option("--in2", o.in2, "Second noised histogram (large-* modes)");
  est->add_option("--mode", o.mode,
                  "small-l1 | small-l2sq | large-l1-reference | "
                  "large-l1-fast | large-l2sq");
  est->add_option("--n", o.n, "Public total (omit to estimate it)");
  est->add_option("--gamma", o.gamma, "Box radius (0: default)");
  est->add_option("--head", o.head, "Head length (0: default)");

  CLI::App* prop = app.add_subcommand("property", "Private property estimate");
  common(prop);
  prop->add_option("--in", o.in, "Histogram file")->required();
  prop->add_option("--D", o.D, "Domain size (default: from file)");
  prop->add_option("--property", o.property, "entropy | coverage | support");
  prop->add_option("--alpha", o.alpha, "Accuracy parameter");
  prop->add_option("--m", o.m, "Support coverage batch size");
  prop->add_option("--K", o.K, "Support size: minimum mass 1/K");
  prop->add_option("--repeats", o.repeats, "Odd number of runs (median)");
  prop->add_option("--epsilon", o.epsilon, "Privacy parameter");
  prop->add_option("--privacy", o.privacy, "central | two-hist | pan-strict");

  CLI::App* eval = app.add_subcommand(
      "eval", "Run an experiment, or compare --truth with --estimate");
  common(eval);
  eval->add_option("--plan", o.plan, "JSON experiment plan");
  eval->add_option("--truth", o.truth, "Anonymized histogram");
  eval->add_option("--estimate", o.estimate, "Anonymized histogram");
  eval->add_option("--generator", o.generator, "Generator (without --plan)");
  eval->add_option("--n", o.n, "Samples (without --plan)");
  eval->add_option("--D", o.D, "Domain size, 0 means n (without --plan)");
  eval->add_option("--epsilon", o.epsilon, "Privacy parameter");
  eval->add_option("--mode", o.mode, "Pipeline, or hashed-small-l2sq");
  eval->add_option("--privacy", o.privacy, "central | two-hist | pan-strict");
  eval->add_option("--B", o.B, "Buckets (0: pipeline default)");
  eval->add_option("--gamma", o.gamma, "Box radius (0: default)");
  eval->add_option("--head", o.head, "Head length (0: default)");
  eval->add_option("--trials", o.trials, "Trials per cell");
  eval->add_option("--threads", o.threads, "Worker threads (0: auto)");

  CLI::App* sum = app.add_subcommand("summarize", "Summarize a results CSV");
  common(sum);
  sum->add_option("--in", o.in, "Results CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (gen->parsed()) return RunGen(o);
  if (noise->parsed()) return RunNoise(o);
  if (est->parsed()) return RunEstimate(o);
  if (prop->parsed()) return RunProperty(o);
  if (eval->parsed()) return RunEval(o, *eval);
  return RunSummarize(o);
}
