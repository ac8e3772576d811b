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

// Exercises the shared library through its C interface only.

#include "anonhist/anonhist.h"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace {

std::string Temp(const std::string& name) {
  return ::testing::TempDir() + "/c_api_" + name;
}

TEST(CApiTest, HistogramLifecycle) {
  anonhist_histogram* h = nullptr;
  ASSERT_EQ(anonhist_histogram_create(10, &h), ANONHIST_OK);
  EXPECT_EQ(anonhist_histogram_add(h, 1, 2), ANONHIST_OK);
  EXPECT_EQ(anonhist_histogram_add(h, 3, 1), ANONHIST_OK);
  EXPECT_EQ(anonhist_histogram_add(h, 7, 2), ANONHIST_OK);
  EXPECT_EQ(anonhist_histogram_add(h, 10, 1), ANONHIST_OUT_OF_RANGE);
  EXPECT_NE(std::string(anonhist_last_error()), "");
  EXPECT_EQ(anonhist_histogram_add(h, 3, -2), ANONHIST_INVALID_ARGUMENT);
  EXPECT_EQ(anonhist_histogram_total(h), 5);
  EXPECT_EQ(anonhist_histogram_domain_size(h), 10u);

  anonhist_anon* a = nullptr;
  ASSERT_EQ(anonhist_anonymize(h, &a), ANONHIST_OK);
  int64_t counts[8];
  ASSERT_EQ(anonhist_anon_counts(a, counts, 8), 3u);
  EXPECT_EQ(counts[0], 2);
  EXPECT_EQ(counts[1], 2);
  EXPECT_EQ(counts[2], 1);
  int64_t phi[3];
  ASSERT_EQ(anonhist_cumulative_prevalence(a, 3, phi), ANONHIST_OK);
  EXPECT_EQ(phi[0], 3);
  EXPECT_EQ(phi[1], 2);
  EXPECT_EQ(phi[2], 0);
  EXPECT_EQ(anonhist_cumulative_prevalence(a, 1, phi), ANONHIST_INVALID_ARGUMENT);

  const std::string path = Temp("hist.txt");
  ASSERT_EQ(anonhist_histogram_write(h, path.c_str()), ANONHIST_OK);
  anonhist_histogram* back = nullptr;
  ASSERT_EQ(anonhist_histogram_read(path.c_str(), 0, &back), ANONHIST_OK);
  EXPECT_EQ(anonhist_histogram_total(back), 5);
  EXPECT_EQ(anonhist_histogram_domain_size(back), 10u);
  anonhist_histogram_free(back);
  anonhist_anon_free(a);
  anonhist_histogram_free(h);
}

TEST(CApiTest, NullAndMissingFiles) {
  anonhist_histogram* h = nullptr;
  EXPECT_EQ(anonhist_histogram_create(0, &h), ANONHIST_INVALID_ARGUMENT);
  EXPECT_EQ(anonhist_histogram_create(3, nullptr), ANONHIST_INVALID_ARGUMENT);
  EXPECT_EQ(anonhist_histogram_read("/nonexistent/x", 0, &h), ANONHIST_IO);
  EXPECT_EQ(anonhist_anonymize(nullptr, nullptr), ANONHIST_INVALID_ARGUMENT);
  EXPECT_STREQ(anonhist_status_name(ANONHIST_INFEASIBLE), "infeasible");
  EXPECT_STREQ(anonhist_version(), "0.1.0");
  anonhist_histogram_free(nullptr);
  anonhist_anon_free(nullptr);
  anonhist_noised_free(nullptr);
}

TEST(CApiTest, Distances) {
  const int64_t x[] = {4};
  const int64_t y[] = {1, 1};
  anonhist_anon *a = nullptr, *b = nullptr;
  ASSERT_EQ(anonhist_anon_create(x, 1, &a), ANONHIST_OK);
  ASSERT_EQ(anonhist_anon_create(y, 2, &b), ANONHIST_OK);
  anonhist_distances d;
  ASSERT_EQ(anonhist_distances_compute(a, b, &d), ANONHIST_OK);
  EXPECT_EQ(d.l1, 4);
  EXPECT_EQ(d.l2sq, 10);
  EXPECT_EQ(d.linf, 3);
  const int64_t bad[] = {1, 2};
  anonhist_anon* c = nullptr;
  EXPECT_EQ(anonhist_anon_create(bad, 2, &c), ANONHIST_INVALID_ARGUMENT);
  anonhist_anon_free(a);
  anonhist_anon_free(b);
}

TEST(CApiTest, NoiseEstimateRoundTrip) {
  anonhist_histogram* h = nullptr;
  ASSERT_EQ(anonhist_generate("zipf:k=0:s=1", 500, 500, 3, &h), ANONHIST_OK);
  anonhist_anon* truth = nullptr;
  ASSERT_EQ(anonhist_anonymize(h, &truth), ANONHIST_OK);

  double p = 0;
  ASSERT_EQ(anonhist_noise_parameter(1.0, ANONHIST_TWO_HIST, &p), ANONHIST_OK);
  EXPECT_DOUBLE_EQ(p, std::exp(-0.25));

  // Huge epsilon: no noise, exact recovery.
  anonhist_noised* nh = nullptr;
  ASSERT_EQ(anonhist_noise(h, 500.0, ANONHIST_CENTRAL, 9, &nh), ANONHIST_OK);
  const std::string path = Temp("noised.txt");
  ASSERT_EQ(anonhist_noised_write(nh, path.c_str()), ANONHIST_OK);
  anonhist_noised* back = nullptr;
  ASSERT_EQ(anonhist_noised_read(path.c_str(), &back), ANONHIST_OK);
  EXPECT_EQ(anonhist_noised_domain_size(back), 500u);
  EXPECT_EQ(anonhist_noised_layers(back), 1);
  EXPECT_EQ(anonhist_noised_total(back), 500);

  anonhist_estimate_config cfg;
  anonhist_estimate_config_init(&cfg);
  cfg.mode = ANONHIST_SMALL_L2SQ;
  anonhist_anon* est = nullptr;
  anonhist_estimate_info info;
  ASSERT_EQ(anonhist_estimate(back, nullptr, &cfg, &est, &info), ANONHIST_OK);
  EXPECT_EQ(info.n_estimated, 1);
  EXPECT_EQ(info.fallback, 0);
  anonhist_distances d;
  anonhist_distances_compute(truth, est, &d);
  EXPECT_EQ(d.l1, 0);

  cfg.mode = ANONHIST_LARGE_L1_FAST;
  anonhist_anon* none = nullptr;
  EXPECT_EQ(anonhist_estimate(back, nullptr, &cfg, &none, nullptr),
            ANONHIST_INVALID_ARGUMENT);

  anonhist_noised* strict = nullptr;
  ASSERT_EQ(anonhist_noise(h, 1.0, ANONHIST_PAN_PRIVATE_STRICT, 9, &strict),
            ANONHIST_OK);
  EXPECT_EQ(anonhist_noised_layers(strict), 2);

  anonhist_noised* reduced = nullptr;
  ASSERT_EQ(anonhist_noise_reduced(h, 2000, 4, 1.0, ANONHIST_TWO_HIST, 9, &reduced),
            ANONHIST_OK);
  EXPECT_EQ(anonhist_noised_domain_size(reduced), 2000u);
  EXPECT_GT(anonhist_default_buckets(ANONHIST_LARGE_L1_FAST, 500, 500, 1.0, 0), 0u);

  anonhist_noised_free(reduced);
  anonhist_noised_free(strict);
  anonhist_anon_free(est);
  anonhist_noised_free(back);
  anonhist_noised_free(nh);
  anonhist_anon_free(truth);
  anonhist_histogram_free(h);
}

TEST(CApiTest, Properties) {
  const int64_t x[] = {2, 2};
  anonhist_anon* a = nullptr;
  ASSERT_EQ(anonhist_anon_create(x, 2, &a), ANONHIST_OK);
  double v = 0;
  ASSERT_EQ(anonhist_entropy(a, &v), ANONHIST_OK);
  EXPECT_NEAR(v, std::log(2.0), 1e-15);
  ASSERT_EQ(anonhist_support_coverage(a, 4, 2, &v), ANONHIST_OK);
  EXPECT_DOUBLE_EQ(v, 1.0);
  anonhist_anon_free(a);

  anonhist_histogram* h = nullptr;
  ASSERT_EQ(anonhist_generate("uniform:k=8", 20000, 8, 1, &h), ANONHIST_OK);
  anonhist_property_request req;
  anonhist_property_request_init(&req);
  req.repeats = 3;
  double runs[3];
  ASSERT_EQ(anonhist_private_property(h, &req, 5, &v, runs), ANONHIST_OK);
  EXPECT_NEAR(v, std::log(8.0), 0.05);
  anonhist_histogram_free(h);

  ASSERT_EQ(anonhist_sample_complexity(ANONHIST_ENTROPY, 0.1, 1.0, 100, &v),
            ANONHIST_OK);
  EXPECT_NEAR(v, 4973.245, 1e-3);

  anonhist_histogram* batched = nullptr;
  ASSERT_EQ(anonhist_generate_batched("uniform:k=5", 100, 5, 10, 2, &batched),
            ANONHIST_OK);
  EXPECT_EQ(anonhist_histogram_domain_size(batched), 50u);
  anonhist_histogram_free(batched);
}

TEST(CApiTest, RunPlanAndSummarize) {
  const std::string out = Temp("results.csv");
  size_t rows = 0;
  ASSERT_EQ(anonhist_run_plan(
                R"({"generator":"uniform:k=0","n":[100,200],"epsilon":1,"trials":2})",
                out.c_str(), 1, &rows),
            ANONHIST_OK);
  EXPECT_EQ(rows, 4u);
  char* text = nullptr;
  char* csv = nullptr;
  ASSERT_EQ(anonhist_summarize(out.c_str(), &text, &csv), ANONHIST_OK);
  EXPECT_NE(std::string(text).find("small-l1"), std::string::npos);
  EXPECT_EQ(std::string(csv).rfind("generator,", 0), 0u);
  anonhist_string_free(text);
  anonhist_string_free(csv);
  EXPECT_EQ(anonhist_run_plan("{", nullptr, 1, &rows), ANONHIST_INVALID_ARGUMENT);
}

}  // namespace
