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

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "src/core.h"
#include "src/io.h"
#include "tests/test_util.h"

namespace anonhist {
namespace {

using ::anonhist::testing::StatusIs;
using ::anonhist::testing::Vec;
using ::testing::Each;
using ::testing::ElementsAre;
using ::testing::HasSubstr;

TEST(GeneratorTest, ParseAndName) {
  for (const char* text : {"uniform:k=50", "zipf:k=100:s=1", "geometric:k=20:q=0.5",
                           "two-spike:B=100", "two-spike:B=100:variant=1"}) {
    auto spec = ParseGenerator(text);
    ASSERT_OK(spec);
    EXPECT_EQ(GeneratorName(*spec), text);
  }
  EXPECT_FALSE(ParseGenerator("normal:k=3").ok());
  EXPECT_FALSE(ParseGenerator("zipf:k=x").ok());
  EXPECT_FALSE(ParseGenerator("two-spike").ok());
}

TEST(GeneratorTest, UniformSingleAtom) {
  auto h = Generate(*ParseGenerator("uniform:k=1"), 7, 5, 1);
  ASSERT_OK(h);
  EXPECT_EQ(h->counts(), (std::map<ItemId, Count>{{0, 7}}));
}

TEST(GeneratorTest, TwoSpike) {
  EXPECT_EQ(TwoSpike(100, 1000).c, 100u);
  EXPECT_EQ(TwoSpike(100, 1000).q, 10);
  EXPECT_EQ(TwoSpike(10000, 10000).c, 1000u);
  auto h = Generate(*ParseGenerator("two-spike:B=100"), 1000, 1000, 1);
  ASSERT_OK(h);
  const auto a = Anonymize(*h);
  EXPECT_EQ(a.size(), 100u);
  EXPECT_THAT(Vec(a.counts()), Each(10));
  auto v = Generate(*ParseGenerator("two-spike:B=100:variant=1"), 1000, 1000, 1);
  const auto b = Anonymize(*v);
  EXPECT_EQ(b.size(), 99u);
  EXPECT_EQ(b.counts()[0], 20);
  EXPECT_EQ(b.total(), 1000);
}

TEST(GeneratorTest, ZipfMassRatio) {
  auto h = Generate(*ParseGenerator("zipf:k=10:s=1"), 200000, 10, 4);
  ASSERT_OK(h);
  const double ratio = static_cast<double>(h->count(0)) / h->count(1);
  EXPECT_NEAR(ratio, 2.0, 0.05);
  auto h2 = Generate(*ParseGenerator("zipf:k=10:s=2"), 200000, 10, 4);
  EXPECT_NEAR(static_cast<double>(h2->count(0)) / h2->count(1), 4.0, 0.1);
}

TEST(GeneratorTest, RejectsSupportLargerThanDomain) {
  EXPECT_FALSE(Generate(*ParseGenerator("uniform:k=10"), 5, 4, 1).ok());
  EXPECT_FALSE(Generate(*ParseGenerator("two-spike:B=10000"), 100, 10, 1).ok());
}

TEST(PlanTest, ParseRoundTrip) {
  auto plan = ParsePlan(R"({"generator":"zipf:k=0:s=1","n":[100,1000],
      "D":[0],"epsilon":[0.5,1],"trials":3,"seed":9,"mode":"small-l2sq",
      "privacy":"two-hist","gamma":5,"out":"x.csv"})");
  ASSERT_OK(plan);
  EXPECT_EQ(plan->trials, 3);
  EXPECT_THAT(plan->n, ElementsAre(100, 1000));
  EXPECT_EQ(plan->pipeline, "small-l2sq");
  auto again = ParsePlan(PlanToJson(*plan));
  ASSERT_OK(again);
  EXPECT_EQ(PlanToJson(*again), PlanToJson(*plan));
  const auto cells = ExpandCells(*plan);
  ASSERT_EQ(cells.size(), 4u);
  EXPECT_EQ(cells[0].D, 100u);  // D = 0 means D = n
  EXPECT_EQ(cells[3].D, 1000u);
}

TEST(PlanTest, Rejects) {
  EXPECT_FALSE(ParsePlan("{").ok());
  EXPECT_FALSE(ParsePlan(R"({"generator":"uniform:k=2","n":10,"epsilon":1,"trials":0})").ok());
  EXPECT_FALSE(ParsePlan(R"({"generator":"uniform:k=2","n":10,"epsilon":0})").ok());
  EXPECT_FALSE(ParsePlan(R"({"generator":"uniform:k=2","n":10,"epsilon":1,"mode":"x"})").ok());
  EXPECT_FALSE(ParsePlan(R"({"generator":"uniform:k=2","epsilon":1})").ok());
}

ExperimentPlan SmallPlan() {
  return *ParsePlan(R"({"generator":"zipf:k=0:s=1","n":[200,400],
      "epsilon":1,"trials":3,"seed":5,"mode":"small-l1"})");
}

TEST(RunPlanTest, OneCellOneTrial) {
  auto plan = *ParsePlan(R"({"generator":"uniform:k=20","n":50,"epsilon":1})");
  auto rows = RunPlan(plan, 1);
  ASSERT_OK(rows);
  ASSERT_EQ(rows->size(), 1u);
  const std::string csv = FormatResultsCsv(*rows);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kResultsHeader);
}

TEST(RunPlanTest, DeterministicAcrossRunsAndThreads) {
  const ExperimentPlan plan = SmallPlan();
  const std::string a = FormatResultsCsv(*RunPlan(plan, 1));
  const std::string b = FormatResultsCsv(*RunPlan(plan, 4));
  EXPECT_EQ(a, b);
  auto rows = ParseResultsCsv(a);
  ASSERT_OK(rows);
  ASSERT_EQ(rows->size(), 6u);
  for (size_t i = 0; i < rows->size(); ++i) {
    EXPECT_EQ((*rows)[i].trial, static_cast<int>(i % 3));
    EXPECT_GE((*rows)[i].l1_error, 0);
    EXPECT_EQ((*rows)[i].runtime_ms, 0.0);
  }
}

TEST(RunPlanTest, AddingTrialsKeepsEarlierRows) {
  ExperimentPlan plan = SmallPlan();
  plan.n = {300};
  const auto three = *RunPlan(plan, 1);
  plan.trials = 5;
  const auto five = *RunPlan(plan, 1);
  for (size_t i = 0; i < 3; ++i) EXPECT_EQ(five[i].l1_error, three[i].l1_error);
}

TEST(RunPlanTest, FailingCellFlushesEarlierCells) {
  const std::string out = ::testing::TempDir() + "/partial.csv";
  auto plan = *ParsePlan(R"({"generator":"uniform:k=0","n":[8,40],
      "epsilon":1,"trials":2,"mode":"large-l1-reference"})");
  plan.out = out;
  auto rows = RunPlan(plan, 1);
  ASSERT_FALSE(rows.ok());
  EXPECT_THAT(std::string(rows.status().message()), HasSubstr("cell 1"));
  auto written = ParseResultsCsv(*ReadFile(out));
  ASSERT_OK(written);
  EXPECT_EQ(written->size(), 2u);
  std::remove(out.c_str());
}

TEST(RunTrialTest, TimingOnlyWhenAsked) {
  Cell cell;
  cell.generator = *ParseGenerator("uniform:k=0");
  cell.n = 2000;
  cell.D = 2000;
  auto timed = RunTrial(cell, 0, 1, true);
  ASSERT_OK(timed);
  EXPECT_GT(timed->row.runtime_ms, 0.0);
  auto untimed = RunTrial(cell, 0, 1, false);
  EXPECT_EQ(untimed->row.runtime_ms, 0.0);
  EXPECT_EQ(untimed->row.l1_error, timed->row.l1_error);
}

TEST(RunTrialTest, AllPipelinesRun) {
  for (const char* mode : {"small-l1", "small-l2sq", "large-l1-reference",
                           "large-l1-fast", "large-l2sq", "hashed-small-l2sq"}) {
    Cell cell;
    cell.generator = *ParseGenerator("uniform:k=4");
    cell.n = 10;
    cell.D = 100;
    cell.pipeline = mode;
    auto out = RunTrial(cell, 0, 3);
    ASSERT_OK(out);
    EXPECT_EQ(out->truth.total(), 10);
    if (!out->estimate.fallback && out->box_linf) {
      EXPECT_LE(*out->box_linf, out->estimate.gamma) << mode;
    }
  }
  Cell strict;
  strict.generator = *ParseGenerator("uniform:k=0");
  strict.n = 50;
  strict.D = 50;
  strict.privacy = PrivacyMode::kPanPrivateStrict;
  EXPECT_OK(RunTrial(strict, 0, 3));
  strict.pipeline = "large-l2sq";
  EXPECT_FALSE(RunTrial(strict, 0, 3).ok());
}

TEST(PrivatePropertyTest, MedianOfRepeats) {
  auto h = *Generate(*ParseGenerator("uniform:k=10"), 20000, 10, 2);
  PropertyRequest req;
  req.kind = PropertyKind::kEntropy;
  req.repeats = 5;
  auto params = PrivacyParams::Create(1.0, PrivacyMode::kCentralOneHist);
  std::vector<double> runs;
  auto v = PrivateProperty(h, req, *params, 8, &runs);
  ASSERT_OK(v);
  ASSERT_EQ(runs.size(), 5u);
  std::vector<double> sorted = runs;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_DOUBLE_EQ(*v, sorted[2]);
  EXPECT_NEAR(*v, std::log(10.0), 0.05);
  req.repeats = 2;
  EXPECT_FALSE(PrivateProperty(h, req, *params, 8).ok());
}

ResultRow Row(const std::string& mode, int trial, int64_t l1) {
  ResultRow r;
  r.generator = "uniform:k=5";
  r.n = 100;
  r.D = 100;
  r.epsilon = 1;
  r.mode = mode;
  r.trial = trial;
  r.l1_error = l1;
  r.l2sq_error = 2 * l1;
  r.linf_error = 1;
  return r;
}

TEST(SummarizeTest, SingleRow) {
  const auto cells = Summarize({Row("small-l1", 0, 7)});
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_DOUBLE_EQ(cells[0].l1.mean, 7);
  EXPECT_DOUBLE_EQ(cells[0].l1.stddev, 0);
}

TEST(SummarizeTest, IdenticalRows) {
  const auto cells = Summarize({Row("small-l1", 0, 7), Row("small-l1", 1, 7)});
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_DOUBLE_EQ(cells[0].l1.stddev, 0);
}

TEST(SummarizeTest, HandBuiltFile) {
  const std::string csv = std::string(kResultsHeader) +
                          "\nzipf:k=0:s=1,100,100,1,small-l1,0,10,20,2,0,0"
                          "\nzipf:k=0:s=1,100,100,1,small-l1,1,30,40,4,0,1"
                          "\nzipf:k=0:s=1,100,100,1,small-l2sq,0,5,5,1,0,0"
                          "\nzipf:k=0:s=1,100,100,1,small-l2sq,1,7,9,3,0,0\n";
  auto rows = ParseResultsCsv(csv);
  ASSERT_OK(rows);
  const auto cells = Summarize(*rows);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_DOUBLE_EQ(cells[0].l1.mean, 20);
  EXPECT_DOUBLE_EQ(cells[0].l1.stddev, std::sqrt(200.0));
  EXPECT_DOUBLE_EQ(cells[0].l2sq.mean, 30);
  EXPECT_DOUBLE_EQ(cells[0].linf.mean, 3);
  EXPECT_EQ(cells[0].fallbacks, 1);
  EXPECT_DOUBLE_EQ(cells[1].l1.mean, 6);
  EXPECT_DOUBLE_EQ(cells[1].l2sq.mean, 7);
  EXPECT_DOUBLE_EQ(cells[0].l1_ratio, 20 / std::sqrt(100 * std::log(100.0)));
  EXPECT_THAT(FormatSummaryText(cells), HasSubstr("small-l2sq"));
  const std::string summary = FormatSummaryCsv(cells);
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 3);
}

TEST(ResultsCsvTest, RoundTripAndErrors) {
  const std::vector<ResultRow> rows = {Row("small-l1", 0, 3), Row("small-l1", 1, 4)};
  auto back = ParseResultsCsv(FormatResultsCsv(rows));
  ASSERT_OK(back);
  EXPECT_EQ(FormatResultsCsv(*back), FormatResultsCsv(rows));
  auto bad = ParseResultsCsv(std::string(kResultsHeader) +
                             "\nuniform:k=5,100,100,1,small-l1,0,3,6,1,0,0"
                             "\nuniform:k=5,100,100,1,small-l1,x,3,6,1,0,0\n");
  EXPECT_THAT(bad, StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(std::string(bad.status().message()), HasSubstr("line 3"));
  EXPECT_FALSE(ParseResultsCsv("wrong,header\n").ok());
  EXPECT_FALSE(ParseResultsCsv(std::string(kResultsHeader) +
                               "\nuniform:k=5,100,100,1,small-l1,0,-3,6,1,0,0\n")
                   .ok());
}

}  // namespace
}  // namespace anonhist
