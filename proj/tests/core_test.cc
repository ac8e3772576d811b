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

#include "src/core.h"

#include <cstdint>
#include <map>
#include <vector>

#include "src/random.h"
#include "tests/test_util.h"

namespace anonhist {
namespace {

using ::anonhist::testing::StatusIs;
using ::anonhist::testing::Vec;
using ::testing::ElementsAre;
using ::testing::IsEmpty;

AnonymizedHistogram A(std::vector<Count> counts) {
  return *AnonymizedHistogram::Create(std::move(counts));
}

TEST(AnonymizeTest, SortsAndDropsZeros) {
  auto h = Histogram::Create(4, {{0, 2}, {1, 0}, {2, 1}, {3, 2}});
  ASSERT_OK(h);
  EXPECT_THAT(Vec(Anonymize(*h).counts()), ElementsAre(2, 2, 1));
}

TEST(AnonymizeTest, Empty) {
  auto h = Histogram::Create(3, {});
  ASSERT_OK(h);
  EXPECT_THAT(Vec(Anonymize(*h).counts()), IsEmpty());
}

TEST(AnonymizeTest, LargeDomainSingleItem) {
  auto h = Histogram::Create(1000000, {{17, 5}});
  ASSERT_OK(h);
  EXPECT_THAT(Vec(Anonymize(*h).counts()), ElementsAre(5));
}

TEST(HistogramTest, RejectsBadInput) {
  EXPECT_THAT(Histogram::Create(0, {}), StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(Histogram::Create(3, {{3, 1}}), StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(Histogram::Create(3, {{1, -1}}), StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(HistogramTest, FromItems) {
  const std::vector<ItemId> items = {2, 0, 2, 2};
  auto h = Histogram::FromItems(3, items);
  ASSERT_OK(h);
  EXPECT_EQ(h->total(), 4);
  EXPECT_EQ(h->count(2), 3);
  EXPECT_EQ(h->count(1), 0);
}

TEST(AnonymizedHistogramTest, CreateRejectsIncreasingOrNonpositive) {
  EXPECT_FALSE(AnonymizedHistogram::Create({1, 2}).ok());
  EXPECT_FALSE(AnonymizedHistogram::Create({2, 0}).ok());
  auto a = AnonymizedHistogram::FromUnsorted({1, 0, 3});
  ASSERT_OK(a);
  EXPECT_THAT(Vec(a->counts()), ElementsAre(3, 1));
}

TEST(CumulativePrevalenceTest, Examples) {
  auto c = CumulativePrevalenceOf(A({2, 2, 1}), 3);
  ASSERT_OK(c);
  EXPECT_THAT(c->ExactValues(), ElementsAre(3, 2, 0));
  c = CumulativePrevalenceOf(A({}), 2);
  ASSERT_OK(c);
  EXPECT_THAT(c->ExactValues(), ElementsAre(0, 0));
  c = CumulativePrevalenceOf(A({5}), 5);
  ASSERT_OK(c);
  EXPECT_THAT(c->ExactValues(), ElementsAre(1, 1, 1, 1, 1));
}

TEST(CumulativePrevalenceTest, TruncationNeedsOptIn) {
  EXPECT_FALSE(CumulativePrevalenceOf(A({5}), 3).ok());
  auto c = CumulativePrevalenceOf(A({5}), 3, /*allow_truncation=*/true);
  ASSERT_OK(c);
  EXPECT_THAT(c->ExactValues(), ElementsAre(1, 1, 1));
}

TEST(FromCumulativePrevalenceTest, Examples) {
  const std::vector<int64_t> a = {3, 2, 0}, b = {0, 0, 0}, c = {1, 1, 1};
  EXPECT_THAT(Vec(FromCumulativePrevalence(a)->counts()), ElementsAre(2, 2, 1));
  EXPECT_THAT(Vec(FromCumulativePrevalence(b)->counts()), IsEmpty());
  EXPECT_THAT(Vec(FromCumulativePrevalence(c)->counts()), ElementsAre(3));
  const std::vector<int64_t> bad = {1, 2};
  EXPECT_FALSE(FromCumulativePrevalence(bad).ok());
}

TEST(FromCumulativePrevalenceTest, RoundTripRandom) {
  CounterRng rng(11);
  for (int t = 0; t < 200; ++t) {
    std::vector<Count> v(rng.UniformInt(12));
    for (auto& x : v) x = 1 + static_cast<Count>(rng.UniformInt(9));
    auto a = AnonymizedHistogram::FromUnsorted(v);
    ASSERT_OK(a);
    auto c = CumulativePrevalenceOf(*a, 12);
    ASSERT_OK(c);
    auto back = FromCumulativePrevalence(*c);
    ASSERT_OK(back);
    EXPECT_EQ(*back, *a);
    // Mass is preserved: sum_r phi_{>=r} = n.
    int64_t total = 0;
    for (int64_t x : c->ExactValues()) total += x;
    EXPECT_EQ(total, a->total());
  }
}

TEST(PrevalenceTest, CountsPerValue) {
  EXPECT_THAT(PrevalenceOf(A({3, 1, 1}), 3), ElementsAre(2, 0, 1));
}

TEST(DistanceTest, Examples) {
  EXPECT_EQ(L1Distance(A({3, 1}), A({2, 2})), 2);
  EXPECT_EQ(L1Distance(A({5}), A({5})), 0);
  const Distances d = ComputeDistances(A({4}), A({1, 1}));
  EXPECT_EQ(d.l1, 4);
  EXPECT_EQ(d.l2sq, 10);
  EXPECT_EQ(d.linf, 3);
  EXPECT_EQ(L2SquaredDistance(A({4}), A({1, 1})), 10);
  EXPECT_EQ(LinfDistance(A({4}), A({1, 1})), 3);
}

// The sorted-vector l1 distance equals the l1 distance of the cumulative
// prevalences.
TEST(DistanceTest, L1MatchesPrevalenceDistance) {
  CounterRng rng(5);
  for (int t = 0; t < 300; ++t) {
    auto make = [&] {
      std::vector<Count> v(rng.UniformInt(8));
      for (auto& x : v) x = 1 + static_cast<Count>(rng.UniformInt(6));
      return *AnonymizedHistogram::FromUnsorted(v);
    };
    const AnonymizedHistogram a = make(), b = make();
    auto ca = CumulativePrevalenceOf(a, 6);
    auto cb = CumulativePrevalenceOf(b, 6);
    int64_t l1 = 0;
    for (size_t r = 1; r <= 6; ++r) {
      l1 += static_cast<int64_t>(std::abs(ca->at(r) - cb->at(r)));
    }
    const Distances d = ComputeDistances(a, b);
    EXPECT_EQ(d.l1, l1);
    EXPECT_LE(d.l2sq, d.l1 * d.linf);
    EXPECT_LE(d.linf, d.l1);
  }
}

TEST(PrivacyParamsTest, ModeToP) {
  auto c = PrivacyParams::Create(1.0, PrivacyMode::kCentralOneHist);
  ASSERT_OK(c);
  EXPECT_DOUBLE_EQ(c->p, std::exp(-0.5));
  auto t = PrivacyParams::Create(1.0, PrivacyMode::kTwoHist);
  ASSERT_OK(t);
  EXPECT_DOUBLE_EQ(t->p, std::exp(-0.25));
  auto s = PrivacyParams::Create(2.0, PrivacyMode::kPanPrivateStrict);
  ASSERT_OK(s);
  EXPECT_DOUBLE_EQ(s->p, std::exp(-0.5));
  EXPECT_FALSE(PrivacyParams::Create(0.0, PrivacyMode::kTwoHist).ok());
  EXPECT_FALSE(PrivacyParams::Create(-1.0, PrivacyMode::kTwoHist).ok());
}

TEST(PrivacyParamsTest, ParseNames) {
  EXPECT_EQ(*ParsePrivacyMode("central"), PrivacyMode::kCentralOneHist);
  EXPECT_EQ(*ParsePrivacyMode("two-hist"), PrivacyMode::kTwoHist);
  EXPECT_EQ(*ParsePrivacyMode("pan-strict"), PrivacyMode::kPanPrivateStrict);
  EXPECT_FALSE(ParsePrivacyMode("nope").ok());
  for (auto m : {PrivacyMode::kCentralOneHist, PrivacyMode::kTwoHist,
                 PrivacyMode::kPanPrivateStrict}) {
    EXPECT_EQ(*ParsePrivacyMode(PrivacyModeName(m)), m);
  }
}

}  // namespace
}  // namespace anonhist
