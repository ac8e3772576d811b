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

#include "src/kernels.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "src/noise.h"
#include "src/random.h"
#include "tests/test_util.h"

namespace anonhist {
namespace {

using ::anonhist::testing::StatusIs;
using ::anonhist::testing::Vec;

TEST(KernelTest, FExamples) {
  EXPECT_DOUBLE_EQ(*KernelF(1, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(*KernelF(0, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(*KernelF(-1, 0.5), -2.0);
  EXPECT_DOUBLE_EQ(*KernelF(-7, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(*KernelF(1000, 0.5), 1.0);
}

TEST(KernelTest, GExamples) {
  EXPECT_DOUBLE_EQ(*KernelG(0, 0.5), 5.0);
  EXPECT_DOUBLE_EQ(*KernelG(1, 0.5), -2.0);
  EXPECT_DOUBLE_EQ(*KernelG(-1, 0.5), -2.0);
  EXPECT_DOUBLE_EQ(*KernelG(3, 0.5), 0.0);
}

TEST(KernelTest, FGExamples) {
  EXPECT_DOUBLE_EQ(*KernelFG(0, 0.5), 17.0);
  EXPECT_DOUBLE_EQ(*KernelFG(-3, 0.5), 0.0);
  for (int m = 2; m < 20; ++m) EXPECT_DOUBLE_EQ(*KernelFG(m, 0.5), 1.0);
}

TEST(KernelTest, FGIsTheConvolution) {
  for (double p : {0.2, 0.5, 0.9}) {
    for (int m = -6; m <= 6; ++m) {
      double conv = 0;
      for (int j = -3; j <= 3; ++j) conv += *KernelF(m - j, p) * *KernelG(j, p);
      EXPECT_NEAR(*KernelFG(m, p), conv, 1e-9 * (1 + std::abs(conv)));
    }
  }
}

TEST(KernelTest, RejectsBadP) {
  EXPECT_THAT(KernelF(0, 1.0), StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(KernelG(0, 0.0), StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(KernelFG(0, -1), StatusIs(absl::StatusCode::kInvalidArgument));
}

// E[f(h + X - r)] = 1[h >= r] for X ~ DLap(p), summed against the pmf.
TEST(KernelTest, FUnbiased) {
  for (double p : {0.2, 0.5, 0.9}) {
    for (int h = 0; h <= 6; ++h) {
      for (int r = 0; r <= 6; ++r) {
        double e = 0;
        for (int i = -3000; i <= 3000; ++i) {
          e += *DLapPmf(i, p) * *KernelF(h + i - r, p);
        }
        EXPECT_NEAR(e, h >= r ? 1.0 : 0.0, 1e-9) << p << " " << h << " " << r;
      }
    }
  }
}

TEST(KernelTest, GDeconvolvesDLap) {
  for (double p : {0.2, 0.5, 0.9}) {
    for (int i = -10; i <= 10; ++i) {
      double s = 0;
      for (int j = -1; j <= 1; ++j) s += *KernelG(j, p) * *DLapPmf(i - j, p);
      EXPECT_NEAR(s, i == 0 ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(KernelTableTest, MatchesKernels) {
  for (double p : {0.3, 0.8}) {
    auto single = KernelTable::Create(p, KernelVariant::kSingle);
    auto dbl = KernelTable::ForLayers(p, 2);
    ASSERT_OK(single);
    ASSERT_OK(dbl);
    EXPECT_EQ(single->window_lo(), -1);
    EXPECT_EQ(single->window_hi(), 0);
    EXPECT_EQ(dbl->window_lo(), -2);
    EXPECT_EQ(dbl->window_hi(), 1);
    EXPECT_DOUBLE_EQ(single->x(), p / ((1 - p) * (1 - p)));
    for (int m = -8; m <= 8; ++m) {
      EXPECT_DOUBLE_EQ((*single)(m), *KernelF(m, p));
      EXPECT_NEAR((*dbl)(m), *KernelFG(m, p), 1e-9 * (1 + std::abs((*dbl)(m))));
    }
  }
  EXPECT_FALSE(KernelTable::ForLayers(0.5, 3).ok());
}

TEST(EstimateCumulativePrevalenceTest, SingleSlot) {
  auto nh = NoisedHistogram::Dense({5}, 0.5, 1);
  auto phi = EstimateCumulativePrevalence(*nh, 5);
  ASSERT_OK(phi);
  EXPECT_EQ(phi->kind(), CumulativePrevalence::Kind::kEstimated);
  EXPECT_THAT(Vec(phi->values()), ::testing::ElementsAre(1, 1, 1, 1, 3));
}

TEST(EstimateCumulativePrevalenceTest, AllZeroVector) {
  constexpr int kSlots = 7;
  auto nh = NoisedHistogram::Dense(std::vector<int64_t>(kSlots, 0), 0.5, 1);
  auto phi = EstimateCumulativePrevalence(*nh, 3);
  ASSERT_OK(phi);
  EXPECT_DOUBLE_EQ(phi->at(1), -2.0 * kSlots);  // -x * D with x = 2
  EXPECT_DOUBLE_EQ(phi->at(2), 0.0);
}

// Bucketed evaluation equals the direct sum over slots.
TEST(EstimateCumulativePrevalenceTest, MatchesNaiveLoop) {
  CounterRng rng(31);
  for (int layers : {1, 2}) {
    for (int t = 0; t < 50; ++t) {
      const double p = 0.1 + 0.8 * rng.Uniform();
      std::vector<int64_t> v(1 + rng.UniformInt(40));
      for (auto& x : v) x = static_cast<int64_t>(rng.UniformInt(25)) - 5;
      auto nh = NoisedHistogram::Dense(v, p, layers);
      const size_t r_max = 1 + rng.UniformInt(25);
      auto phi = EstimateCumulativePrevalence(*nh, r_max);
      ASSERT_OK(phi);
      for (size_t r = 1; r <= r_max; ++r) {
        double naive = 0;
        for (int64_t x : v) {
          naive += layers == 1 ? *KernelF(x - static_cast<int64_t>(r), p)
                               : *KernelFG(x - static_cast<int64_t>(r), p);
        }
        EXPECT_NEAR(phi->at(r), naive, 1e-9 * (1 + std::abs(naive)));
      }
    }
  }
}

TEST(EstimateCumulativePrevalenceTest, SummarizedAgreesWithDense) {
  const std::vector<int64_t> v = {-3, 0, 0, 1, 4, 4, 9, -1};
  auto dense = NoisedHistogram::Dense(v, 0.6, 1);
  auto summ = NoisedHistogram::Summarized(
      8, 0.6, 1, {{-3, 1}, {-1, 1}, {0, 2}, {1, 1}, {4, 2}, {9, 1}});
  auto a = EstimateCumulativePrevalence(*dense, 10);
  auto b = EstimateCumulativePrevalence(*summ, 10);
  for (size_t r = 1; r <= 10; ++r) EXPECT_DOUBLE_EQ(a->at(r), b->at(r));
}

// Averaging over many noise draws recovers the exact cumulative prevalence.
TEST(EstimateCumulativePrevalenceTest, UnbiasedOverNoise) {
  auto h = *Histogram::Create(8, {{0, 3}, {1, 1}, {5, 2}});
  auto params = PrivacyParams::Create(2.0, PrivacyMode::kCentralOneHist);
  constexpr int kTrials = 20000;
  std::vector<double> mean(4, 0);
  for (int t = 0; t < kTrials; ++t) {
    auto nh = NoiseHistogram(h, *params, static_cast<uint64_t>(t));
    auto phi = EstimateCumulativePrevalence(*nh, 4);
    for (size_t r = 1; r <= 4; ++r) mean[r - 1] += phi->at(r) / kTrials;
  }
  // phi_{>=r} of (3, 2, 1) is (3, 2, 1, 0); 4 sigma tolerance from the
  // variance bound, pinned.
  const std::vector<double> truth = {3, 2, 1, 0};
  for (size_t r = 0; r < 4; ++r) EXPECT_NEAR(mean[r], truth[r], 0.1) << r;
}

TEST(KernelFTest, VarianceBound) {
  // Analytic Var[f(h + Z - r)]. The bound is 4 p^(|h-r|+1) (...) for h >= r;
  // for h < r the reflection f(-1 - m) = 1 - f(m) costs a factor of p, so
  // only 4 p^|h-r| (...) holds there.
  for (double p : {0.2, 0.5, 0.9}) {
    for (int h = 0; h <= 10; ++h) {
      for (int r = 0; r <= 10; ++r) {
        const int k = r - h + 1;  // f = 1 once Z >= k
        double e = k >= 1 ? std::pow(p, k) / (1 + p)
                          : 1 - std::pow(p, 1 - k) / (1 + p);
        double e2 = e;
        for (int m = -1; m <= 0; ++m) {
          const double f = *KernelF(m, p), w = *DLapPmf(m - h + r, p);
          e += f * w;
          e2 += f * f * w;
        }
        const int power = std::abs(h - r) + (h >= r ? 1 : 0);
        const double bound = 4 * std::pow(p, power) *
                             (p / std::pow(1 - p, 3) + (1 - p));
        EXPECT_LE(e2 - e * e, bound) << p << " " << h << " " << r;
      }
    }
  }
}

TEST(ErrorBudgetTest, Positive) {
  auto a = ErrorBudget::ForP(0.3);
  auto b = ErrorBudget::ForP(0.8);
  ASSERT_OK(a);
  ASSERT_OK(b);
  EXPECT_GT(a->c_p, 0);
  EXPECT_GT(b->c_p, a->c_p);
}

}  // namespace
}  // namespace anonhist
