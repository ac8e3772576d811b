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

#ifndef ANONHIST_SRC_KERNELS_H_
#define ANONHIST_SRC_KERNELS_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "src/core.h"
#include "src/noise.h"

namespace anonhist {

// f(m) = 1 for m > 0, 1 + x at 0, -x at -1 and 0 below, with x = p/(1-p)^2.
// E[f(h + Z - r)] = 1[h >= r] for Z ~ DLap(p).
absl::StatusOr<double> KernelF(int64_t m, double p);
// Inverse of one DLap(p) layer: (1+p^2)/(1-p)^2 at 0, -p/(1-p)^2 at +-1.
absl::StatusOr<double> KernelG(int64_t m, double p);
// (f * g)(m) = sum over i in {-1, 0, 1} of g(i) f(m - i). Unbiased under two
// independent DLap(p) layers.
absl::StatusOr<double> KernelFG(int64_t m, double p);

enum class KernelVariant { kSingle, kDouble };

// The kernel tabulated on the window where it is not constant. Left of the
// window it is 0, right of it 1.
class KernelTable {
 public:
  static absl::StatusOr<KernelTable> Create(double p, KernelVariant variant);
  // Single variant for one noise layer, double for two.
  static absl::StatusOr<KernelTable> ForLayers(double p, int noise_layers);

  double p() const { return p_; }
  double x() const { return x_; }
  KernelVariant variant() const { return variant_; }
  int64_t window_lo() const { return lo_; }
  int64_t window_hi() const { return lo_ + static_cast<int64_t>(values_.size()) - 1; }

  double operator()(int64_t m) const {
    if (m < lo_) return 0.0;
    if (m > window_hi()) return 1.0;
    return values_[m - lo_];
  }

 private:
  KernelTable(double p, KernelVariant variant);

  double p_;
  double x_;
  KernelVariant variant_;
  int64_t lo_ = 0;
  std::vector<double> values_;
};

struct ErrorBudget {
  // p^2/(1-p)^5 + p/(1-p); the l1 error is O(C_p (n + D) log n).
  double c_p = 0;
  // 4p(p/(1-p)^3 + (1-p)). Var[phi_hat_{>=r}] <= kappa * sum_l p^|l-r| phi_l
  // holds for l >= r; terms with l < r need kappa / p.
  double kappa = 0;

  static absl::StatusOr<ErrorBudget> ForP(double p);
};

// phi_hat_{>=r} = sum over slots j of K(h'_j - r), r = 1..r_max, with K chosen
// by the number of noise layers. Uses exact counts of every noisy value, so it
// costs O(#distinct values + r_max) and matches the per-slot sum exactly.
absl::StatusOr<CumulativePrevalence> EstimateCumulativePrevalence(
    const NoisedHistogram& nh, size_t r_max);

}  // namespace anonhist

#endif  // ANONHIST_SRC_KERNELS_H_
