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

#include "absl/strings/str_cat.h"

namespace anonhist {

namespace {

double F(int64_t m, double x) {
  if (m > 0) return 1.0;
  if (m == 0) return 1.0 + x;
  if (m == -1) return -x;
  return 0.0;
}

double G(int64_t m, double p) {
  const double q = (1.0 - p) * (1.0 - p);
  if (m == 0) return (1.0 + p * p) / q;
  if (m == 1 || m == -1) return -p / q;
  return 0.0;
}

double FG(int64_t m, double p, double x) {
  double sum = 0.0;
  for (int64_t i = -1; i <= 1; ++i) sum += G(i, p) * F(m - i, x);
  return sum;
}

double XOf(double p) { return p / ((1.0 - p) * (1.0 - p)); }

}  // namespace

absl::StatusOr<double> KernelF(int64_t m, double p) {
  if (absl::Status s = ValidateNoiseParameter(p); !s.ok()) return s;
  return F(m, XOf(p));
}

absl::StatusOr<double> KernelG(int64_t m, double p) {
  if (absl::Status s = ValidateNoiseParameter(p); !s.ok()) return s;
  return G(m, p);
}

absl::StatusOr<double> KernelFG(int64_t m, double p) {
  if (absl::Status s = ValidateNoiseParameter(p); !s.ok()) return s;
  return FG(m, p, XOf(p));
}

KernelTable::KernelTable(double p, KernelVariant variant)
    : p_(p), x_(XOf(p)), variant_(variant) {
  if (variant == KernelVariant::kSingle) {
    lo_ = -1;
    values_ = {F(-1, x_), F(0, x_)};
  } else {
    lo_ = -2;
    for (int64_t m = -2; m <= 1; ++m) values_.push_back(FG(m, p, x_));
  }
}

absl::StatusOr<KernelTable> KernelTable::Create(double p,
                                                KernelVariant variant) {
  if (absl::Status s = ValidateNoiseParameter(p); !s.ok()) return s;
  return KernelTable(p, variant);
}

absl::StatusOr<KernelTable> KernelTable::ForLayers(double p,
                                                   int noise_layers) {
  if (noise_layers == 1) return Create(p, KernelVariant::kSingle);
  if (noise_layers == 2) return Create(p, KernelVariant::kDouble);
  return absl::InvalidArgumentError(
      absl::StrCat("no kernel for ", noise_layers, " noise layers"));
}

absl::StatusOr<ErrorBudget> ErrorBudget::ForP(double p) {
  if (absl::Status s = ValidateNoiseParameter(p); !s.ok()) return s;
  const double q = 1.0 - p;
  ErrorBudget b;
  b.c_p = p * p / std::pow(q, 5) + p / q;
  b.kappa = 4.0 * p * (p / (q * q * q) + q);
  return b;
}

absl::StatusOr<CumulativePrevalence> EstimateCumulativePrevalence(
    const NoisedHistogram& nh, size_t r_max) {
  auto kernel = KernelTable::ForLayers(nh.p(), nh.noise_layers());
  if (!kernel.ok()) return kernel.status();
  const int64_t lo = kernel->window_lo();
  const int64_t hi = kernel->window_hi();
  const int64_t top = static_cast<int64_t>(r_max) + hi;

  // counts[v - lo - 1] = c_v for v in [lo + 1, top]; `above` = c_{> top}.
  // Values <= lo contribute 0 for every r >= 1.
  const int64_t base = lo + 1;
  std::vector<double> counts(top >= base ? top - base + 1 : 0, 0.0);
  double above = 0.0;
  for (const auto& [value, count] : nh.value_counts()) {
    if (value > top) {
      above += static_cast<double>(count);
    } else if (value >= base) {
      counts[value - base] += static_cast<double>(count);
    }
  }
  auto c = [&](int64_t v) { return counts[v - base]; };

  std::vector<double> out(r_max, 0.0);
  double tail = above;  // c_{> r + hi}
  for (int64_t r = static_cast<int64_t>(r_max); r >= 1; --r) {
    double value = tail;
    for (int64_t d = lo; d <= hi; ++d) value += (*kernel)(d) * c(r + d);
    out[r - 1] = value;
    tail += c(r + hi);
  }
  return CumulativePrevalence::Estimated(std::move(out));
}

}  // namespace anonhist
