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

#include "src/properties.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "absl/strings/str_cat.h"

namespace anonhist {

absl::StatusOr<double> EmpiricalEntropy(const AnonymizedHistogram& a) {
  if (a.empty()) {
    return absl::InvalidArgumentError("entropy of an empty histogram");
  }
  const double n = static_cast<double>(a.total());
  double h = 0;
  for (Count c : a.counts()) {
    const double q = static_cast<double>(c) / n;
    h -= q * std::log(q);
  }
  return h;
}

absl::StatusOr<Histogram> BatchAugment(std::span<const ItemId> items,
                                       uint64_t domain_size, size_t m) {
  if (m == 0) return absl::InvalidArgumentError("batch size must be >= 1");
  if (items.size() % m != 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "sample count ", items.size(), " is not a multiple of m = ", m));
  }
  const uint64_t batches = items.size() / m;
  std::map<ItemId, Count> counts;
  for (size_t i = 0; i < items.size(); ++i) {
    if (items[i] >= domain_size) {
      return absl::InvalidArgumentError(
          absl::StrCat("item ", items[i], " outside domain ", domain_size));
    }
    ++counts[items[i] * batches + i / m];
  }
  return Histogram::Create(std::max<uint64_t>(1, domain_size * batches),
                           counts);
}

absl::StatusOr<double> SupportCoverageDense(const AnonymizedHistogram& a,
                                            int64_t n, size_t m) {
  if (m == 0) return absl::InvalidArgumentError("m must be >= 1");
  if (n <= 0 || n % static_cast<int64_t>(m) != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("n = ", n, " is not a positive multiple of m = ", m));
  }
  return static_cast<double>(m) * static_cast<double>(a.size()) /
         static_cast<double>(n);
}

absl::StatusOr<size_t> SupportSizeBatch(double K, double alpha) {
  if (!(K >= 1)) return absl::InvalidArgumentError("K must be >= 1");
  if (!(alpha > 0) || alpha >= 3) {
    return absl::InvalidArgumentError("alpha must lie in (0, 3)");
  }
  return static_cast<size_t>(std::ceil(K * std::log(3.0 / alpha)));
}

absl::StatusOr<double> SupportSize(const AnonymizedHistogram& a, int64_t n,
                                   double K, double alpha) {
  auto m = SupportSizeBatch(K, alpha);
  if (!m.ok()) return m.status();
  return SupportCoverageDense(a, n, *m);
}

double ExpectedDistinct(std::span<const double> probabilities, size_t m) {
  double s = 0;
  for (double q : probabilities) {
    if (q > 0) s += -std::expm1(static_cast<double>(m) * std::log1p(-q));
  }
  return s;
}

absl::StatusOr<double> Median(std::vector<double> values) {
  if (values.empty() || values.size() % 2 == 0) {
    return absl::InvalidArgumentError("median needs an odd number of values");
  }
  const size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  return values[mid];
}

std::string_view PropertyKindName(PropertyKind kind) {
  switch (kind) {
    case PropertyKind::kEntropy:
      return "entropy";
    case PropertyKind::kSupportCoverage:
      return "coverage";
    case PropertyKind::kSupportSize:
      return "support";
  }
  return "unknown";
}

absl::StatusOr<PropertyKind> ParsePropertyKind(std::string_view name) {
  for (PropertyKind k : {PropertyKind::kEntropy, PropertyKind::kSupportCoverage,
                         PropertyKind::kSupportSize}) {
    if (PropertyKindName(k) == name) return k;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown property '", std::string(name), "'"));
}

absl::StatusOr<double> Mechanism(const AnonymizedHistogram& a,
                                 const PropertyRequest& req, int64_t n) {
  switch (req.kind) {
    case PropertyKind::kEntropy:
      return EmpiricalEntropy(a);
    case PropertyKind::kSupportCoverage:
      return SupportCoverageDense(a, n, req.m);
    case PropertyKind::kSupportSize:
      return SupportSize(a, n, req.K, req.alpha);
  }
  return absl::InternalError("unhandled property");
}

absl::StatusOr<SampleComplexity> SampleComplexityBounds(PropertyKind kind,
                                                        double alpha,
                                                        double epsilon,
                                                        double size_param) {
  if (!(alpha > 0) || !(epsilon > 0)) {
    return absl::InvalidArgumentError("alpha and epsilon must be positive");
  }
  if (!(size_param >= 2)) {
    return absl::InvalidArgumentError("size parameter (k, m or K) must be >= 2");
  }
  // Denominators log(alpha m eps) are floored at 1 so the large-m branches
  // stay finite where they do not apply.
  auto floor_log = [](double v) { return std::max(std::log(v), 1.0); };
  const double a2e5 = alpha * alpha * std::pow(epsilon, 5);
  const double l = std::max(std::log(1.0 / (alpha * epsilon)), 0.0);
  const double k = size_param;
  const double lk = std::log(k);

  SampleComplexity out;
  out.entropy_empirical = k / alpha + lk * lk / (alpha * alpha) +
                          std::pow(l, 3.5) / a2e5;
  out.entropy_lambda = std::numeric_limits<double>::infinity();
  for (int i = 1; i < 50; ++i) {
    const double lambda = i / 100.0;
    const double v = k / (lambda * lambda * alpha * lk) +
                     lk * lk / (alpha * alpha) +
                     std::pow(std::pow(l, 1.5) / a2e5, 1.0 / (1.0 - 2 * lambda));
    if (v < out.entropy_lambda) {
      out.entropy_lambda = v;
      out.entropy_best_lambda = lambda;
    }
  }

  const double t = std::pow(l, 1.5) / a2e5;
  out.coverage_threshold = t;
  out.coverage_sparse = k >= t;
  out.coverage = out.coverage_sparse
                     ? k * std::log(1.0 / alpha) / floor_log(alpha * k * epsilon)
                     : t;
  const double log_inv_alpha = std::log(1.0 / alpha);
  out.support_size_large = log_inv_alpha > 0 && k >= t / log_inv_alpha;
  out.support_size = out.support_size_large
                         ? k * log_inv_alpha * log_inv_alpha /
                               floor_log(alpha * k * epsilon)
                         : t;

  switch (kind) {
    case PropertyKind::kEntropy:
      out.value = std::min(out.entropy_empirical, out.entropy_lambda);
      break;
    case PropertyKind::kSupportCoverage:
      out.value = out.coverage;
      break;
    case PropertyKind::kSupportSize:
      out.value = out.support_size;
      break;
  }
  return out;
}

}  // namespace anonhist
