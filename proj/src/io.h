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

#ifndef ANONHIST_SRC_IO_H_
#define ANONHIST_SRC_IO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "src/core.h"
#include "src/noise.h"

namespace anonhist {

// Histogram text: one "item_id count" pair per line. Lines starting with '#'
// and blank lines are skipped. Without a domain size, D = max id + 1.
absl::StatusOr<Histogram> ParseHistogram(std::string_view text,
                                         std::optional<uint64_t> domain_size);
std::string FormatHistogram(const Histogram& h);

// Anonymized histogram text: one count per line, nonincreasing.
absl::StatusOr<AnonymizedHistogram> ParseAnonymized(std::string_view text);
std::string FormatAnonymized(const AnonymizedHistogram& a);

// Noised histogram text: header "D p layers", then one signed value per slot.
// Summarized histograms use the header "D p layers summarized" followed by
// "value slots" pairs.
absl::StatusOr<NoisedHistogram> ParseNoised(std::string_view text);
std::string FormatNoised(const NoisedHistogram& nh);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, std::string_view contents);

}  // namespace anonhist

#endif  // ANONHIST_SRC_IO_H_
