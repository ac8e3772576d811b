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

#include "src/io.h"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace anonhist {

namespace {

// Non-comment, non-blank lines with their 1-based line numbers.
std::vector<std::pair<int, std::string_view>> DataLines(std::string_view text) {
  std::vector<std::pair<int, std::string_view>> out;
  int number = 0;
  const absl::string_view all(text.data(), text.size());
  for (absl::string_view line : absl::StrSplit(all, '\n')) {
    ++number;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    out.emplace_back(number, std::string_view(line.data(), line.size()));
  }
  return out;
}

std::vector<absl::string_view> Fields(std::string_view line) {
  return absl::StrSplit(absl::string_view(line.data(), line.size()),
                        absl::ByAnyChar(" \t,"), absl::SkipEmpty());
}

absl::Status LineError(int line, std::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("line ", line, ": ", std::string(what)));
}

}  // namespace

namespace {

// "# domain_size N", as written by FormatHistogram.
std::optional<uint64_t> DomainComment(std::string_view text) {
  constexpr std::string_view kTag = "# domain_size ";
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    if (line.substr(0, kTag.size()) == kTag) {
      uint64_t d = 0;
      const std::string_view rest = line.substr(kTag.size());
      if (absl::SimpleAtoi(absl::string_view(rest.data(), rest.size()), &d)) {
        return d;
      }
    }
    pos = end + 1;
  }
  return std::nullopt;
}

}  // namespace

absl::StatusOr<Histogram> ParseHistogram(std::string_view text,
                                         std::optional<uint64_t> domain_size) {
  std::map<ItemId, Count> counts;
  uint64_t max_id = 0;
  bool any = false;
  for (const auto& [number, line] : DataLines(text)) {
    const auto fields = Fields(line);
    uint64_t id = 0;
    int64_t count = 0;
    if (fields.size() != 2 || !absl::SimpleAtoi(fields[0], &id) ||
        !absl::SimpleAtoi(fields[1], &count)) {
      return LineError(number, "expected \"item_id count\"");
    }
    if (count < 0) return LineError(number, "negative count");
    counts[id] += count;
    max_id = std::max(max_id, id);
    any = true;
  }
  if (!domain_size) domain_size = DomainComment(text);
  const uint64_t d = domain_size ? *domain_size : (any ? max_id + 1 : 1);
  return Histogram::Create(d, counts);
}

std::string FormatHistogram(const Histogram& h) {
  std::string out = absl::StrCat("# domain_size ", h.domain_size(), "\n");
  for (const auto& [item, count] : h.counts()) {
    absl::StrAppend(&out, item, " ", count, "\n");
  }
  return out;
}

absl::StatusOr<AnonymizedHistogram> ParseAnonymized(std::string_view text) {
  std::vector<Count> counts;
  for (const auto& [number, line] : DataLines(text)) {
    int64_t v = 0;
    if (!absl::SimpleAtoi(absl::string_view(line.data(), line.size()), &v)) {
      return LineError(number, "expected one integer count");
    }
    counts.push_back(v);
  }
  return AnonymizedHistogram::Create(std::move(counts));
}

std::string FormatAnonymized(const AnonymizedHistogram& a) {
  std::string out;
  for (Count c : a.counts()) absl::StrAppend(&out, c, "\n");
  return out;
}

absl::StatusOr<NoisedHistogram> ParseNoised(std::string_view text) {
  const auto lines = DataLines(text);
  if (lines.empty()) {
    return absl::InvalidArgumentError("missing \"D p layers\" header");
  }
  const auto header = Fields(lines[0].second);
  uint64_t d = 0;
  double p = 0;
  int layers = 0;
  if ((header.size() != 3 && header.size() != 4) ||
      !absl::SimpleAtoi(header[0], &d) || !absl::SimpleAtod(header[1], &p) ||
      !absl::SimpleAtoi(header[2], &layers)) {
    return LineError(lines[0].first, "expected \"D p layers\" header");
  }
  const bool summarized = header.size() == 4;
  if (summarized && header[3] != "summarized") {
    return LineError(lines[0].first, "unknown header flag");
  }
  if (summarized) {
    std::map<int64_t, uint64_t> vc;
    for (size_t i = 1; i < lines.size(); ++i) {
      const auto f = Fields(lines[i].second);
      int64_t value = 0;
      uint64_t slots = 0;
      if (f.size() != 2 || !absl::SimpleAtoi(f[0], &value) ||
          !absl::SimpleAtoi(f[1], &slots)) {
        return LineError(lines[i].first, "expected \"value slots\"");
      }
      vc[value] += slots;
    }
    return NoisedHistogram::Summarized(d, p, layers, std::move(vc));
  }
  if (lines.size() - 1 != d) {
    return absl::InvalidArgumentError(absl::StrCat(
        "header declares ", d, " slots, found ", lines.size() - 1));
  }
  std::vector<int64_t> values(d);
  for (size_t i = 1; i < lines.size(); ++i) {
    if (!absl::SimpleAtoi(
            absl::string_view(lines[i].second.data(), lines[i].second.size()),
            &values[i - 1])) {
      return LineError(lines[i].first, "expected one signed integer");
    }
  }
  return NoisedHistogram::Dense(std::move(values), p, layers);
}

std::string FormatNoised(const NoisedHistogram& nh) {
  std::string out = absl::StrFormat("%d %.17g %d", nh.domain_size(), nh.p(),
                                    nh.noise_layers());
  if (nh.is_dense()) {
    out += "\n";
    for (int64_t v : nh.noisy_counts()) absl::StrAppend(&out, v, "\n");
  } else {
    out += " summarized\n";
    for (const auto& [value, slots] : nh.value_counts()) {
      absl::StrAppend(&out, value, " ", slots, "\n");
    }
  }
  return out;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return absl::DataLossError(absl::StrCat("error reading ", path));
  return ss.str();
}

absl::Status WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) return absl::DataLossError(absl::StrCat("error writing ", path));
  return absl::OkStatus();
}

}  // namespace anonhist
