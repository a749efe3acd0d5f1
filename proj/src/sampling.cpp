// Copyright 2026 The fairbonus Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairbonus/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "fairbonus/error.hpp"
#include "fairbonus/rng.hpp"

namespace fairbonus {

namespace {
constexpr std::uint64_t kSampleDomain = 0x73616d706c65ULL;  // "sample"
constexpr double kCltMinimum = 30.0;
}  // namespace

std::size_t recommended_sample_size(double k, std::optional<double> rarest) {
  double need = kCltMinimum;
  if (k > 0.0) need = std::max(need, kCltMinimum / k);
  if (rarest && *rarest > 0.0) need = std::max(need, kCltMinimum / *rarest);
  return static_cast<std::size_t>(std::ceil(need - 1e-9));
}

std::optional<double> rarest_group_frequency(const RecordTable& table) {
  std::optional<double> rarest;
  const auto n = static_cast<double>(table.size());
  for (const auto& col : table.fairness_columns()) {
    if (col.kind != AttrKind::kBinary) continue;
    const double ones = std::accumulate(col.values.begin(), col.values.end(), 0.0);
    for (double count : {ones, n - ones}) {
      if (count <= 0.0) continue;
      const double freq = count / n;
      if (!rarest || freq < *rarest) rarest = freq;
    }
  }
  return rarest;
}

std::vector<std::size_t> sample_rows(std::size_t n, const SampleSpec& spec,
                                     std::uint64_t draw_index) {
  if (spec.sample_size == 0) throw ConfigError("sample_size must be positive");
  Rng rng(derive_seed(spec.seed, kSampleDomain, draw_index));
  std::vector<std::size_t> rows;
  if (spec.replacement) {
    rows.reserve(spec.sample_size);
    for (std::size_t i = 0; i < spec.sample_size; ++i) {
      rows.push_back(static_cast<std::size_t>(rng.below(n)));
    }
    return rows;
  }
  if (spec.sample_size >= n) {
    rows.resize(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
  }
  // Floyd's algorithm: exactly sample_size draws, no O(n) work.
  const std::size_t m = spec.sample_size;
  std::unordered_set<std::size_t> chosen;
  chosen.reserve(2 * m);
  rows.reserve(m);
  for (std::size_t j = n - m; j < n; ++j) {
    const auto t = static_cast<std::size_t>(rng.below(j + 1));
    const std::size_t pick = chosen.insert(t).second ? t : j;
    if (pick == j) chosen.insert(j);
    rows.push_back(pick);
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

Sample draw_sample(const RecordTable& table, const SampleSpec& spec,
                   std::uint64_t draw_index) {
  const bool full = !spec.replacement && spec.sample_size >= table.size();
  const auto rows = sample_rows(table.size(), spec, draw_index);
  if (!spec.replacement) return Sample{table.subset(rows), full};

  RecordTable gathered = [&] {
    std::vector<ScoreColumn> scores;
    for (const auto& col : table.score_columns()) {
      ScoreColumn c{col.name, {}};
      for (std::size_t r : rows) c.values.push_back(col.values[r]);
      scores.push_back(std::move(c));
    }
    std::vector<FairnessColumn> fairness;
    for (const auto& col : table.fairness_columns()) {
      FairnessColumn c{col.name, col.kind, {}};
      for (std::size_t r : rows) c.values.push_back(col.values[r]);
      fairness.push_back(std::move(c));
    }
    std::optional<OutcomeColumn> outcome;
    if (table.outcome()) {
      outcome = OutcomeColumn{table.outcome()->name, {}};
      for (std::size_t r : rows) outcome->values.push_back(table.outcome()->values[r]);
    }
    std::vector<std::int64_t> ids(rows.size());
    std::iota(ids.begin(), ids.end(), std::int64_t{0});
    return RecordTable(std::move(ids), std::move(scores), std::move(fairness),
                       std::move(outcome));
  }();
  return Sample{std::move(gathered), false};
}

}  // namespace fairbonus
