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

#ifndef FAIRBONUS_METRICS_HPP_
#define FAIRBONUS_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairbonus/ranking.hpp"
#include "fairbonus/record_table.hpp"

namespace fairbonus {

/// Signed per-attribute fairness vector. For disparity, component f is
/// mean_f(selected) - mean_f(all): negative means underrepresented.
struct DisparityVector {
  std::vector<std::string> attrs;
  std::vector<double> components;
  std::vector<std::string> warnings;

  double norm() const;
  double at(std::string_view attr) const;
};

enum class MetricKind { kDisparity, kDisparateImpact, kFprGap };

std::string_view to_string(MetricKind kind);
MetricKind parse_metric_kind(std::string_view text);

/// Whole-ranking discounting. Checkpoints are absolute ranks step, 2*step,
/// ... up to floor(k_max * n); when `fractions` is non-empty the checkpoints
/// are selection_count(n, f) for each listed fraction f <= k_max instead.
struct LogDiscount {
  double k_max = 1.0;
  std::size_t step = 10;
  std::vector<double> fractions;
};

struct Objective {
  MetricKind kind = MetricKind::kDisparity;
  std::optional<LogDiscount> log_discount;  // nullopt: evaluate at k
};

// Checkpoint ranks (1-based counts) for a ranking of n records.
// Throws ConfigError when the set is empty.
std::vector<std::size_t> checkpoint_ranks(std::size_t n, const LogDiscount& ld);

DisparityVector disparity(const RecordTable& table,
                          const SelectionResult& selection,
                          std::span<const std::string> attrs);

DisparityVector disparate_impact_scaled(const RecordTable& table,
                                        const SelectionResult& selection,
                                        std::span<const std::string> attrs);

DisparityVector fpr_gap(const RecordTable& table,
                        const SelectionResult& selection,
                        std::span<const std::string> attrs);

// (1/Z) * sum_i D_i / log2(i + 1) over the checkpoint ranks i, with
// Z = sum_i 1 / log2(i + 1).
DisparityVector log_discounted_disparity(const RecordTable& table,
                                         const RankingSpec& spec,
                                         const BonusVector& bonus,
                                         const LogDiscount& checkpoints);

/// Objective vector of `bonus` on the whole table; the vector dimensions are
/// the bonus attributes.
DisparityVector evaluate_objective(const RecordTable& table,
                                   const RankingSpec& spec,
                                   const BonusVector& bonus,
                                   const Objective& objective);

/// Same, restricted to `rows` (a sample): both the population centroid and
/// the selection are computed over those rows only.
DisparityVector evaluate_objective(const RecordTable& table,
                                   const Scorer& scorer,
                                   std::span<const std::size_t> rows,
                                   std::span<const std::string> attrs,
                                   std::span<const double> bonus, double k,
                                   const Objective& objective);

// DCG of `adjusted` divided by DCG of `original`, both truncated at
// floor(k * n) where n = original.size(); weights are indexed by row.
double ndcg_at_k(std::span<const std::size_t> original,
                 std::span<const std::size_t> adjusted, double k,
                 std::span<const double> weights);

// Per-row DCG weights: the pre-bonus score as a nonnegative gain.
std::vector<double> utility_weights(const RecordTable& table,
                                    const RankingSpec& spec);

struct Group {
  std::string name;
  std::vector<std::size_t> rows;
};

struct ExposureReport {
  double ddp = 0.0;
  std::vector<std::string> groups;    // groups that entered the comparison
  std::vector<double> per_capita;     // exposure / |G|, same order
  std::vector<std::string> warnings;
};

// max over group pairs of exposure(Gj)/|Gj| - exposure(Gk)/|Gk|, with
// exposure(G) = sum_{i in G} 1 / log2(rank(i) + 1) and 1-based ranks.
ExposureReport exposure_ddp(std::span<const std::size_t> full_ranking,
                            std::span<const Group> groups);

// One group per binary attribute (records holding it) plus a "none" group
// for records holding none of them. Continuous attributes are skipped with
// a warning.
std::vector<Group> binary_groups(const RecordTable& table,
                                 std::span<const std::string> attrs,
                                 std::vector<std::string>* warnings = nullptr);

}  // namespace fairbonus

#endif  // FAIRBONUS_METRICS_HPP_
