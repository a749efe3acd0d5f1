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

#ifndef FAIRBONUS_RANKING_HPP_
#define FAIRBONUS_RANKING_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fairbonus/record_table.hpp"

namespace fairbonus {

enum class Orientation { kHigherBetter, kLowerBetter };

std::string_view to_string(Orientation o);
Orientation parse_orientation(std::string_view text);

/// Weighted-sum ranking function plus the selection fraction.
///
/// The composite score of a record is score_scale * sum(weight_j * attr_j).
/// LowerBetter rankings are negated so that "higher is better" holds for every
/// internal score and bonuses are always nonnegative.
struct RankingSpec {
  std::vector<std::pair<std::string, double>> weights;
  Orientation orientation = Orientation::kHigherBetter;
  double k = 0.05;
  double score_scale = 100.0;

  void validate() const;  // throws ConfigError
};

/// Per-attribute bonus points, in score_scale points, internal orientation.
struct BonusVector {
  std::vector<std::string> attrs;
  std::vector<double> values;
  double granularity = 0.5;

  static BonusVector zeros(std::vector<std::string> attrs,
                           double granularity = 0.5);

  std::size_t size() const noexcept { return values.size(); }
  double at(std::string_view attr) const;  // throws ConfigError

  friend bool operator==(const BonusVector&, const BonusVector&) = default;
};

struct SelectionResult {
  std::vector<std::int64_t> selected_ids;  // rank order, best first
  std::vector<std::size_t> selected_rows;  // table rows, same order
  double threshold_score = 0.0;            // score of the last selected record
  std::size_t k_count = 0;
  bool raised_to_minimum = false;  // floor(k*n) was 0 and got raised to 1
};

// floor(k * n), never less than 1.
std::size_t selection_count(std::size_t n, double k);

/// Resolved scoring function over one table: column lookups are done once
/// so per-record evaluation is a handful of multiply-adds.
class Scorer {
 public:
  // Throws ConfigError for unknown weight or bonus attribute names.
  Scorer(const RecordTable& table, const RankingSpec& spec,
         std::span<const std::string> bonus_attrs);

  std::size_t dims() const noexcept { return fairness_.size(); }

  // Pre-bonus score in internal (higher-better) orientation.
  double base(std::size_t row) const noexcept;
  // f_b(o) = f(o) + A_f . B
  double score(std::size_t row, std::span<const double> bonus) const noexcept;
  // Nonnegative utility weight used by DCG: the composite score for
  // HigherBetter, (max possible composite - composite) for LowerBetter.
  double gain(std::size_t row) const noexcept;
  double fairness_value(std::size_t row, std::size_t dim) const noexcept {
    return (*fairness_[dim])[row];
  }

 private:
  std::vector<std::pair<const std::vector<double>*, double>> terms_;
  std::vector<const std::vector<double>*> fairness_;
  double sign_ = 1.0;
  double scale_ = 1.0;
  double gain_origin_ = 0.0;
};

// Scores for every record (row order) with the bonus applied.
std::vector<double> score(const RecordTable& table, const RankingSpec& spec,
                          const BonusVector& bonus);

// Top floor(k*n) records by score; ties by ascending record id.
SelectionResult select_top_k(std::span<const double> scores,
                             const RecordTable& table, double k);

// Full ranking (row indices, best first) under the same tie-break.
std::vector<std::size_t> rank_all(std::span<const double> scores,
                                  std::span<const std::int64_t> ids);

// Best `count` positions of `scores`, ties by ascending ids; returns
// positions into the spans, best first.
std::vector<std::size_t> top_positions(std::span<const double> scores,
                                       std::span<const std::int64_t> ids,
                                       std::size_t count);

}  // namespace fairbonus

#endif  // FAIRBONUS_RANKING_HPP_
