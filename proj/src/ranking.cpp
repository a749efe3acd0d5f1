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

#include "fairbonus/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "fairbonus/error.hpp"

namespace fairbonus {

std::string_view to_string(Orientation o) {
  return o == Orientation::kHigherBetter ? "higher" : "lower";
}

Orientation parse_orientation(std::string_view text) {
  if (text == "higher" || text == "higher_better" || text == "HigherBetter") {
    return Orientation::kHigherBetter;
  }
  if (text == "lower" || text == "lower_better" || text == "LowerBetter") {
    return Orientation::kLowerBetter;
  }
  throw ConfigError("unknown orientation '" + std::string(text) +
                    "' (expected higher|lower)");
}

void RankingSpec::validate() const {
  if (weights.empty()) throw ConfigError("ranking has no weighted attributes");
  std::set<std::string_view> seen;
  for (const auto& [name, w] : weights) {
    if (!std::isfinite(w)) {
      throw ConfigError("weight for '" + name + "' is not finite");
    }
    if (!seen.insert(name).second) {
      throw ConfigError("attribute '" + name + "' weighted twice");
    }
  }
  if (!(k > 0.0 && k < 1.0)) {
    throw ConfigError("selection fraction k must lie strictly inside (0,1)");
  }
  if (!(score_scale > 0.0) || !std::isfinite(score_scale)) {
    throw ConfigError("score_scale must be positive");
  }
}

BonusVector BonusVector::zeros(std::vector<std::string> attrs,
                               double granularity) {
  BonusVector b;
  b.values.assign(attrs.size(), 0.0);
  b.attrs = std::move(attrs);
  b.granularity = granularity;
  return b;
}

double BonusVector::at(std::string_view attr) const {
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (attrs[i] == attr) return values[i];
  }
  throw ConfigError("bonus vector has no attribute '" + std::string(attr) + "'");
}

std::size_t selection_count(std::size_t n, double k) {
  // The epsilon absorbs representation error such as 0.29 * 100 = 28.999...
  const auto raw = static_cast<std::size_t>(
      std::floor(k * static_cast<double>(n) + 1e-9));
  return std::clamp<std::size_t>(raw, 1, n);
}

Scorer::Scorer(const RecordTable& table, const RankingSpec& spec,
               std::span<const std::string> bonus_attrs) {
  spec.validate();
  sign_ = spec.orientation == Orientation::kHigherBetter ? 1.0 : -1.0;
  scale_ = spec.score_scale;
  double lo = 0.0;
  double hi = 0.0;
  for (const auto& [name, w] : spec.weights) {
    terms_.emplace_back(&table.score(name).values, w);
    lo += std::min(w, 0.0);
    hi += std::max(w, 0.0);
  }
  // Gain is measured from the worst achievable composite.
  gain_origin_ = sign_ > 0 ? scale_ * lo : scale_ * hi;
  for (const auto& name : bonus_attrs) {
    fairness_.push_back(&table.fairness(name).values);
  }
}

double Scorer::base(std::size_t row) const noexcept {
  double acc = 0.0;
  for (const auto& [col, w] : terms_) acc += w * (*col)[row];
  return sign_ * scale_ * acc;
}

double Scorer::score(std::size_t row,
                     std::span<const double> bonus) const noexcept {
  double s = base(row);
  for (std::size_t d = 0; d < fairness_.size(); ++d) {
    s += bonus[d] * (*fairness_[d])[row];
  }
  return s;
}

double Scorer::gain(std::size_t row) const noexcept {
  // base() is sign * composite, so both orientations reduce to this.
  return base(row) - sign_ * gain_origin_;
}

std::vector<double> score(const RecordTable& table, const RankingSpec& spec,
                          const BonusVector& bonus) {
  if (bonus.attrs.size() != bonus.values.size()) {
    throw ConfigError("bonus vector names and values differ in length");
  }
  for (double b : bonus.values) {
    if (!std::isfinite(b)) throw DataError("bonus value is not finite");
  }
  const Scorer scorer(table, spec, bonus.attrs);
  std::vector<double> out(table.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = scorer.score(i, bonus.values);
    if (!std::isfinite(out[i])) {
      throw DataError("non-finite score for record " +
                      std::to_string(table.ids()[i]));
    }
  }
  return out;
}

namespace {

struct BetterThan {
  std::span<const double> scores;
  std::span<const std::int64_t> ids;
  bool operator()(std::size_t a, std::size_t b) const noexcept {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return ids[a] < ids[b];
  }
};

void require_finite(std::span<const double> scores) {
  for (double s : scores) {
    if (!std::isfinite(s)) throw DataError("ranking received a non-finite score");
  }
}

}  // namespace

std::vector<std::size_t> top_positions(std::span<const double> scores,
                                       std::span<const std::int64_t> ids,
                                       std::size_t count) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  count = std::min(count, order.size());
  const BetterThan better{scores, ids};
  if (count < order.size()) {
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count),
                     order.end(), better);
  }
  order.resize(count);
  std::sort(order.begin(), order.end(), better);
  return order;
}

std::vector<std::size_t> rank_all(std::span<const double> scores,
                                  std::span<const std::int64_t> ids) {
  require_finite(scores);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), BetterThan{scores, ids});
  return order;
}

SelectionResult select_top_k(std::span<const double> scores,
                             const RecordTable& table, double k) {
  if (!(k > 0.0 && k < 1.0)) {
    throw ConfigError("selection fraction k must lie strictly inside (0,1)");
  }
  if (scores.size() != table.size()) {
    throw ConfigError("score vector length does not match the table");
  }
  require_finite(scores);
  SelectionResult result;
  result.k_count = selection_count(table.size(), k);
  result.raised_to_minimum =
      std::floor(k * static_cast<double>(table.size()) + 1e-9) < 1.0;
  result.selected_rows = top_positions(scores, table.ids(), result.k_count);
  result.selected_ids.reserve(result.k_count);
  for (std::size_t r : result.selected_rows) {
    result.selected_ids.push_back(table.ids()[r]);
  }
  result.threshold_score = scores[result.selected_rows.back()];
  return result;
}

}  // namespace fairbonus
