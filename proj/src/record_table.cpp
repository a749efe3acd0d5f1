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

#include "fairbonus/record_table.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fairbonus/error.hpp"

namespace fairbonus {

namespace {

void check_length(const std::string& name, std::size_t got, std::size_t want) {
  if (got != want) {
    std::ostringstream msg;
    msg << "column '" << name << "' has " << got << " values, expected "
        << want;
    throw DataError(msg.str());
  }
}

[[noreturn]] void bad_value(const std::string& column, std::size_t row,
                            double value, const char* expectation) {
  std::ostringstream msg;
  msg << "column '" << column << "' row " << row << ": value " << value
      << " is not " << expectation;
  throw DataError(msg.str());
}

}  // namespace

std::string_view to_string(AttrKind kind) {
  return kind == AttrKind::kBinary ? "binary" : "continuous";
}

RecordTable::RecordTable(std::vector<std::int64_t> ids,
                         std::vector<ScoreColumn> score_columns,
                         std::vector<FairnessColumn> fairness_columns,
                         std::optional<OutcomeColumn> outcome)
    : ids_(std::move(ids)),
      score_columns_(std::move(score_columns)),
      fairness_columns_(std::move(fairness_columns)),
      outcome_(std::move(outcome)) {
  const std::size_t n = ids_.size();
  if (n == 0) throw DataError("table has no records");

  std::vector<std::int64_t> sorted = ids_;
  std::sort(sorted.begin(), sorted.end());
  if (auto dup = std::adjacent_find(sorted.begin(), sorted.end());
      dup != sorted.end()) {
    throw DataError("duplicate record id " + std::to_string(*dup));
  }

  std::set<std::string> names;
  auto claim = [&names](const std::string& name) {
    if (name.empty()) throw DataError("column with empty name");
    if (!names.insert(name).second) {
      throw DataError("column '" + name + "' declared more than once");
    }
  };

  for (const auto& col : score_columns_) {
    claim(col.name);
    check_length(col.name, col.values.size(), n);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = col.values[i];
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        bad_value(col.name, i, v, "a normalized score in [0,1]");
      }
    }
  }
  for (const auto& col : fairness_columns_) {
    claim(col.name);
    check_length(col.name, col.values.size(), n);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = col.values[i];
      if (col.kind == AttrKind::kBinary) {
        if (v != 0.0 && v != 1.0) bad_value(col.name, i, v, "binary {0,1}");
      } else if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        bad_value(col.name, i, v, "in [0,1]");
      }
    }
  }
  if (outcome_) {
    claim(outcome_->name);
    check_length(outcome_->name, outcome_->values.size(), n);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = outcome_->values[i];
      if (v != 0.0 && v != 1.0) bad_value(outcome_->name, i, v, "binary {0,1}");
    }
  }
}

const ScoreColumn* RecordTable::find_score(std::string_view name) const noexcept {
  for (const auto& col : score_columns_) {
    if (col.name == name) return &col;
  }
  return nullptr;
}

const FairnessColumn* RecordTable::find_fairness(
    std::string_view name) const noexcept {
  for (const auto& col : fairness_columns_) {
    if (col.name == name) return &col;
  }
  return nullptr;
}

const ScoreColumn& RecordTable::score(std::string_view name) const {
  if (const auto* col = find_score(name)) return *col;
  throw ConfigError("unknown score attribute '" + std::string(name) + "'");
}

const FairnessColumn& RecordTable::fairness(std::string_view name) const {
  if (const auto* col = find_fairness(name)) return *col;
  throw ConfigError("unknown fairness attribute '" + std::string(name) + "'");
}

std::vector<std::string> RecordTable::fairness_names() const {
  std::vector<std::string> out;
  out.reserve(fairness_columns_.size());
  for (const auto& col : fairness_columns_) out.push_back(col.name);
  return out;
}

std::vector<std::string> RecordTable::score_names() const {
  std::vector<std::string> out;
  out.reserve(score_columns_.size());
  for (const auto& col : score_columns_) out.push_back(col.name);
  return out;
}

RecordTable RecordTable::subset(std::span<const std::size_t> rows) const {
  auto gather = [&rows](const std::vector<double>& src) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) out.push_back(src[r]);
    return out;
  };
  std::vector<std::int64_t> ids;
  ids.reserve(rows.size());
  for (std::size_t r : rows) ids.push_back(ids_[r]);

  std::vector<ScoreColumn> scores;
  scores.reserve(score_columns_.size());
  for (const auto& col : score_columns_) {
    scores.push_back({col.name, gather(col.values)});
  }
  std::vector<FairnessColumn> fairness;
  fairness.reserve(fairness_columns_.size());
  for (const auto& col : fairness_columns_) {
    fairness.push_back({col.name, col.kind, gather(col.values)});
  }
  std::optional<OutcomeColumn> outcome;
  if (outcome_) outcome = OutcomeColumn{outcome_->name, gather(outcome_->values)};
  return RecordTable(std::move(ids), std::move(scores), std::move(fairness),
                     std::move(outcome));
}

}  // namespace fairbonus
