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

#ifndef FAIRBONUS_RECORD_TABLE_HPP_
#define FAIRBONUS_RECORD_TABLE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fairbonus {

enum class AttrKind { kBinary, kContinuous };

std::string_view to_string(AttrKind kind);

struct ScoreColumn {
  std::string name;
  std::vector<double> values;  // normalized to [0, 1]
};

struct FairnessColumn {
  std::string name;
  AttrKind kind = AttrKind::kBinary;
  std::vector<double> values;  // {0,1} when binary, [0,1] when continuous
};

struct OutcomeColumn {
  std::string name;
  std::vector<double> values;  // {0,1}
};

/// Immutable columnar dataset: score attributes feed the ranking function,
/// fairness attributes are the dimensions disparity is measured on, and the
/// optional outcome column carries observed labels (used by the FPR metric).
///
/// The constructor validates every invariant and throws DataError on
/// violation; a constructed table is always valid and safe to share between
/// threads.
class RecordTable {
 public:
  RecordTable(std::vector<std::int64_t> ids,
              std::vector<ScoreColumn> score_columns,
              std::vector<FairnessColumn> fairness_columns,
              std::optional<OutcomeColumn> outcome = std::nullopt);

  std::size_t size() const noexcept { return ids_.size(); }

  std::span<const std::int64_t> ids() const noexcept { return ids_; }
  const std::vector<ScoreColumn>& score_columns() const noexcept {
    return score_columns_;
  }
  const std::vector<FairnessColumn>& fairness_columns() const noexcept {
    return fairness_columns_;
  }
  const std::optional<OutcomeColumn>& outcome() const noexcept {
    return outcome_;
  }

  // Lookups return nullptr when the column does not exist.
  const ScoreColumn* find_score(std::string_view name) const noexcept;
  const FairnessColumn* find_fairness(std::string_view name) const noexcept;

  // Throws ConfigError naming the missing column.
  const ScoreColumn& score(std::string_view name) const;
  const FairnessColumn& fairness(std::string_view name) const;

  std::vector<std::string> fairness_names() const;
  std::vector<std::string> score_names() const;

  // Copy of the given rows, in the given order.
  RecordTable subset(std::span<const std::size_t> rows) const;

 private:
  std::vector<std::int64_t> ids_;
  std::vector<ScoreColumn> score_columns_;
  std::vector<FairnessColumn> fairness_columns_;
  std::optional<OutcomeColumn> outcome_;
};

}  // namespace fairbonus

#endif  // FAIRBONUS_RECORD_TABLE_HPP_
