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

#ifndef FAIRBONUS_BASELINES_HPP_
#define FAIRBONUS_BASELINES_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fairbonus/metrics.hpp"
#include "fairbonus/ranking.hpp"
#include "fairbonus/record_table.hpp"

namespace fairbonus {

/// Single set-aside shared by every protected attribute: a record qualifies
/// when it holds any of `protected_attrs`.
struct QuotaSpec {
  double quota_fraction = 0.0;
  std::vector<std::string> protected_attrs;
};

struct QuotaResult {
  SelectionResult selection;
  std::size_t reserved = 0;
  std::size_t shortfall = 0;  // reserved slots left without a protected record
};

QuotaResult quota_select(const RecordTable& table, const RankingSpec& spec,
                         const QuotaSpec& quota);

struct GroupMinimum {
  std::string attr;  // binary fairness attribute; the group is attr == 1
  std::size_t min_count = 0;
};

struct ConstraintSet {
  std::vector<GroupMinimum> minima;
};

// minimum_g = ceil((mean_g + target_g) * k_count), clamped to [0, k_count].
ConstraintSet constraints_from_target(const RecordTable& table,
                                      const DisparityVector& target,
                                      std::size_t k_count);

/// Greedy re-ranking: fills positions 1..k_count one at a time with the
/// unplaced record of highest utility weight (largest marginal DCG) whose
/// placement still leaves the group minima satisfiable by the remaining
/// positions. Throws InfeasibleError naming the offending group.
SelectionResult greedy_reranker(const RecordTable& table,
                                const RankingSpec& spec,
                                const ConstraintSet& constraints);

struct OracleResult {
  BonusVector bonus;
  double norm = 0.0;
  std::size_t evaluated = 0;
};

inline constexpr std::size_t kOracleGridLimit = 10'000'000;

/// Exhaustive search over {0, g, 2g, ..., bonus_max}^|attrs| minimizing the
/// full-table objective norm; ties go to the smallest L1 norm, then to the
/// lexicographically smallest vector. Grid points are split across
/// `threads` workers and merged in grid order.
OracleResult grid_search_oracle(const RecordTable& table,
                                const RankingSpec& spec,
                                const std::vector<std::string>& attrs,
                                double granularity, double bonus_max,
                                const Objective& objective,
                                unsigned threads = 1);

}  // namespace fairbonus

#endif  // FAIRBONUS_BASELINES_HPP_
