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

#include "fairbonus/baselines.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <thread>

#include "fairbonus/error.hpp"

namespace fairbonus {

namespace {

SelectionResult make_selection(const RecordTable& table,
                               std::vector<std::size_t> rows,
                               std::span<const double> scores, double k) {
  SelectionResult sel;
  sel.k_count = rows.size();
  sel.raised_to_minimum =
      std::floor(k * static_cast<double>(table.size()) + 1e-9) < 1.0;
  sel.selected_rows = std::move(rows);
  for (std::size_t r : sel.selected_rows) sel.selected_ids.push_back(table.ids()[r]);
  if (!sel.selected_rows.empty()) sel.threshold_score = scores[sel.selected_rows.back()];
  return sel;
}

std::vector<double> base_scores(const RecordTable& table, const RankingSpec& spec) {
  const Scorer scorer(table, spec, {});
  std::vector<double> s(table.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = scorer.base(i);
  return s;
}

const FairnessColumn& binary_column(const RecordTable& table,
                                    const std::string& name) {
  const auto& col = table.fairness(name);
  if (col.kind != AttrKind::kBinary) {
    throw ConfigError("group attribute '" + name + "' must be binary");
  }
  return col;
}

}  // namespace

QuotaResult quota_select(const RecordTable& table, const RankingSpec& spec,
                         const QuotaSpec& quota) {
  if (!(quota.quota_fraction >= 0.0 && quota.quota_fraction <= 1.0)) {
    throw ConfigError("quota_fraction must lie in [0,1]");
  }
  if (quota.protected_attrs.empty()) {
    throw ConfigError("quota needs at least one protected attribute");
  }
  std::vector<const FairnessColumn*> cols;
  for (const auto& name : quota.protected_attrs) {
    cols.push_back(&binary_column(table, name));
  }
  auto is_protected = [&cols](std::size_t r) {
    return std::any_of(cols.begin(), cols.end(),
                       [r](const auto* c) { return c->values[r] == 1.0; });
  };

  const auto scores = base_scores(table, spec);
  const auto order = rank_all(scores, table.ids());
  const std::size_t k_count = selection_count(table.size(), spec.k);

  QuotaResult result;
  result.reserved = static_cast<std::size_t>(
      std::floor(quota.quota_fraction * static_cast<double>(k_count) + 1e-9));
  std::vector<char> taken(table.size(), 0);
  std::vector<std::size_t> rows;
  for (std::size_t r : order) {
    if (rows.size() == result.reserved) break;
    if (is_protected(r)) {
      rows.push_back(r);
      taken[r] = 1;
    }
  }
  result.shortfall = result.reserved - rows.size();
  for (std::size_t r : order) {
    if (rows.size() == k_count) break;
    if (!taken[r]) {
      rows.push_back(r);
      taken[r] = 1;
    }
  }
  const auto ids = table.ids();
  std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return ids[a] < ids[b];
  });
  result.selection = make_selection(table, std::move(rows), scores, spec.k);
  return result;
}

ConstraintSet constraints_from_target(const RecordTable& table,
                                      const DisparityVector& target,
                                      std::size_t k_count) {
  ConstraintSet set;
  const auto n = static_cast<double>(table.size());
  for (std::size_t f = 0; f < target.attrs.size(); ++f) {
    const auto& col = binary_column(table, target.attrs[f]);
    const double mean = std::accumulate(col.values.begin(), col.values.end(), 0.0) / n;
    const double want = (mean + target.components[f]) * static_cast<double>(k_count);
    const double clamped =
        std::clamp(std::ceil(want - 1e-9), 0.0, static_cast<double>(k_count));
    set.minima.push_back({target.attrs[f], static_cast<std::size_t>(clamped)});
  }
  return set;
}

namespace {

// Unplaced records bucketed by group-membership bitmask, used to decide
// whether the outstanding minima can still be met.
class CoverState {
 public:
  explicit CoverState(std::size_t groups)
      : groups_(groups), pattern_count_(std::size_t{1} << groups, 0) {}

  void add(std::uint32_t mask) { ++pattern_count_[mask]; }
  void remove(std::uint32_t mask) { --pattern_count_[mask]; }

  // True when `slots` further records can bring every deficit to zero.
  // Fast path: deficits can be met by disjoint picks. Otherwise a greedy
  // multicover witness (largest overlap with the open deficits first).
  bool satisfiable(std::vector<std::size_t> deficit, std::size_t slots) const {
    std::size_t total = 0;
    for (std::size_t g = 0; g < groups_; ++g) {
      total += deficit[g];
      if (available(g) < deficit[g]) return false;
    }
    if (total <= slots) return true;

    std::vector<std::size_t> left = pattern_count_;
    while (true) {
      std::uint32_t open = 0;
      for (std::size_t g = 0; g < groups_; ++g) {
        if (deficit[g] > 0) open |= (1u << g);
      }
      if (open == 0) return true;
      if (slots == 0) return false;
      std::uint32_t best = 0;
      int best_cover = 0;
      for (std::uint32_t p = 1; p < left.size(); ++p) {
        if (left[p] == 0) continue;
        const int cover = std::popcount(p & open);
        if (cover > best_cover) {
          best_cover = cover;
          best = p;
        }
      }
      if (best_cover == 0) return false;
      std::size_t take = std::min(left[best], slots);
      for (std::size_t g = 0; g < groups_; ++g) {
        if (best & open & (1u << g)) take = std::min(take, deficit[g]);
      }
      left[best] -= take;
      slots -= take;
      for (std::size_t g = 0; g < groups_; ++g) {
        if (best & (1u << g)) deficit[g] -= std::min(deficit[g], take);
      }
    }
  }

  std::size_t available(std::size_t g) const {
    std::size_t count = 0;
    for (std::uint32_t p = 0; p < pattern_count_.size(); ++p) {
      if (p & (1u << g)) count += pattern_count_[p];
    }
    return count;
  }

 private:
  std::size_t groups_;
  std::vector<std::size_t> pattern_count_;
};

}  // namespace

SelectionResult greedy_reranker(const RecordTable& table,
                                const RankingSpec& spec,
                                const ConstraintSet& constraints) {
  const std::size_t groups = constraints.minima.size();
  if (groups > 20) throw ConfigError("greedy re-ranker supports at most 20 groups");
  const std::size_t k_count = selection_count(table.size(), spec.k);

  std::vector<const FairnessColumn*> cols;
  std::vector<std::size_t> deficit;
  for (const auto& m : constraints.minima) {
    cols.push_back(&binary_column(table, m.attr));
    deficit.push_back(m.min_count);
  }
  std::vector<std::uint32_t> mask(table.size(), 0);
  CoverState state(groups);
  for (std::size_t r = 0; r < table.size(); ++r) {
    for (std::size_t g = 0; g < groups; ++g) {
      if (cols[g]->values[r] == 1.0) mask[r] |= (1u << g);
    }
    state.add(mask[r]);
  }
  for (std::size_t g = 0; g < groups; ++g) {
    if (deficit[g] > k_count || state.available(g) < deficit[g]) {
      std::ostringstream msg;
      msg << "group '" << constraints.minima[g].attr << "' needs "
          << deficit[g] << " of " << k_count << " slots but has "
          << state.available(g) << " records";
      throw InfeasibleError(msg.str());
    }
  }
  if (!state.satisfiable(deficit, k_count)) {
    throw InfeasibleError("group minima cannot be met jointly within " +
                          std::to_string(k_count) + " slots");
  }

  // Marginal DCG of a record at a fixed position is its weight times the
  // position discount, so the best candidate is the highest-weight one.
  const auto scores = base_scores(table, spec);
  const auto order = rank_all(scores, table.ids());
  std::vector<char> placed(table.size(), 0);
  std::vector<std::size_t> rows;
  rows.reserve(k_count);
  std::size_t first_open = 0;
  while (rows.size() < k_count) {
    while (first_open < order.size() && placed[order[first_open]]) ++first_open;
    const std::size_t slots_after = k_count - rows.size() - 1;
    bool done = false;
    for (std::size_t i = first_open; i < order.size() && !done; ++i) {
      const std::size_t r = order[i];
      if (placed[r]) continue;
      std::vector<std::size_t> next = deficit;
      for (std::size_t g = 0; g < groups; ++g) {
        if ((mask[r] & (1u << g)) && next[g] > 0) --next[g];
      }
      state.remove(mask[r]);
      if (state.satisfiable(next, slots_after)) {
        placed[r] = 1;
        rows.push_back(r);
        deficit = std::move(next);
        done = true;
      } else {
        state.add(mask[r]);
      }
    }
    if (!done) {
      throw InfeasibleError("greedy re-ranking ran out of feasible records at position " +
                            std::to_string(rows.size() + 1));
    }
  }
  return make_selection(table, std::move(rows), scores, spec.k);
}

namespace {

struct Candidate {
  double norm = 0.0;
  double l1 = 0.0;
  std::vector<double> values;
  bool valid = false;
};

bool better(const Candidate& a, const Candidate& b) {
  if (!b.valid) return a.valid;
  if (!a.valid) return false;
  if (a.norm != b.norm) return a.norm < b.norm;
  if (a.l1 != b.l1) return a.l1 < b.l1;
  return a.values < b.values;
}

}  // namespace

OracleResult grid_search_oracle(const RecordTable& table,
                                const RankingSpec& spec,
                                const std::vector<std::string>& attrs,
                                double granularity, double bonus_max,
                                const Objective& objective, unsigned threads) {
  if (attrs.empty()) throw ConfigError("oracle needs at least one attribute");
  if (!(granularity > 0.0)) throw ConfigError("granularity must be positive");
  if (!(bonus_max >= 0.0)) throw ConfigError("bonus_max must be nonnegative");
  const auto levels =
      static_cast<std::size_t>(std::floor(bonus_max / granularity + 1e-9)) + 1;
  std::size_t total = 1;
  for (std::size_t d = 0; d < attrs.size(); ++d) {
    if (total > kOracleGridLimit / levels) {
      std::ostringstream msg;
      msg << "oracle grid of " << levels << "^" << attrs.size()
          << " points exceeds " << kOracleGridLimit
          << "; use a coarser granularity or a smaller bonus_max";
      throw ConfigError(msg.str());
    }
    total *= levels;
  }

  const Scorer scorer(table, spec, attrs);
  std::vector<std::size_t> rows(table.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});

  auto search = [&](std::size_t begin, std::size_t end) {
    Candidate best;
    std::vector<double> b(attrs.size());
    for (std::size_t idx = begin; idx < end; ++idx) {
      // Mixed-radix decode; the first attribute is the most significant digit
      // so grid order equals lexicographic order.
      std::size_t rest = idx;
      for (std::size_t d = attrs.size(); d-- > 0;) {
        b[d] = static_cast<double>(rest % levels) * granularity;
        rest /= levels;
      }
      const auto value = evaluate_objective(table, scorer, rows, attrs, b,
                                            spec.k, objective);
      Candidate c{value.norm(), 0.0, b, true};
      for (double v : b) c.l1 += v;
      if (better(c, best)) best = std::move(c);
    }
    return best;
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total)));
  std::vector<Candidate> partial(workers);
  if (workers == 1) {
    partial[0] = search(0, total);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(total, w * chunk);
      const std::size_t end = std::min(total, begin + chunk);
      pool.emplace_back([&, w, begin, end] { partial[w] = search(begin, end); });
    }
  }
  Candidate best;
  for (auto& c : partial) {
    if (better(c, best)) best = std::move(c);
  }
  OracleResult result;
  result.bonus = BonusVector{attrs, best.values, granularity};
  result.norm = best.norm;
  result.evaluated = total;
  return result;
}

}  // namespace fairbonus
