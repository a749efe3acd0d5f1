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

#include "fairbonus/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "fairbonus/error.hpp"

namespace fairbonus {

double DisparityVector::norm() const {
  double acc = 0.0;
  for (double c : components) acc += c * c;
  return std::sqrt(acc);
}

double DisparityVector::at(std::string_view attr) const {
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (attrs[i] == attr) return components[i];
  }
  throw ConfigError("metric vector has no attribute '" + std::string(attr) + "'");
}

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::kDisparity: return "disparity";
    case MetricKind::kDisparateImpact: return "di";
    case MetricKind::kFprGap: return "fpr";
  }
  return "disparity";
}

MetricKind parse_metric_kind(std::string_view text) {
  if (text == "disparity") return MetricKind::kDisparity;
  if (text == "di" || text == "disparate_impact") return MetricKind::kDisparateImpact;
  if (text == "fpr" || text == "fpr_gap") return MetricKind::kFprGap;
  throw ConfigError("unknown objective '" + std::string(text) +
                    "' (expected disparity|di|fpr)");
}

namespace {

// Running population and selection statistics for one metric. Every metric
// here is a function of a handful of sums, so prefixes of a ranking can be
// evaluated incrementally.
class Accumulator {
 public:
  Accumulator(const RecordTable& table, std::span<const std::string> attrs,
              MetricKind kind)
      : kind_(kind), attrs_(attrs.begin(), attrs.end()) {
    for (const auto& name : attrs) {
      const auto& col = table.fairness(name);
      if (kind != MetricKind::kDisparity && col.kind != AttrKind::kBinary) {
        throw ConfigError(std::string(to_string(kind)) +
                          " requires binary fairness attributes; '" + name +
                          "' is continuous");
      }
      columns_.push_back(&col.values);
    }
    if (kind == MetricKind::kFprGap) {
      if (!table.outcome()) {
        throw ConfigError("fpr objective requires an outcome column");
      }
      outcome_ = &table.outcome()->values;
    }
    const std::size_t d = columns_.size();
    pop_sum_.assign(d, 0.0);
    pop_neg_.assign(d, 0.0);
    sel_sum_.assign(d, 0.0);
    sel_neg_.assign(d, 0.0);
  }

  void add_population(std::size_t row) { add(row, pop_sum_, pop_neg_, pop_n_, pop_negatives_); }
  void add_selected(std::size_t row) { add(row, sel_sum_, sel_neg_, sel_n_, sel_negatives_); }

  std::size_t selected() const { return static_cast<std::size_t>(sel_n_); }

  // Metric vector for the current selection; warnings are appended once per
  // degenerate attribute.
  std::vector<double> value(std::vector<std::string>* warnings) const {
    if (sel_n_ <= 0.0) throw DataError("metric evaluated on an empty selection");
    std::vector<double> out(columns_.size(), 0.0);
    for (std::size_t f = 0; f < columns_.size(); ++f) {
      switch (kind_) {
        case MetricKind::kDisparity:
          out[f] = sel_sum_[f] / sel_n_ - pop_sum_[f] / pop_n_;
          break;
        case MetricKind::kDisparateImpact:
          out[f] = scaled_di(f, warnings);
          break;
        case MetricKind::kFprGap:
          out[f] = fpr_difference(f, warnings);
          break;
      }
    }
    return out;
  }

 private:
  void add(std::size_t row, std::vector<double>& sum, std::vector<double>& neg,
           double& n, double& negatives) {
    n += 1.0;
    const bool negative = outcome_ && (*outcome_)[row] == 0.0;
    if (negative) negatives += 1.0;
    for (std::size_t f = 0; f < columns_.size(); ++f) {
      const double v = (*columns_[f])[row];
      sum[f] += v;
      if (negative) neg[f] += v;
    }
  }

  double scaled_di(std::size_t f, std::vector<std::string>* warnings) const {
    const double members = pop_sum_[f];
    const double others = pop_n_ - members;
    if (members <= 0.0 || others <= 0.0) {
      warn(warnings, f, "one side of the group is empty; disparate impact set to 0");
      return 0.0;
    }
    const double p_member = sel_sum_[f] / members;
    const double p_other = (sel_n_ - sel_sum_[f]) / others;
    if (p_member == p_other) return 0.0;
    if (p_member < p_other) return -(1.0 - p_member / p_other);
    return 1.0 - p_other / p_member;
  }

  double fpr_difference(std::size_t f, std::vector<std::string>* warnings) const {
    if (pop_neg_[f] <= 0.0 || pop_negatives_ <= 0.0) {
      warn(warnings, f, "group has no real negatives; fpr gap set to 0");
      return 0.0;
    }
    const double group = sel_neg_[f] / pop_neg_[f];
    const double overall = sel_negatives_ / pop_negatives_;
    return std::clamp(group - overall, -1.0, 1.0);
  }

  void warn(std::vector<std::string>* warnings, std::size_t f,
            const char* what) const {
    if (!warnings) return;
    std::string msg = attrs_[f] + ": " + what;
    if (std::find(warnings->begin(), warnings->end(), msg) == warnings->end()) {
      warnings->push_back(std::move(msg));
    }
  }

  MetricKind kind_;
  std::vector<std::string> attrs_;
  std::vector<const std::vector<double>*> columns_;
  const std::vector<double>* outcome_ = nullptr;
  std::vector<double> pop_sum_, pop_neg_, sel_sum_, sel_neg_;
  double pop_n_ = 0.0, pop_negatives_ = 0.0, sel_n_ = 0.0, sel_negatives_ = 0.0;
};

DisparityVector on_selection(const RecordTable& table,
                             const SelectionResult& selection,
                             std::span<const std::string> attrs,
                             MetricKind kind) {
  if (selection.selected_rows.empty()) {
    throw DataError("metric evaluated on an empty selection");
  }
  Accumulator acc(table, attrs, kind);
  for (std::size_t r = 0; r < table.size(); ++r) acc.add_population(r);
  for (std::size_t r : selection.selected_rows) {
    if (r >= table.size()) throw ConfigError("selection row outside the table");
    acc.add_selected(r);
  }
  DisparityVector out;
  out.attrs.assign(attrs.begin(), attrs.end());
  out.components = acc.value(&out.warnings);
  return out;
}

double discount(std::size_t rank) {
  return 1.0 / std::log2(static_cast<double>(rank) + 1.0);
}

}  // namespace

std::vector<std::size_t> checkpoint_ranks(std::size_t n, const LogDiscount& ld) {
  if (!(ld.k_max > 0.0 && ld.k_max <= 1.0)) {
    throw ConfigError("k_max must lie in (0,1]");
  }
  std::vector<std::size_t> ranks;
  if (!ld.fractions.empty()) {
    for (double f : ld.fractions) {
      if (!(f > 0.0 && f <= 1.0)) {
        throw ConfigError("log-discount checkpoint fractions must lie in (0,1]");
      }
      if (f <= ld.k_max + 1e-12) ranks.push_back(selection_count(n, f));
    }
    std::sort(ranks.begin(), ranks.end());
    ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
  } else {
    if (ld.step == 0) throw ConfigError("log-discount step must be positive");
    const auto limit = static_cast<std::size_t>(
        std::floor(ld.k_max * static_cast<double>(n) + 1e-9));
    for (std::size_t i = ld.step; i <= limit; i += ld.step) ranks.push_back(i);
  }
  if (ranks.empty()) {
    std::ostringstream msg;
    msg << "no log-discount checkpoint falls within k_max=" << ld.k_max
        << " of a ranking of " << n << " records";
    throw ConfigError(msg.str());
  }
  return ranks;
}

DisparityVector disparity(const RecordTable& table,
                          const SelectionResult& selection,
                          std::span<const std::string> attrs) {
  return on_selection(table, selection, attrs, MetricKind::kDisparity);
}

DisparityVector disparate_impact_scaled(const RecordTable& table,
                                        const SelectionResult& selection,
                                        std::span<const std::string> attrs) {
  return on_selection(table, selection, attrs, MetricKind::kDisparateImpact);
}

DisparityVector fpr_gap(const RecordTable& table,
                        const SelectionResult& selection,
                        std::span<const std::string> attrs) {
  return on_selection(table, selection, attrs, MetricKind::kFprGap);
}

DisparityVector evaluate_objective(const RecordTable& table,
                                   const Scorer& scorer,
                                   std::span<const std::size_t> rows,
                                   std::span<const std::string> attrs,
                                   std::span<const double> bonus, double k,
                                   const Objective& objective) {
  const std::size_t n = rows.size();
  if (n == 0) throw DataError("objective evaluated on an empty row set");

  std::vector<double> scores(n);
  std::vector<std::int64_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = scorer.score(rows[i], bonus);
    if (!std::isfinite(scores[i])) {
      throw DataError("non-finite score during objective evaluation");
    }
    ids[i] = table.ids()[rows[i]];
  }

  Accumulator acc(table, attrs, objective.kind);
  for (std::size_t r : rows) acc.add_population(r);

  DisparityVector out;
  out.attrs.assign(attrs.begin(), attrs.end());

  if (!objective.log_discount) {
    for (std::size_t pos : top_positions(scores, ids, selection_count(n, k))) {
      acc.add_selected(rows[pos]);
    }
    out.components = acc.value(&out.warnings);
    return out;
  }

  const auto ranks = checkpoint_ranks(n, *objective.log_discount);
  const auto order = top_positions(scores, ids, ranks.back());
  out.components.assign(attrs.size(), 0.0);
  double z = 0.0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < order.size() && next < ranks.size(); ++i) {
    acc.add_selected(rows[order[i]]);
    if (acc.selected() == ranks[next]) {
      const double w = discount(ranks[next]);
      const auto value = acc.value(&out.warnings);
      for (std::size_t f = 0; f < value.size(); ++f) out.components[f] += w * value[f];
      z += w;
      ++next;
    }
  }
  for (double& c : out.components) c /= z;
  return out;
}

DisparityVector evaluate_objective(const RecordTable& table,
                                   const RankingSpec& spec,
                                   const BonusVector& bonus,
                                   const Objective& objective) {
  const Scorer scorer(table, spec, bonus.attrs);
  std::vector<std::size_t> rows(table.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return evaluate_objective(table, scorer, rows, bonus.attrs, bonus.values,
                            spec.k, objective);
}

DisparityVector log_discounted_disparity(const RecordTable& table,
                                         const RankingSpec& spec,
                                         const BonusVector& bonus,
                                         const LogDiscount& checkpoints) {
  return evaluate_objective(table, spec, bonus,
                            Objective{MetricKind::kDisparity, checkpoints});
}

std::vector<double> utility_weights(const RecordTable& table,
                                    const RankingSpec& spec) {
  const Scorer scorer(table, spec, {});
  std::vector<double> w(table.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = scorer.gain(i);
  return w;
}

double ndcg_at_k(std::span<const std::size_t> original,
                 std::span<const std::size_t> adjusted, double k,
                 std::span<const double> weights) {
  const std::size_t m = selection_count(original.size(), k);
  if (adjusted.size() < m) {
    throw ConfigError("adjusted ranking is shorter than the evaluation depth");
  }
  double ideal = 0.0;
  double actual = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = discount(i + 1);
    ideal += weights[original[i]] * d;
    actual += weights[adjusted[i]] * d;
  }
  if (ideal == 0.0) throw DataError("ideal DCG is zero; nDCG undefined");
  return actual / ideal;
}

ExposureReport exposure_ddp(std::span<const std::size_t> full_ranking,
                            std::span<const Group> groups) {
  std::size_t max_row = 0;
  for (std::size_t r : full_ranking) max_row = std::max(max_row, r);
  constexpr auto kUnranked = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> rank(full_ranking.empty() ? 0 : max_row + 1, kUnranked);
  for (std::size_t i = 0; i < full_ranking.size(); ++i) rank[full_ranking[i]] = i + 1;

  ExposureReport report;
  for (const auto& g : groups) {
    if (g.rows.empty()) {
      report.warnings.push_back(g.name + ": empty group excluded from DDP");
      continue;
    }
    double exposure = 0.0;
    for (std::size_t r : g.rows) {
      if (r >= rank.size() || rank[r] == kUnranked) {
        throw ConfigError("group '" + g.name + "' contains an unranked record");
      }
      exposure += discount(rank[r]);
    }
    report.groups.push_back(g.name);
    report.per_capita.push_back(exposure / static_cast<double>(g.rows.size()));
  }
  if (report.per_capita.size() >= 2) {
    const auto [lo, hi] =
        std::minmax_element(report.per_capita.begin(), report.per_capita.end());
    report.ddp = *hi - *lo;
  }
  return report;
}

std::vector<Group> binary_groups(const RecordTable& table,
                                 std::span<const std::string> attrs,
                                 std::vector<std::string>* warnings) {
  std::vector<const FairnessColumn*> cols;
  for (const auto& name : attrs) {
    const auto& col = table.fairness(name);
    if (col.kind != AttrKind::kBinary) {
      if (warnings) warnings->push_back(name + ": continuous attribute excluded from DDP");
      continue;
    }
    cols.push_back(&col);
  }
  std::vector<Group> groups;
  for (const auto* col : cols) {
    Group g{col->name, {}};
    for (std::size_t r = 0; r < table.size(); ++r) {
      if (col->values[r] == 1.0) g.rows.push_back(r);
    }
    groups.push_back(std::move(g));
  }
  if (!cols.empty()) {
    Group none{"none", {}};
    for (std::size_t r = 0; r < table.size(); ++r) {
      const bool any = std::any_of(cols.begin(), cols.end(),
                                   [r](const auto* c) { return c->values[r] == 1.0; });
      if (!any) none.rows.push_back(r);
    }
    if (!none.rows.empty()) groups.push_back(std::move(none));
  }
  return groups;
}

}  // namespace fairbonus
