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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "fairbonus/error.hpp"
#include "fairbonus/metrics.hpp"
#include "fairbonus/ranking.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace fairbonus;
using fairbonus::testing::iota_ids;
using fairbonus::testing::random_table;
using fairbonus::testing::small_table;

namespace {

SelectionResult select_rows(std::vector<std::size_t> rows) {
  SelectionResult s;
  s.selected_rows = std::move(rows);
  s.k_count = s.selected_rows.size();
  return s;
}

// 10 records: rows 0..2 are in the group (30%), one of the first five selected.
RecordTable low_income_table() {
  return small_table(std::vector<double>(10, 0.5), {{0, 0, 0, 0, 1, 1, 1, 0, 0, 0}}, {"low_income"});
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("disparity is selected mean minus population mean") {
  const auto t = low_income_table();
  // 5 selected, 1 member: 0.2 vs. 0.3.
  const auto d = disparity(t, select_rows({0, 1, 2, 3, 4}), std::vector<std::string>{"low_income"});
  CHECK(d.components[0] == doctest::Approx(-0.1));
  CHECK(d.norm() == doctest::Approx(0.1));
}

TEST_CASE("continuous disparity") {
  // Mean 0.2 overall, 0.5 among the selected pair.
  RecordTable t(iota_ids(5), {{"s", std::vector<double>(5, 0.5)}},
                {{"income", AttrKind::kContinuous, {0.5, 0.5, 0.0, 0.0, 0.0}}});
  const auto d = disparity(t, select_rows({0, 1}), std::vector<std::string>{"income"});
  CHECK(d.components[0] == doctest::Approx(0.3));
}

TEST_CASE("constant column has zero disparity") {
  const auto t = small_table({0.1, 0.2, 0.3}, {{1, 1, 1}}, {"all"});
  CHECK(disparity(t, select_rows({2}), std::vector<std::string>{"all"}).components[0] == 0.0);
}

TEST_CASE("log discount normalization identity") {
  // Every prefix of the top half holds 30% members; the population holds 50%.
  const std::size_t n = 100;
  std::vector<double> s(n), f(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = 1.0 - static_cast<double>(i) / n;
    f[i] = (i % 10) < (i < 50 ? 3u : 7u) ? 1.0 : 0.0;
  }
  const auto t = small_table(s, {f}, {"g"});
  RankingSpec spec{{{"s", 1.0}}, Orientation::kHigherBetter, 0.5, 100.0};
  const auto d = log_discounted_disparity(t, spec, BonusVector::zeros({"g"}), LogDiscount{0.5, 10, {}});
  CHECK(d.components[0] == doctest::Approx(-0.2));
}

TEST_CASE("two-checkpoint hand evaluation") {
  // 40 records, 12 members: none in the top 10, six at ranks 11-16, six in
  // the bottom half. Disparity is -0.3 at rank 10 and 0.0 at rank 20.
  std::vector<double> s(40), f(40, 0.0);
  for (std::size_t i = 0; i < 40; ++i) s[i] = 1.0 - i / 40.0;
  for (std::size_t i = 10; i < 16; ++i) f[i] = 1.0;
  for (std::size_t i = 30; i < 36; ++i) f[i] = 1.0;
  const auto t = small_table(s, {f}, {"g"});
  RankingSpec spec{{{"s", 1.0}}, Orientation::kHigherBetter, 0.5, 100.0};
  const auto d = log_discounted_disparity(t, spec, BonusVector::zeros({"g"}), LogDiscount{0.5, 10, {}});
  const double w10 = 1.0 / std::log2(11.0);
  const double w20 = 1.0 / std::log2(21.0);
  CHECK(d.components[0] == doctest::Approx(-0.3 * w10 / (w10 + w20)).epsilon(1e-12));
}

TEST_CASE("k_max bounds the checkpoints") {
  CHECK(checkpoint_ranks(100, LogDiscount{0.5, 10, {}}) ==
        std::vector<std::size_t>{10, 20, 30, 40, 50});
  CHECK(checkpoint_ranks(100, LogDiscount{1.0, 10, {0.2, 0.6, 0.1}}) ==
        std::vector<std::size_t>{10, 20, 60});
  CHECK(checkpoint_ranks(100, LogDiscount{0.5, 10, {0.2, 0.6}}) == std::vector<std::size_t>{20});
  CHECK_THROWS_AS(checkpoint_ranks(5, LogDiscount{0.5, 10, {}}), ConfigError);
  CHECK_THROWS_AS(checkpoint_ranks(100, LogDiscount{0.0, 10, {}}), ConfigError);
}

TEST_CASE("a single checkpoint equals disparity at that depth") {
  const auto t = random_table(21, 200, 2);
  RankingSpec spec{{{"s", 1.0}}, Orientation::kHigherBetter, 0.15, 100.0};
  const auto bonus = BonusVector{{"f0", "f1"}, {3.0, 1.5}, 0.5};
  const auto single = log_discounted_disparity(t, spec, bonus, LogDiscount{1.0, 10, {0.15}});
  const auto at_k = evaluate_objective(t, spec, bonus, Objective{});
  CHECK(single.components[0] == doctest::Approx(at_k.components[0]).epsilon(1e-12));
  CHECK(single.components[1] == doctest::Approx(at_k.components[1]).epsilon(1e-12));
}

TEST_CASE("scaled disparate impact") {
  // 40 members (2 selected: 0.05) and 60 others (6 selected: 0.10).
  std::vector<double> f(100, 0.0);
  for (std::size_t i = 0; i < 40; ++i) f[i] = 1.0;
  const auto t = small_table(std::vector<double>(100, 0.5), {f}, {"g"});
  const auto sel = select_rows({0, 1, 40, 41, 42, 43, 44, 45});
  CHECK(disparate_impact_scaled(t, sel, std::vector<std::string>{"g"}).components[0] ==
        doctest::Approx(-0.5));
  // Equal rates.
  const auto eq = select_rows({0, 1, 40, 41, 42});
  CHECK(disparate_impact_scaled(t, eq, std::vector<std::string>{"g"}).components[0] ==
        doctest::Approx(0.0));
  // Members never selected.
  const auto none = select_rows({40, 41});
  CHECK(disparate_impact_scaled(t, none, std::vector<std::string>{"g"}).components[0] ==
        doctest::Approx(-1.0));
}

TEST_CASE("disparate impact requires binary attributes") {
  RecordTable t(iota_ids(3), {{"s", {0.1, 0.2, 0.3}}}, {{"c", AttrKind::kContinuous, {0.1, 0.2, 0.3}}});
  CHECK_THROWS_AS(disparate_impact_scaled(t, select_rows({0}), std::vector<std::string>{"c"}),
                  ConfigError);
}

TEST_CASE("disparate impact and disparity agree in sign") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto t = random_table(seed, 30, 2);
    Rng rng(seed);
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < 30; ++i) {
      if (rng.bernoulli(0.3)) rows.push_back(i);
    }
    if (rows.empty()) continue;
    const std::vector<std::string> attrs{"f0", "f1"};
    const auto d = disparity(t, select_rows(rows), attrs);
    const auto di = disparate_impact_scaled(t, select_rows(rows), attrs);
    for (int f = 0; f < 2; ++f) {
      const auto sd = (d.components[f] > 1e-12) - (d.components[f] < -1e-12);
      const auto sdi = (di.components[f] > 1e-12) - (di.components[f] < -1e-12);
      if (di.warnings.empty()) CHECK(sd == sdi);
    }
  }
}

TEST_CASE("fpr gap") {
  // 10 negatives overall, 3 selected: overall FPR 0.3. Group has 5 negatives,
  // 2 selected: FPR 0.4.
  std::vector<double> f(12, 0.0), y(12, 0.0);
  for (std::size_t i = 0; i < 5; ++i) f[i] = 1.0;
  y[10] = y[11] = 1.0;
  RecordTable t(iota_ids(12), {{"s", std::vector<double>(12, 0.5)}},
                {{"g", AttrKind::kBinary, f}}, OutcomeColumn{"y", y});
  const auto d = fpr_gap(t, select_rows({0, 1, 5, 10}), std::vector<std::string>{"g"});
  CHECK(d.components[0] == doctest::Approx(0.1));
}

TEST_CASE("fpr gap with only true positives selected from the group") {
  std::vector<double> f{1, 1, 0, 0, 0, 0}, y{1, 0, 0, 0, 0, 1};
  RecordTable t(iota_ids(6), {{"s", std::vector<double>(6, 0.5)}}, {{"g", AttrKind::kBinary, f}},
                OutcomeColumn{"y", y});
  // Selected: row 0 (group, true positive) and row 2 (false positive outside).
  const auto d = fpr_gap(t, select_rows({0, 2}), std::vector<std::string>{"g"});
  CHECK(d.components[0] == doctest::Approx(-0.25));
}

TEST_CASE("fpr gap edge cases") {
  RecordTable no_outcome(iota_ids(2), {{"s", {0.1, 0.2}}}, {{"g", AttrKind::kBinary, {1, 0}}});
  CHECK_THROWS_AS(fpr_gap(no_outcome, select_rows({0}), std::vector<std::string>{"g"}), ConfigError);
  RecordTable all_pos(iota_ids(3), {{"s", {0.1, 0.2, 0.3}}}, {{"g", AttrKind::kBinary, {1, 0, 0}}},
                      OutcomeColumn{"y", {1, 0, 0}});
  const auto d = fpr_gap(all_pos, select_rows({0}), std::vector<std::string>{"g"});
  CHECK(d.components[0] == 0.0);
  CHECK(d.warnings.size() == 1);
  // Identical group and overall FPR.
  RecordTable same(iota_ids(4), {{"s", {0.1, 0.2, 0.3, 0.4}}}, {{"g", AttrKind::kBinary, {1, 1, 0, 0}}},
                   OutcomeColumn{"y", {0, 0, 0, 0}});
  CHECK(fpr_gap(same, select_rows({0, 2}), std::vector<std::string>{"g"}).components[0] == 0.0);
}

TEST_CASE("ndcg identities") {
  const std::vector<double> w{5, 4, 4, 1};
  const std::vector<std::size_t> r{0, 1, 2, 3};
  CHECK(ndcg_at_k(r, r, 0.5, w) == doctest::Approx(1.0));
  const std::vector<std::size_t> swapped{0, 2, 1, 3};
  CHECK(ndcg_at_k(r, swapped, 0.75, w) == doctest::Approx(1.0));
  const std::vector<std::size_t> worse{3, 1, 2, 0};
  CHECK(ndcg_at_k(r, worse, 0.5, w) < 1.0);
  CHECK_THROWS_AS(ndcg_at_k(r, r, 0.5, std::vector<double>{0, 0, 0, 0}), DataError);
}

TEST_CASE("ndcg gains use pre-bonus scores and stay nonnegative") {
  RecordTable t(iota_ids(3), {{"d", {0.9, 0.1, 0.5}}}, {});
  RankingSpec lower{{{"d", 1.0}}, Orientation::kLowerBetter, 0.5, 10.0};
  const auto w = utility_weights(t, lower);
  for (double v : w) CHECK(v >= 0.0);
  CHECK(w[1] > w[2]);
  CHECK(w[2] > w[0]);
}

TEST_CASE("exposure ddp") {
  const std::vector<std::size_t> ranking{0, 1, 2};
  std::vector<Group> one{{"a", {0, 1, 2}}};
  CHECK(exposure_ddp(ranking, one).ddp == 0.0);
  std::vector<Group> two{{"a", {0}}, {"b", {2}}};
  CHECK(exposure_ddp(ranking, two).ddp == doctest::Approx(0.5));
  std::vector<Group> with_empty{{"a", {0}}, {"b", {}}, {"c", {2}}};
  const auto r = exposure_ddp(ranking, with_empty);
  CHECK(r.ddp == doctest::Approx(0.5));
  CHECK(r.warnings.size() == 1);
  CHECK(r.groups == std::vector<std::string>{"a", "c"});
}

TEST_CASE("binary groups add a none group and skip continuous columns") {
  RecordTable t(iota_ids(4), {{"s", {0.1, 0.2, 0.3, 0.4}}},
                {{"a", AttrKind::kBinary, {1, 0, 0, 1}},
                 {"b", AttrKind::kBinary, {0, 1, 0, 1}},
                 {"c", AttrKind::kContinuous, {0.5, 0.5, 0.5, 0.5}}});
  std::vector<std::string> warnings;
  const auto groups = binary_groups(t, std::vector<std::string>{"a", "b", "c"}, &warnings);
  REQUIRE(groups.size() == 3);
  CHECK(groups[2].name == "none");
  CHECK(groups[2].rows == std::vector<std::size_t>{2});
  CHECK(warnings.size() == 1);
}

TEST_CASE("metrics match brute-force recomputation on small tables") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 6 + seed % 5;
    const auto t = random_table(seed, n, 2, 0.4, true);
    const std::vector<std::string> attrs{"f0", "f1"};
    for (std::uint32_t bits = 1; bits < (1u << n); ++bits) {
      std::vector<std::size_t> rows;
      oracle::Mask mask(n, false);
      for (std::size_t i = 0; i < n; ++i) {
        if (bits >> i & 1u) {
          rows.push_back(i);
          mask[i] = true;
        }
      }
      const auto sel = select_rows(rows);
      const auto d = disparity(t, sel, attrs);
      const auto di = disparate_impact_scaled(t, sel, attrs);
      const auto fpr = fpr_gap(t, sel, attrs);
      for (std::size_t f = 0; f < 2; ++f) {
        const auto& col = t.fairness(attrs[f]).values;
        CHECK(std::fabs(d.components[f] - oracle::disparity(col, mask)) < 1e-9);
        CHECK(std::fabs(di.components[f] - oracle::scaled_di(col, mask)) < 1e-9);
        CHECK(std::fabs(fpr.components[f] - oracle::fpr_gap(col, t.outcome()->values, mask)) < 1e-9);
      }
    }
  }
}

}  // TEST_SUITE
