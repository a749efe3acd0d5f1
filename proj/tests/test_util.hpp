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

#ifndef FAIRBONUS_TESTS_TEST_UTIL_HPP_
#define FAIRBONUS_TESTS_TEST_UTIL_HPP_

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "fairbonus/record_table.hpp"
#include "fairbonus/rng.hpp"

namespace fairbonus::testing {

inline std::vector<std::int64_t> iota_ids(std::size_t n) {
  std::vector<std::int64_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

// One score column "s" and binary fairness columns; values given row-major.
inline RecordTable small_table(const std::vector<double>& s,
                               const std::vector<std::vector<double>>& fair,
                               const std::vector<std::string>& names) {
  std::vector<FairnessColumn> cols;
  for (std::size_t j = 0; j < names.size(); ++j) {
    cols.push_back({names[j], AttrKind::kBinary, fair[j]});
  }
  return RecordTable(iota_ids(s.size()), {{"s", s}}, std::move(cols));
}

// Random instance: scores uniform, `dims` binary attributes with the given
// frequency, and an outcome column.
inline RecordTable random_table(std::uint64_t seed, std::size_t n, std::size_t dims,
                                double freq = 0.4, bool with_outcome = false) {
  Rng rng(seed);
  std::vector<double> s(n);
  for (auto& v : s) v = rng.uniform();
  std::vector<FairnessColumn> cols;
  for (std::size_t j = 0; j < dims; ++j) {
    FairnessColumn c{"f" + std::to_string(j), AttrKind::kBinary, std::vector<double>(n)};
    for (auto& v : c.values) v = rng.bernoulli(freq) ? 1.0 : 0.0;
    cols.push_back(std::move(c));
  }
  std::optional<OutcomeColumn> outcome;
  if (with_outcome) {
    outcome = OutcomeColumn{"y", std::vector<double>(n)};
    for (auto& v : outcome->values) v = rng.bernoulli(0.5) ? 1.0 : 0.0;
  }
  return RecordTable(iota_ids(n), {{"s", std::move(s)}}, std::move(cols), std::move(outcome));
}

}  // namespace fairbonus::testing

#endif  // FAIRBONUS_TESTS_TEST_UTIL_HPP_
