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

#ifndef FAIRBONUS_SAMPLING_HPP_
#define FAIRBONUS_SAMPLING_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fairbonus/record_table.hpp"

namespace fairbonus {

struct SampleSpec {
  std::size_t sample_size = 500;
  std::uint64_t seed = 0;
  bool replacement = false;
};

// Smallest sample that keeps ~30 selected records and ~30 members of the
// rarest group: ceil(max(30/k, 30/r)), or 30 when neither bound applies.
std::size_t recommended_sample_size(double k, std::optional<double> rarest);

// Frequency of the least common group over binary fairness attributes
// (both the value-1 and value-0 side count as groups). nullopt when the
// table has no binary attribute with both sides present.
std::optional<double> rarest_group_frequency(const RecordTable& table);

/// Row indices of the `draw_index`-th sample. Without replacement the rows
/// are distinct and sorted; the cost is O(sample_size) regardless of n.
std::vector<std::size_t> sample_rows(std::size_t n, const SampleSpec& spec,
                                     std::uint64_t draw_index);

struct Sample {
  RecordTable table;
  bool used_full_table = false;  // sample_size >= n without replacement
};

// Materialized sample. With replacement, records keep their attribute values
// but get ids 0..sample_size-1 so that ids stay unique.
Sample draw_sample(const RecordTable& table, const SampleSpec& spec,
                   std::uint64_t draw_index = 0);

}  // namespace fairbonus

#endif  // FAIRBONUS_SAMPLING_HPP_
