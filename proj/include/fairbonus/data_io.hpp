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

#ifndef FAIRBONUS_DATA_IO_HPP_
#define FAIRBONUS_DATA_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fairbonus/ranking.hpp"
#include "fairbonus/record_table.hpp"

namespace fairbonus {

using Bounds = std::pair<double, double>;

struct ScoreDistribution {
  enum class Kind { kNormal, kUniform };
  std::string name;
  Kind kind = Kind::kNormal;
  double a = 0.5;  // mean, or lower bound
  double b = 0.1;  // stddev, or upper bound
};

struct SyntheticGroup {
  std::string name;
  AttrKind kind = AttrKind::kBinary;
  double frequency = 0.5;  // binary groups only
};

// Adds `delta` to a score attribute for group members (scaled by the member's
// value for continuous groups).
struct GroupShift {
  std::string group;
  std::string score_attr;
  double delta = 0.0;
};

// P(first = 1 and second = 1) = joint. `second` is drawn conditionally on
// `first`, so `first` must be declared earlier.
struct CoOccurrence {
  std::string first;
  std::string second;
  double joint = 0.0;
};

struct SyntheticSpec {
  std::size_t n_records = 10000;
  std::uint64_t seed = 0;
  std::vector<ScoreDistribution> scores;
  std::vector<SyntheticGroup> groups;
  std::vector<GroupShift> shifts;
  std::vector<CoOccurrence> cooccurrences;
  // When set, an outcome column drawn as Bernoulli(mean unshifted score).
  std::optional<std::string> outcome;

  void validate() const;  // throws ConfigError
};

// Scores are clipped to [0,1] after shifting. Throws ConfigError for an
// infeasible co-occurrence.
RecordTable generate_synthetic(const SyntheticSpec& spec);

struct ScoreAttr {
  std::string column;
  double weight = 1.0;
  std::optional<Bounds> bounds;  // inferred min/max when absent
};

struct FairnessAttr {
  std::string column;
  AttrKind kind = AttrKind::kBinary;
  std::optional<Bounds> bounds;  // continuous only
};

struct Categorical {
  std::string column;
  std::vector<std::string> categories;  // empty: every observed value
};

/// Where a dataset comes from and what role every column plays.
struct DatasetConfig {
  enum class Format { kCsv, kCompas, kSynthetic };
  Format format = Format::kCsv;
  std::string path;
  std::optional<SyntheticSpec> synthetic;
  std::optional<std::string> id_column;  // row numbers when absent
  std::vector<ScoreAttr> scores;
  std::vector<FairnessAttr> fairness;
  std::vector<Categorical> categorical;  // one binary column per category
  std::optional<std::string> outcome;
  Orientation orientation = Orientation::kHigherBetter;
  double score_scale = 100.0;

  void validate() const;  // throws ConfigError
};

/// A loaded table plus the ranking function declared with it.
struct Dataset {
  RecordTable table;
  std::vector<std::pair<std::string, double>> weights;
  Orientation orientation = Orientation::kHigherBetter;
  double score_scale = 100.0;
  std::vector<std::string> warnings;

  RankingSpec ranking(double k) const {
    return RankingSpec{weights, orientation, k, score_scale};
  }
};

// Name of the binary column created for `category` of `column`.
std::string category_column(std::string_view column, std::string_view category);

// Min-max normalization; declared bounds win over observed ones. Values
// outside declared bounds raise DataError. A constant column maps to 0.
std::vector<double> normalize(std::span<const double> values,
                              std::optional<Bounds> bounds,
                              std::string_view column);

Dataset load_csv(const DatasetConfig& config);
Dataset load_dataset(const DatasetConfig& config);

/// Public ProPublica COMPAS two-year file: decile_score is the only score
/// attribute (bounds [0,10], scale 10, so internal scores are the deciles),
/// race is expanded into one binary column per category, two_year_recid is
/// the outcome.
DatasetConfig compas_config(std::string path,
                            Orientation orientation = Orientation::kLowerBetter,
                            std::vector<std::string> races = {});

/// Key/value dataset description, one `key = value` per line, `#` comments.
/// Relative paths resolve against `base_dir`.
DatasetConfig parse_dataset_config(std::string_view text,
                                   const std::string& base_dir = ".");
DatasetConfig read_dataset_config(const std::string& path);

// Normalized table as CSV: id, score columns, fairness columns, outcome.
void write_table_csv(const RecordTable& table, std::ostream& out);

struct AttributeSummary {
  std::string name;
  AttrKind kind = AttrKind::kBinary;
  double mean = 0.0;  // equals the group frequency for binary attributes
};

struct DatasetSummary {
  std::size_t n_records = 0;
  std::vector<AttributeSummary> fairness;
  std::optional<double> rarest_group;
  double k = 0.0;
  std::size_t recommended_sample_size = 0;
  std::size_t configured_sample_size = 0;
};

DatasetSummary summarize(const RecordTable& table, double k,
                         std::size_t configured_sample_size = 500);

}  // namespace fairbonus

#endif  // FAIRBONUS_DATA_IO_HPP_
