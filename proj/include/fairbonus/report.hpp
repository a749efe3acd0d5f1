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

#ifndef FAIRBONUS_REPORT_HPP_
#define FAIRBONUS_REPORT_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairbonus/dca.hpp"
#include "fairbonus/metrics.hpp"
#include "fairbonus/ranking.hpp"
#include "json.hpp"

namespace fairbonus {

inline constexpr int kReportSchemaVersion = 1;

using Json = nlohmann::ordered_json;

// Everything needed to rerun a command and get the same bonus vector.
struct RunSettings {
  std::string command;
  std::string data_path;
  std::string config_path;
  std::string data_format;
  std::size_t n_records = 0;
  RankingSpec ranking;
  DcaConfig dca;
};

struct MetricSnapshot {
  DisparityVector objective;
  double ndcg = 1.0;
  std::optional<ExposureReport> exposure;
  // Additional at-k metrics keyed by metric name ("disparity", "di", "fpr").
  std::vector<std::pair<std::string, DisparityVector>> metrics;
};

struct RunReport {
  RunSettings settings;
  BonusVector bonus;
  std::optional<BonusVector> core_bonus;
  MetricSnapshot before;
  MetricSnapshot after;
  double wall_seconds = 0.0;
  double loop_seconds = 0.0;
  std::vector<std::string> warnings;
};

Json to_json(const RankingSpec& spec);
Json to_json(const DcaConfig& config);
Json to_json(const RunSettings& settings);
Json to_json(const DisparityVector& d);
Json to_json(const BonusVector& b);
Json to_json(const RunReport& report);

// Removes the "timing" member, recursively; used for determinism checks.
Json strip_timing(Json doc);

// Human-readable report: a bonus row and disparity rows with a Norm column.
std::string render_table(const RunReport& report);

}  // namespace fairbonus

#endif  // FAIRBONUS_REPORT_HPP_
