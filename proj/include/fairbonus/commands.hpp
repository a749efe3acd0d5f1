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

#ifndef FAIRBONUS_COMMANDS_HPP_
#define FAIRBONUS_COMMANDS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fairbonus/data_io.hpp"
#include "fairbonus/report.hpp"

namespace fairbonus {

// Flags shared by every subcommand. Empty strings mean "not given".
struct CommonOptions {
  std::string data;     // CSV path; overrides the path in --config
  std::string config;   // dataset config file
  std::string format;   // "csv", "compas" or "synthetic"; overrides the config
  std::string orientation;
  std::vector<std::string> attrs;  // bonus attributes; empty: all
  double k = 0.05;
  bool log_discount = false;
  std::optional<double> k_max;
  std::string objective = "disparity";
  double granularity = 0.5;
  std::optional<double> bonus_max;
  std::uint64_t seed = 0;
  std::size_t sample_size = 500;
  unsigned threads = 1;
  std::string json_out;  // "-" writes to stdout
  std::string csv_out;   // "-" writes to stdout
};

struct EvaluateOptions {
  std::string bonus;  // "attr:value,attr:value"
  std::vector<std::string> metrics{"disparity"};
};

enum class SweepMode { kPerK, kFixedBonus, kLogDiscounted };

SweepMode parse_sweep_mode(std::string_view text);

struct SweepOptions {
  std::vector<double> k_grid{0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
  SweepMode mode = SweepMode::kPerK;
  std::string bonus;  // fixed-bonus mode: use this vector instead of optimizing at --k
};

struct CompareOptions {
  std::vector<std::string> methods{"dca", "quota", "greedy"};
  std::optional<double> scale_step;
  std::optional<double> quota_fraction;  // default: population share of the protected groups
};

// Loads the dataset named by --config/--data/--format; honours --orientation.
Dataset load_from_options(const CommonOptions& options, std::string* format_name = nullptr);

// Resolves DCA configuration and the objective from the common flags.
DcaConfig dca_config_from_options(const CommonOptions& options, const RecordTable& table);

BonusVector parse_bonus(std::string_view text, double granularity);

// Each command writes its primary output to `out` unless redirected by
// --json/--csv, and returns the process exit code. Errors are thrown.
int cmd_compute_bonus(const CommonOptions& options, std::ostream& out);
int cmd_evaluate(const CommonOptions& options, const EvaluateOptions& eval, std::ostream& out);
int cmd_sweep_k(const CommonOptions& options, const SweepOptions& sweep, std::ostream& out);
int cmd_compare(const CommonOptions& options, const CompareOptions& compare, std::ostream& out);
int cmd_summarize(const CommonOptions& options, std::ostream& out);

// Builds the report for a finished DCA run.
RunReport make_report(const std::string& command, const CommonOptions& options,
                      const Dataset& dataset, const RankingSpec& spec,
                      const DcaConfig& config, const DcaResult& result);

}  // namespace fairbonus

#endif  // FAIRBONUS_COMMANDS_HPP_
