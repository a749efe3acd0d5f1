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

#ifndef FAIRBONUS_DCA_HPP_
#define FAIRBONUS_DCA_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairbonus/metrics.hpp"
#include "fairbonus/ranking.hpp"
#include "fairbonus/record_table.hpp"
#include "fairbonus/sampling.hpp"

namespace fairbonus {

struct AdamParams {
  double alpha = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Optimizer schedule. Defaults: two fixed-rate passes (1.0 then 0.1) of 100
/// sampled steps each, then 100 Adam steps averaged over a 100-step window,
/// samples of 500 records, 0.5-point granularity.
struct DcaConfig {
  std::vector<double> learning_rates{1.0, 0.1};
  std::size_t iterations_per_rate = 100;
  std::size_t refine_iterations = 100;
  std::size_t rolling_average_window = 100;
  // sample.seed is not used: sample streams are derived from master_seed.
  SampleSpec sample{};
  double granularity = 0.5;
  double bonus_min = 0.0;
  std::optional<double> bonus_max;
  Objective objective;
  std::uint64_t master_seed = 0;
  AdamParams adam;
  // Attributes that receive bonus points; empty means every fairness column.
  std::vector<std::string> attrs;
  // Replaces the random starting point when set.
  std::optional<std::vector<double>> initial_bonus;

  void validate() const;  // throws ConfigError
};

enum class Phase { kCore, kRefine };

struct TrajectoryPoint {
  Phase phase = Phase::kCore;
  double learning_rate = 0.0;  // alpha during refinement
  std::vector<double> bonus;   // iterate after the update
  double sampled_norm = 0.0;   // norm of the sampled objective before it
};

struct CoreResult {
  BonusVector bonus;  // unrounded
  std::vector<TrajectoryPoint> trajectory;
  std::uint64_t draws_used = 0;
  double loop_seconds = 0.0;
  std::vector<std::string> warnings;
};

struct DcaResult {
  BonusVector bonus;           // rounded to granularity and clamped
  BonusVector core_bonus;      // Core output, unrounded
  BonusVector averaged_bonus;  // rolling average before rounding
  std::vector<TrajectoryPoint> trajectory;
  DisparityVector objective_before;  // full table, zero bonus
  DisparityVector objective_after;   // full table, returned bonus
  double ndcg_after = 1.0;
  double loop_seconds = 0.0;  // sampled iterations only
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
};

// Nearest multiple of granularity, halves away from zero.
double round_to_granularity(double value, double granularity);

// Rounds every component and clamps it to the grid points inside
// [bonus_min, bonus_max].
BonusVector round_and_clamp(const BonusVector& bonus, double bonus_min,
                            std::optional<double> bonus_max);

// Core descent: for each learning rate L, iterations_per_rate times, draw a
// sample, evaluate the objective vector D on it and set B <- clamp(B - L*D).
CoreResult core_dca(const RecordTable& table, const RankingSpec& spec,
                    const DcaConfig& config);

// Adam pass seeded with the Core result; returns the rounded rolling average
// of the last rolling_average_window iterates.
DcaResult refine(const RecordTable& table, const RankingSpec& spec,
                 const DcaConfig& config, const CoreResult& core);

DcaResult run_dca(const RecordTable& table, const RankingSpec& spec,
                  const DcaConfig& config);

// One Core update computed on the whole table instead of a sample.
BonusVector full_dca_step(const RecordTable& table, const RankingSpec& spec,
                          const BonusVector& bonus, double learning_rate,
                          const DcaConfig& config);

struct Evaluation {
  DisparityVector objective;
  double ndcg = 1.0;  // at spec.k against the zero-bonus ranking
};

Evaluation evaluate_bonus(const RecordTable& table, const RankingSpec& spec,
                          const BonusVector& bonus, const Objective& objective);

struct UtilityTarget {
  enum class Kind { kMinNdcg, kMaxNorm };
  Kind kind = Kind::kMinNdcg;
  double value = 0.0;
};

struct ScaledBonus {
  double scale = 1.0;
  BonusVector bonus;
  Evaluation evaluation;
  bool feasible = true;
  int steps = 0;
};

// Scales every bonus by s (then rounds) and bisects s in [0,1]: the largest s
// that keeps nDCG >= target, or the smallest s that brings the objective
// norm <= target. An unreachable target returns the nearest endpoint with
// feasible == false.
ScaledBonus scale_bonus_for_utility(const RecordTable& table,
                                    const RankingSpec& spec,
                                    const BonusVector& bonus,
                                    const Objective& objective,
                                    const UtilityTarget& target);

BonusVector scale_bonus(const BonusVector& bonus, double s);

}  // namespace fairbonus

#endif  // FAIRBONUS_DCA_HPP_
