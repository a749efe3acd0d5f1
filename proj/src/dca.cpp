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

#include "fairbonus/dca.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "fairbonus/error.hpp"
#include "fairbonus/rng.hpp"

namespace fairbonus {

namespace {

constexpr std::uint64_t kInitDomain = 0x696e6974ULL;    // "init"
constexpr std::uint64_t kSampleDomain = 0x64726177ULL;  // "draw"

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::string> resolve_attrs(const RecordTable& table,
                                       const DcaConfig& config) {
  auto attrs = config.attrs.empty() ? table.fairness_names() : config.attrs;
  if (attrs.empty()) throw ConfigError("no fairness attributes to compensate");
  for (const auto& a : attrs) (void)table.fairness(a);
  return attrs;
}

double upper_bound(const DcaConfig& config) {
  return config.bonus_max.value_or(std::numeric_limits<double>::infinity());
}

void clamp_in_place(std::vector<double>& b, const DcaConfig& config) {
  const double hi = upper_bound(config);
  for (double& v : b) v = std::clamp(v, config.bonus_min, hi);
}

void require_finite(const DisparityVector& d) {
  for (std::size_t f = 0; f < d.components.size(); ++f) {
    if (!std::isfinite(d.components[f])) {
      throw DataError("objective component '" + d.attrs[f] +
                      "' is not finite; aborting optimization");
    }
  }
}

SampleSpec stream_spec(const DcaConfig& config) {
  SampleSpec s = config.sample;
  s.seed = derive_seed(config.master_seed, kSampleDomain, 0);
  return s;
}

// Sampled objective for one optimizer step.
class SampledObjective {
 public:
  SampledObjective(const RecordTable& table, const RankingSpec& spec,
                   const DcaConfig& config, std::vector<std::string> attrs)
      : table_(table),
        spec_(spec),
        config_(config),
        attrs_(std::move(attrs)),
        scorer_(table, spec, attrs_),
        stream_(stream_spec(config)) {}

  DisparityVector operator()(std::span<const double> bonus, std::uint64_t draw,
                             std::vector<std::string>& warnings) const {
    const auto rows = sample_rows(table_.size(), stream_, draw);
    auto d = evaluate_objective(table_, scorer_, rows, attrs_, bonus, spec_.k,
                                config_.objective);
    require_finite(d);
    for (auto& w : d.warnings) {
      if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) {
        warnings.push_back(std::move(w));
      }
    }
    return d;
  }

  const std::vector<std::string>& attrs() const { return attrs_; }

 private:
  const RecordTable& table_;
  const RankingSpec& spec_;
  const DcaConfig& config_;
  std::vector<std::string> attrs_;
  Scorer scorer_;
  SampleSpec stream_;
};

void note_sample_size(const RecordTable& table, const RankingSpec& spec,
                      const DcaConfig& config, std::vector<std::string>& warnings) {
  if (!config.sample.replacement && config.sample.sample_size >= table.size()) {
    warnings.push_back("sample_size " + std::to_string(config.sample.sample_size) +
                       " >= " + std::to_string(table.size()) +
                       " records; every step uses the full table");
    return;
  }
  const auto recommended =
      recommended_sample_size(spec.k, rarest_group_frequency(table));
  if (config.sample.sample_size < recommended) {
    warnings.push_back("sample_size " + std::to_string(config.sample.sample_size) +
                       " is below the recommended " + std::to_string(recommended));
  }
}

}  // namespace

void DcaConfig::validate() const {
  if (learning_rates.empty()) throw ConfigError("no learning rates given");
  for (std::size_t i = 0; i < learning_rates.size(); ++i) {
    if (!(learning_rates[i] > 0.0) || !std::isfinite(learning_rates[i])) {
      throw ConfigError("learning rates must be positive");
    }
    if (i > 0 && !(learning_rates[i] < learning_rates[i - 1])) {
      throw ConfigError("learning rates must be strictly decreasing");
    }
  }
  if (iterations_per_rate == 0) throw ConfigError("iterations_per_rate must be >= 1");
  if (rolling_average_window == 0) throw ConfigError("rolling_average_window must be >= 1");
  if (sample.sample_size == 0) throw ConfigError("sample_size must be >= 1");
  if (!(granularity > 0.0) || !std::isfinite(granularity)) {
    throw ConfigError("granularity must be positive");
  }
  if (!std::isfinite(bonus_min)) throw ConfigError("bonus_min must be finite");
  if (bonus_max && !(bonus_min <= *bonus_max)) {
    throw ConfigError("bonus_min must not exceed bonus_max");
  }
  if (!(adam.alpha > 0.0) || !(adam.beta1 >= 0.0 && adam.beta1 < 1.0) ||
      !(adam.beta2 >= 0.0 && adam.beta2 < 1.0) || !(adam.epsilon > 0.0)) {
    throw ConfigError("invalid Adam parameters");
  }
  if (initial_bonus && !attrs.empty() && initial_bonus->size() != attrs.size()) {
    throw ConfigError("initial bonus has the wrong dimension");
  }
}

double round_to_granularity(double value, double granularity) {
  return granularity * std::round(value / granularity);
}

BonusVector round_and_clamp(const BonusVector& bonus, double bonus_min,
                            std::optional<double> bonus_max) {
  const double g = bonus.granularity;
  const double lo = g * std::ceil(bonus_min / g - 1e-9);
  const double hi = bonus_max ? g * std::floor(*bonus_max / g + 1e-9)
                              : std::numeric_limits<double>::infinity();
  BonusVector out = bonus;
  for (double& v : out.values) {
    v = std::clamp(round_to_granularity(v, g), lo, hi);
    if (v == 0.0) v = 0.0;  // no negative zero in reports
  }
  return out;
}

CoreResult core_dca(const RecordTable& table, const RankingSpec& spec,
                    const DcaConfig& config) {
  config.validate();
  spec.validate();
  CoreResult result;
  const SampledObjective objective(table, spec, config, resolve_attrs(table, config));
  const std::size_t dims = objective.attrs().size();
  note_sample_size(table, spec, config, result.warnings);

  std::vector<double> b(dims);
  if (config.initial_bonus) {
    if (config.initial_bonus->size() != dims) {
      throw ConfigError("initial bonus has the wrong dimension");
    }
    b = *config.initial_bonus;
  } else {
    Rng rng(derive_seed(config.master_seed, kInitDomain, 0));
    for (double& v : b) v = rng.uniform(0.0, 4.0 * config.granularity);
  }
  clamp_in_place(b, config);

  const auto start = Clock::now();
  std::uint64_t draw = 0;
  result.trajectory.reserve(config.learning_rates.size() * config.iterations_per_rate);
  for (double rate : config.learning_rates) {
    for (std::size_t x = 0; x < config.iterations_per_rate; ++x) {
      const auto d = objective(b, draw++, result.warnings);
      for (std::size_t f = 0; f < dims; ++f) b[f] -= rate * d.components[f];
      clamp_in_place(b, config);
      result.trajectory.push_back({Phase::kCore, rate, b, d.norm()});
    }
  }
  result.loop_seconds = seconds_since(start);
  result.draws_used = draw;
  result.bonus = BonusVector{objective.attrs(), b, config.granularity};
  return result;
}

Evaluation evaluate_bonus(const RecordTable& table, const RankingSpec& spec,
                          const BonusVector& bonus, const Objective& objective) {
  Evaluation ev;
  ev.objective = evaluate_objective(table, spec, bonus, objective);
  const auto weights = utility_weights(table, spec);
  const std::size_t m = selection_count(table.size(), spec.k);
  const auto base = score(table, spec, BonusVector::zeros(bonus.attrs, bonus.granularity));
  const auto adjusted = score(table, spec, bonus);
  const auto original = rank_all(base, table.ids());
  const auto adjusted_top = top_positions(adjusted, table.ids(), m);
  ev.ndcg = ndcg_at_k(original, adjusted_top, spec.k, weights);
  return ev;
}

DcaResult refine(const RecordTable& table, const RankingSpec& spec,
                 const DcaConfig& config, const CoreResult& core) {
  config.validate();
  const auto wall_start = Clock::now();
  DcaResult result;
  result.warnings = core.warnings;
  result.core_bonus = core.bonus;
  result.trajectory = core.trajectory;

  DcaConfig cfg = config;
  cfg.attrs = core.bonus.attrs;
  const SampledObjective objective(table, spec, cfg, core.bonus.attrs);
  const std::size_t dims = core.bonus.size();

  std::vector<double> b = core.bonus.values;
  std::vector<double> m(dims, 0.0), v(dims, 0.0);
  std::vector<std::vector<double>> iterates;
  iterates.reserve(config.refine_iterations);
  const auto& adam = config.adam;
  double beta1_t = 1.0, beta2_t = 1.0;

  const auto loop_start = Clock::now();
  std::uint64_t draw = core.draws_used;
  for (std::size_t x = 0; x < config.refine_iterations; ++x) {
    const auto d = objective(b, draw++, result.warnings);
    beta1_t *= adam.beta1;
    beta2_t *= adam.beta2;
    for (std::size_t f = 0; f < dims; ++f) {
      const double g = d.components[f];
      m[f] = adam.beta1 * m[f] + (1.0 - adam.beta1) * g;
      v[f] = adam.beta2 * v[f] + (1.0 - adam.beta2) * g * g;
      const double m_hat = m[f] / (1.0 - beta1_t);
      const double v_hat = v[f] / (1.0 - beta2_t);
      b[f] -= adam.alpha * m_hat / (std::sqrt(v_hat) + adam.epsilon);
    }
    clamp_in_place(b, cfg);
    iterates.push_back(b);
    result.trajectory.push_back({Phase::kRefine, adam.alpha, b, d.norm()});
  }
  result.loop_seconds = core.loop_seconds + seconds_since(loop_start);

  std::vector<double> avg = core.bonus.values;
  if (!iterates.empty()) {
    const std::size_t window = std::min(config.rolling_average_window, iterates.size());
    std::fill(avg.begin(), avg.end(), 0.0);
    for (std::size_t i = iterates.size() - window; i < iterates.size(); ++i) {
      for (std::size_t f = 0; f < dims; ++f) avg[f] += iterates[i][f];
    }
    for (double& a : avg) a /= static_cast<double>(window);
  }
  result.averaged_bonus = BonusVector{core.bonus.attrs, avg, config.granularity};
  result.bonus = round_and_clamp(result.averaged_bonus, config.bonus_min, config.bonus_max);

  result.objective_before = evaluate_objective(
      table, spec, BonusVector::zeros(core.bonus.attrs, config.granularity),
      config.objective);
  const auto after = evaluate_bonus(table, spec, result.bonus, config.objective);
  result.objective_after = after.objective;
  result.ndcg_after = after.ndcg;
  for (const auto* d : {&result.objective_before, &result.objective_after}) {
    for (const auto& w : d->warnings) {
      if (std::find(result.warnings.begin(), result.warnings.end(), w) ==
          result.warnings.end()) {
        result.warnings.push_back(w);
      }
    }
  }
  result.wall_seconds = seconds_since(wall_start);
  return result;
}

DcaResult run_dca(const RecordTable& table, const RankingSpec& spec,
                  const DcaConfig& config) {
  const auto start = Clock::now();
  const auto core = core_dca(table, spec, config);
  auto result = refine(table, spec, config, core);
  result.wall_seconds = seconds_since(start);
  return result;
}

BonusVector full_dca_step(const RecordTable& table, const RankingSpec& spec,
                          const BonusVector& bonus, double learning_rate,
                          const DcaConfig& config) {
  const auto d = evaluate_objective(table, spec, bonus, config.objective);
  require_finite(d);
  BonusVector out = bonus;
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.values[f] -= learning_rate * d.components[f];
  }
  clamp_in_place(out.values, config);
  return out;
}

BonusVector scale_bonus(const BonusVector& bonus, double s) {
  BonusVector out = bonus;
  for (double& v : out.values) {
    v = std::max(0.0, round_to_granularity(s * v, bonus.granularity));
  }
  return out;
}

ScaledBonus scale_bonus_for_utility(const RecordTable& table,
                                    const RankingSpec& spec,
                                    const BonusVector& bonus,
                                    const Objective& objective,
                                    const UtilityTarget& target) {
  using Kind = UtilityTarget::Kind;
  auto probe = [&](double s) {
    ScaledBonus r;
    r.scale = s;
    r.bonus = scale_bonus(bonus, s);
    r.evaluation = evaluate_bonus(table, spec, r.bonus, objective);
    return r;
  };
  auto meets = [&](const ScaledBonus& r) {
    return target.kind == Kind::kMinNdcg ? r.evaluation.ndcg >= target.value
                                         : r.evaluation.objective.norm() <= target.value;
  };

  // Feasible side: s = 0 for a utility floor, s = 1 for a fairness ceiling.
  const bool floor_target = target.kind == Kind::kMinNdcg;
  ScaledBonus good = probe(floor_target ? 0.0 : 1.0);
  ScaledBonus bad = probe(floor_target ? 1.0 : 0.0);
  if (!meets(good)) {
    good.feasible = false;
    return good;
  }
  if (meets(bad)) return bad;  // the whole interval qualifies

  int steps = 0;
  while (steps < 30 && !(good.bonus == bad.bonus)) {
    ScaledBonus mid = probe(0.5 * (good.scale + bad.scale));
    ++steps;
    if (meets(mid)) {
      good = std::move(mid);
    } else {
      bad = std::move(mid);
    }
  }
  good.steps = steps;
  return good;
}

}  // namespace fairbonus
