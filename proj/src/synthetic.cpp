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
#include <map>
#include <set>
#include <string>

#include "fairbonus/data_io.hpp"
#include "fairbonus/error.hpp"
#include "fairbonus/rng.hpp"

namespace fairbonus {

namespace {

constexpr std::uint64_t kSynthDomain = 0x73796e7468ULL;  // "synth"
constexpr double kTol = 1e-12;

}  // namespace

void SyntheticSpec::validate() const {
  if (n_records == 0) throw ConfigError("synthetic: n must be at least 1");
  if (scores.empty()) throw ConfigError("synthetic: at least one score distribution is required");
  std::set<std::string> names;
  for (const auto& s : scores) {
    if (s.name.empty() || !names.insert(s.name).second) {
      throw ConfigError("synthetic: duplicate or empty score name '" + s.name + "'");
    }
    if (!std::isfinite(s.a) || !std::isfinite(s.b)) {
      throw ConfigError("synthetic: non-finite parameter for '" + s.name + "'");
    }
    if (s.kind == ScoreDistribution::Kind::kNormal && s.b < 0.0) {
      throw ConfigError("synthetic: negative stddev for '" + s.name + "'");
    }
    if (s.kind == ScoreDistribution::Kind::kUniform && s.b < s.a) {
      throw ConfigError("synthetic: uniform bounds reversed for '" + s.name + "'");
    }
  }
  std::map<std::string, const SyntheticGroup*> groups;
  for (const auto& g : this->groups) {
    if (g.name.empty() || !names.insert(g.name).second) {
      throw ConfigError("synthetic: duplicate or empty group name '" + g.name + "'");
    }
    if (g.kind == AttrKind::kBinary && !(g.frequency > 0.0 && g.frequency <= 1.0)) {
      throw ConfigError("synthetic: frequency of '" + g.name + "' must lie in (0, 1]");
    }
    groups[g.name] = &g;
  }
  for (const auto& s : shifts) {
    if (!groups.count(s.group)) throw ConfigError("synthetic: shift names unknown group '" + s.group + "'");
    const bool known = std::any_of(scores.begin(), scores.end(),
                                   [&](const auto& d) { return d.name == s.score_attr; });
    if (!known) throw ConfigError("synthetic: shift names unknown score '" + s.score_attr + "'");
    if (!std::isfinite(s.delta)) throw ConfigError("synthetic: non-finite shift");
  }
  std::set<std::string> conditioned;
  for (const auto& c : cooccurrences) {
    const auto a = groups.find(c.first);
    const auto b = groups.find(c.second);
    if (a == groups.end() || b == groups.end()) {
      throw ConfigError("synthetic: co-occurrence names an unknown group");
    }
    if (a->second->kind != AttrKind::kBinary || b->second->kind != AttrKind::kBinary) {
      throw ConfigError("synthetic: co-occurrence needs binary groups");
    }
    if (a->second >= b->second) {
      throw ConfigError("synthetic: co-occurrence '" + c.first + "&" + c.second +
                        "' must list the earlier group first");
    }
    if (!conditioned.insert(c.second).second) {
      throw ConfigError("synthetic: group '" + c.second + "' is conditioned twice");
    }
    const double pi = a->second->frequency;
    const double pj = b->second->frequency;
    const double lo = std::max(0.0, pi + pj - 1.0);
    const double hi = std::min(pi, pj);
    if (c.joint < lo - kTol || c.joint > hi + kTol) {
      throw ConfigError("synthetic: co-occurrence of '" + c.first + "' and '" + c.second +
                        "' is inconsistent with the marginals (must lie in [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "])");
    }
  }
  if (outcome && (outcome->empty() || names.count(*outcome))) {
    throw ConfigError("synthetic: outcome name clashes or is empty");
  }
}

RecordTable generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_records;
  const std::size_t g = spec.groups.size();
  Rng rng(derive_seed(spec.seed, kSynthDomain, 0));

  // For each group, the co-occurrence that conditions it (if any).
  std::vector<const CoOccurrence*> cond(g, nullptr);
  std::vector<std::size_t> cond_on(g, 0);
  auto index_of = [&spec](const std::string& name) {
    return static_cast<std::size_t>(
        std::find_if(spec.groups.begin(), spec.groups.end(),
                     [&](const auto& x) { return x.name == name; }) -
        spec.groups.begin());
  };
  for (const auto& c : spec.cooccurrences) {
    const auto j = index_of(c.second);
    cond[j] = &c;
    cond_on[j] = index_of(c.first);
  }

  std::vector<FairnessColumn> fairness;
  for (const auto& grp : spec.groups) fairness.push_back({grp.name, grp.kind, std::vector<double>(n)});
  std::vector<ScoreColumn> scores;
  for (const auto& s : spec.scores) scores.push_back({s.name, std::vector<double>(n)});
  std::optional<OutcomeColumn> outcome;
  if (spec.outcome) outcome = OutcomeColumn{*spec.outcome, std::vector<double>(n)};

  std::vector<std::int64_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    ids[i] = static_cast<std::int64_t>(i);
    for (std::size_t j = 0; j < g; ++j) {
      const auto& grp = spec.groups[j];
      double v = 0.0;
      if (grp.kind == AttrKind::kContinuous) {
        v = rng.uniform();
      } else if (cond[j] == nullptr) {
        v = rng.bernoulli(grp.frequency) ? 1.0 : 0.0;
      } else {
        const double pi = spec.groups[cond_on[j]].frequency;
        const double c = cond[j]->joint;
        const double p = fairness[cond_on[j]].values[i] == 1.0
                             ? c / pi
                             : (pi < 1.0 ? (grp.frequency - c) / (1.0 - pi) : 0.0);
        v = rng.bernoulli(std::clamp(p, 0.0, 1.0)) ? 1.0 : 0.0;
      }
      fairness[j].values[i] = v;
    }
    double unshifted_sum = 0.0;
    for (std::size_t s = 0; s < spec.scores.size(); ++s) {
      const auto& d = spec.scores[s];
      double v = d.kind == ScoreDistribution::Kind::kNormal ? rng.normal(d.a, d.b)
                                                            : rng.uniform(d.a, d.b);
      unshifted_sum += std::clamp(v, 0.0, 1.0);
      for (const auto& sh : spec.shifts) {
        if (sh.score_attr == d.name) v += sh.delta * fairness[index_of(sh.group)].values[i];
      }
      scores[s].values[i] = std::clamp(v, 0.0, 1.0);
    }
    if (outcome) {
      const double p = unshifted_sum / static_cast<double>(spec.scores.size());
      outcome->values[i] = rng.bernoulli(p) ? 1.0 : 0.0;
    }
  }
  return RecordTable(std::move(ids), std::move(scores), std::move(fairness), std::move(outcome));
}

}  // namespace fairbonus
