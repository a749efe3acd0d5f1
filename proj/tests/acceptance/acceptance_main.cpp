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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "../oracles.hpp"
#include "fairbonus/baselines.hpp"
#include "fairbonus/data_io.hpp"
#include "fairbonus/dca.hpp"
#include "fairbonus/metrics.hpp"
#include "fairbonus/ranking.hpp"
#include "fairbonus/report.hpp"
#include "fairbonus/rng.hpp"
#include "fairbonus/sampling.hpp"

using namespace fairbonus;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<std::int64_t> iota_ids(std::size_t n) {
  std::vector<std::int64_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

RankingSpec single_score(double k) {
  return RankingSpec{{{"s", 1.0}}, Orientation::kHigherBetter, k, 100.0};
}

// 1. For every (selected q, unselected p) pair whose swap strictly lowers the
// disparity norm, the full-data step raises p's score more than q's.
Outcome full_step_swap() {
  const auto start = Clock::now();
  Rng rng(20240601);
  std::size_t instances = 0, improving_pairs = 0, violations = 0;
  for (; instances < 1200; ++instances) {
    const std::size_t n = 10 + rng.below(41);
    const std::size_t dims = 2 + rng.below(2);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform();
      b[i] = rng.uniform();
    }
    std::vector<FairnessColumn> cols;
    std::vector<std::string> names;
    for (std::size_t d = 0; d < dims; ++d) {
      const double freq = rng.uniform(0.15, 0.6);
      FairnessColumn c{"f" + std::to_string(d), AttrKind::kBinary, std::vector<double>(n)};
      for (auto& v : c.values) v = rng.bernoulli(freq) ? 1.0 : 0.0;
      names.push_back(c.name);
      cols.push_back(std::move(c));
    }
    const RecordTable t(iota_ids(n), {{"a", a}, {"b", b}}, cols);
    const double wa = rng.uniform(0.1, 1.0);
    const RankingSpec spec{{{"a", wa}, {"b", 1.0 - wa}}, Orientation::kHigherBetter,
                           rng.uniform(0.1, 0.6), 100.0};
    BonusVector bonus{names, std::vector<double>(dims), 0.5};
    for (auto& v : bonus.values) v = rng.uniform(0.0, 10.0);

    DcaConfig config;
    config.bonus_min = -1e9;  // the step is analysed without the floor
    const double rate = rng.uniform(0.1, 5.0);
    const auto next = full_dca_step(t, spec, bonus, rate, config);

    const auto sel = select_top_k(score(t, spec, bonus), t, spec.k);
    std::vector<bool> chosen(n, false);
    for (std::size_t r : sel.selected_rows) chosen[r] = true;
    auto norm_of = [&](const std::vector<bool>& mask) {
      double s = 0.0;
      for (const auto& c : cols) {
        const double d = oracle::disparity(c.values, mask);
        s += d * d;
      }
      return std::sqrt(s);
    };
    const double base_norm = norm_of(chosen);
    auto increment = [&](std::size_t row) {
      double inc = 0.0;
      for (std::size_t d = 0; d < dims; ++d) {
        inc += (next.values[d] - bonus.values[d]) * cols[d].values[row];
      }
      return inc;
    };
    for (std::size_t q : sel.selected_rows) {
      for (std::size_t p = 0; p < n; ++p) {
        if (chosen[p]) continue;
        auto swapped = chosen;
        swapped[q] = false;
        swapped[p] = true;
        if (!(norm_of(swapped) < base_norm - 1e-12)) continue;
        ++improving_pairs;
        if (!(increment(p) > increment(q))) ++violations;
      }
    }
  }
  const double secs = seconds_since(start);
  return {violations == 0 && improving_pairs > 0 && secs < 60.0,
          fmt("%zu instances, %zu improving pairs, %zu violations, %.1fs (limit 60s)", instances,
              improving_pairs, violations, secs)};
}

SyntheticSpec two_attr_instance(std::uint64_t seed) {
  Rng rng(derive_seed(seed, 2, 0));
  SyntheticSpec s;
  s.n_records = 2000;
  s.seed = seed;
  s.scores = {{"s", ScoreDistribution::Kind::kNormal, 0.6, 0.12}};
  s.groups = {{"a", AttrKind::kBinary, rng.uniform(0.15, 0.4)},
              {"b", AttrKind::kBinary, rng.uniform(0.15, 0.4)}};
  s.shifts = {{"a", "s", -rng.uniform(0.0, 0.08)}, {"b", "s", -rng.uniform(0.0, 0.08)}};
  return s;
}

// 2. DCA's rounded result is within 0.05 of the grid optimum.
Outcome oracle_equivalence() {
  const auto start = Clock::now();
  const std::vector<double> ks{0.1, 0.2, 0.3};
  std::size_t worse = 0;
  double worst_gap = -1.0;
  const std::size_t instances = 50;
  for (std::size_t i = 0; i < instances; ++i) {
    const auto t = generate_synthetic(two_attr_instance(1000 + i));
    const auto spec = single_score(ks[i % ks.size()]);
    DcaConfig config;
    config.master_seed = i;
    config.granularity = 0.5;
    config.bonus_max = 20.0;
    const auto dca = run_dca(t, spec, config);
    const auto best = grid_search_oracle(t, spec, {"a", "b"}, 0.5, 20.0, Objective{});
    const double gap = dca.objective_after.norm() - best.norm;
    worst_gap = std::max(worst_gap, gap);
    if (gap > 0.05) ++worse;
  }
  const double secs = seconds_since(start);
  return {worse == 0 && secs < 600.0,
          fmt("%zu instances, worst gap to oracle %.4f (limit 0.05), %zu over, %.1fs (limit 600s)",
              instances, worst_gap, worse, secs)};
}

SyntheticSpec strongly_shifted(std::size_t n) {
  SyntheticSpec s;
  s.n_records = n;
  s.seed = 31;
  s.scores = {{"gpa", ScoreDistribution::Kind::kNormal, 0.6, 0.12},
              {"test", ScoreDistribution::Kind::kNormal, 0.55, 0.15}};
  s.groups = {{"low_income", AttrKind::kBinary, 0.4}, {"ell", AttrKind::kBinary, 0.3},
              {"special_ed", AttrKind::kBinary, 0.25}, {"rural", AttrKind::kBinary, 0.35}};
  s.shifts = {{"low_income", "gpa", -0.16}, {"low_income", "test", -0.16}, {"ell", "test", -0.24},
              {"special_ed", "gpa", -0.192}, {"special_ed", "test", -0.128},
              {"rural", "gpa", -0.128}, {"rural", "test", -0.16}};
  return s;
}

RankingSpec two_scores(double k) {
  return RankingSpec{{{"gpa", 0.55}, {"test", 0.45}}, Orientation::kHigherBetter, k, 100.0};
}

// 3. Disparity is essentially eliminated at every known k.
Outcome disparity_elimination() {
  const auto t = generate_synthetic(strongly_shifted(50000));
  const auto rarest = rarest_group_frequency(t);
  bool pass = true;
  std::ostringstream detail;
  double slowest = 0.0, min_baseline = 1e9, max_after = 0.0;
  for (double k : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
    const auto start = Clock::now();
    DcaConfig config;
    config.master_seed = 3;
    config.sample.sample_size = std::max<std::size_t>(500, recommended_sample_size(k, rarest));
    const auto r = run_dca(t, two_scores(k), config);
    const double secs = seconds_since(start);
    slowest = std::max(slowest, secs);
    min_baseline = std::min(min_baseline, r.objective_before.norm());
    max_after = std::max(max_after, r.objective_after.norm());
    pass = pass && r.objective_before.norm() >= 0.3 && r.objective_after.norm() < 0.05 && secs < 30.0;
    detail << fmt(" k=%.2f:%.3f->%.4f", k, r.objective_before.norm(), r.objective_after.norm());
  }
  return {pass, fmt("min baseline %.3f (need >= 0.3), max after %.4f (limit 0.05), slowest %.2fs (limit 30s);",
                    min_baseline, max_after, slowest) +
                    detail.str()};
}

// 4. COMPAS: Black overrepresented and white underrepresented in the flagged
// set at k = 0.2; DCA halves the norm for every k in 0.1..0.5.
Outcome compas() {
  const std::string path = std::string(FAIRBONUS_SOURCE_DIR) + "/data/compas-scores-two-years.csv";
  const std::vector<std::string> races{"African-American", "Caucasian", "Hispanic", "Other"};
  const auto ds = load_dataset(compas_config(path, Orientation::kHigherBetter, races));
  std::vector<std::string> attrs;
  for (const auto& r : races) attrs.push_back(category_column("race", r));

  const auto at20 = ds.ranking(0.2);
  const auto base = evaluate_objective(ds.table, at20, BonusVector::zeros(attrs), Objective{});
  const double black = base.at("race.African-American");
  const double white = base.at("race.Caucasian");
  bool pass = black > 0.0 && white < 0.0;
  std::ostringstream detail;
  detail << fmt("k=0.2 baseline black %+.3f white %+.3f;", black, white);
  double worst_ratio = 0.0;
  for (double k : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    DcaConfig config;
    config.attrs = attrs;
    config.master_seed = 1;
    config.sample.sample_size =
        std::max<std::size_t>(500, recommended_sample_size(k, rarest_group_frequency(ds.table)));
    const auto r = run_dca(ds.table, ds.ranking(k), config);
    const double ratio = r.objective_after.norm() / r.objective_before.norm();
    worst_ratio = std::max(worst_ratio, ratio);
    pass = pass && ratio <= 0.5;
    detail << fmt(" k=%.1f:%.3f->%.3f", k, r.objective_before.norm(), r.objective_after.norm());
  }
  return {pass, fmt("worst after/before %.3f (limit 0.5); ", worst_ratio) + detail.str()};
}

// 5. Half the bonus gives about half the reduction.
Outcome linearity() {
  SyntheticSpec s;
  s.n_records = 50000;
  s.seed = 8;
  s.scores = {{"gpa", ScoreDistribution::Kind::kNormal, 0.6, 0.12},
              {"test", ScoreDistribution::Kind::kNormal, 0.55, 0.15}};
  s.groups = {{"low_income", AttrKind::kBinary, 0.3}, {"ell", AttrKind::kBinary, 0.15}};
  s.shifts = {{"low_income", "gpa", -0.05}, {"low_income", "test", -0.05}, {"ell", "test", -0.1}};
  const auto t = generate_synthetic(s);
  const auto spec = two_scores(0.1);
  DcaConfig config;
  config.master_seed = 5;
  const auto r = run_dca(t, spec, config);
  const double baseline = r.objective_before.norm();
  const auto half = evaluate_bonus(t, spec, scale_bonus(r.bonus, 0.5), Objective{});
  const auto full = evaluate_bonus(t, spec, scale_bonus(r.bonus, 1.0), Objective{});
  const double ratio = (baseline - half.objective.norm()) / (baseline - full.objective.norm());
  const bool ndcg_ok = baseline > 0.4 || full.ndcg >= 0.90;
  return {ratio >= 0.35 && ratio <= 0.65 && ndcg_ok,
          fmt("baseline %.3f, s=0.5 norm %.4f, s=1 norm %.4f, reduction ratio %.3f (need 0.50+-0.15), "
              "nDCG@s=1 %.4f (need >= 0.90)",
              baseline, half.objective.norm(), full.objective.norm(), ratio, full.ndcg)};
}

// 6. Refinement beats Core DCA.
Outcome refinement() {
  const auto t = generate_synthetic(strongly_shifted(20000));
  const auto spec = two_scores(0.1);
  std::size_t better = 0;
  double core_sum = 0.0, refined_sum = 0.0;
  const std::size_t runs = 100;
  for (std::size_t seed = 0; seed < runs; ++seed) {
    DcaConfig config;
    config.master_seed = seed;
    const auto r = run_dca(t, spec, config);
    const double core = evaluate_objective(t, spec, r.core_bonus, Objective{}).norm();
    const double refined = r.objective_after.norm();
    core_sum += core;
    refined_sum += refined;
    better += refined <= core;
  }
  const double share = static_cast<double>(better) / runs;
  const double mean_core = core_sum / runs, mean_refined = refined_sum / runs;
  return {share >= 0.8 && mean_refined <= mean_core * 2.0 / 3.0,
          fmt("refined <= core in %.0f%% of %zu runs (need 80%%), mean refined %.4f vs core %.4f "
              "(ratio %.3f, need <= 0.667)",
              share * 100, runs, mean_refined, mean_core, mean_refined / mean_core)};
}

// 7. Optimizer loop time does not grow with n.
Outcome runtime_scaling() {
  auto loop_time = [](std::size_t n) {
    SyntheticSpec s = strongly_shifted(n);
    s.seed = 77;
    const auto t = generate_synthetic(s);
    std::vector<double> times;
    for (std::uint64_t rep = 0; rep < 5; ++rep) {
      DcaConfig config;
      config.master_seed = rep;
      config.sample.sample_size = 500;
      times.push_back(run_dca(t, two_scores(0.1), config).loop_seconds);
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
  };
  const double small = loop_time(100000);
  const double large = loop_time(1000000);
  const double ratio = large / small;
  return {ratio <= 1.5, fmt("median loop %.4fs at n=1e5, %.4fs at n=1e6, ratio %.3f (limit 1.5)", small,
                            large, ratio)};
}

// 8. Every metric matches a from-definition recomputation over all selections.
Outcome brute_force_metrics() {
  std::size_t datasets = 0, checks = 0, mismatches = 0;
  double worst = 0.0;
  auto compare = [&](double got, double want) {
    ++checks;
    const double err = std::fabs(got - want);
    worst = std::max(worst, err);
    if (!(err <= 1e-9)) ++mismatches;
  };
  for (std::uint64_t seed = 0; seed < 24; ++seed) {
    Rng rng(derive_seed(seed, 8, 0));
    const std::size_t n = 4 + seed % 9;  // 4..12
    const std::size_t dims = 1 + seed % 3;
    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = std::floor(rng.uniform() * 6.0) / 5.0;  // ties included
      y[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
    }
    std::vector<FairnessColumn> cols;
    std::vector<std::string> names;
    for (std::size_t d = 0; d < dims; ++d) {
      FairnessColumn c{"f" + std::to_string(d), AttrKind::kBinary, std::vector<double>(n)};
      for (auto& v : c.values) v = rng.bernoulli(0.4) ? 1.0 : 0.0;
      names.push_back(c.name);
      cols.push_back(std::move(c));
    }
    FairnessColumn cont{"c", AttrKind::kContinuous, std::vector<double>(n)};
    for (auto& v : cont.values) v = rng.uniform();
    auto all_cols = cols;
    all_cols.push_back(cont);
    const RecordTable t(iota_ids(n), {{"s", s}}, all_cols, OutcomeColumn{"y", y});
    ++datasets;

    // Gains for nDCG, and the original ranking by descending score.
    const RankingSpec spec = single_score(0.5);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = 100.0 * s[i];  // pre-bonus score
    const auto lib_w = utility_weights(t, spec);
    for (std::size_t i = 0; i < n; ++i) compare(lib_w[i], w[i]);
    std::vector<std::size_t> original(n);
    std::iota(original.begin(), original.end(), 0);
    std::stable_sort(original.begin(), original.end(), [&](auto a, auto b) { return s[a] > s[b]; });
    const bool ideal_zero = oracle::dcg(original, w, 1) == 0.0;

    // Groups for DDP: one per binary attribute plus everyone outside all of them.
    std::vector<std::vector<std::size_t>> groups(dims);
    std::vector<std::size_t> none;
    for (std::size_t i = 0; i < n; ++i) {
      bool any = false;
      for (std::size_t d = 0; d < dims; ++d) {
        if (cols[d].values[i] == 1.0) {
          groups[d].push_back(i);
          any = true;
        }
      }
      if (!any) none.push_back(i);
    }
    groups.push_back(none);
    const auto lib_groups = binary_groups(t, names);

    std::vector<std::size_t> shuffle(n);
    std::iota(shuffle.begin(), shuffle.end(), 0);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(shuffle[i], shuffle[rng.below(i + 1)]);

    const std::vector<std::string> with_cont = [&] {
      auto v = names;
      v.push_back("c");
      return v;
    }();
    for (std::uint32_t bits = 1; bits < (1u << n); ++bits) {
      oracle::Mask mask(n, false);
      SelectionResult sel;
      std::vector<std::size_t> ranking, rest;
      for (std::size_t i : shuffle) {
        if (bits >> i & 1u) {
          mask[i] = true;
          sel.selected_rows.push_back(i);
          ranking.push_back(i);
        } else {
          rest.push_back(i);
        }
      }
      sel.k_count = sel.selected_rows.size();
      ranking.insert(ranking.end(), rest.begin(), rest.end());

      const auto d = disparity(t, sel, with_cont);
      const auto di = disparate_impact_scaled(t, sel, names);
      const auto fpr = fpr_gap(t, sel, names);
      for (std::size_t f = 0; f < dims; ++f) {
        compare(d.components[f], oracle::disparity(cols[f].values, mask));
        compare(di.components[f], oracle::scaled_di(cols[f].values, mask));
        compare(fpr.components[f], oracle::fpr_gap(cols[f].values, y, mask));
      }
      compare(d.components[dims], oracle::disparity(cont.values, mask));

      const std::size_t m = sel.k_count;
      const double k = static_cast<double>(m) / static_cast<double>(n);
      if (m < n && !ideal_zero && oracle::dcg(original, w, m) > 0.0) {
        compare(ndcg_at_k(original, ranking, k, lib_w), oracle::ndcg(original, ranking, w, m));
      }
      compare(exposure_ddp(ranking, lib_groups).ddp, oracle::ddp(ranking, groups));
    }
  }
  return {mismatches == 0, fmt("%zu datasets (n<=12, <=3 binary + 1 continuous attribute), %zu comparisons, "
                               "%zu mismatches, worst error %.2e (limit 1e-9)",
                               datasets, checks, mismatches, worst)};
}

// 9. Every CLI command is byte-identical across repeated invocations.
Outcome determinism() {
  const std::string cli = FAIRBONUS_CLI;
  const std::string src = FAIRBONUS_SOURCE_DIR;
  const fs::path dir = fs::temp_directory_path() / ("fairbonus_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string biased = "--config " + src + "/configs/synthetic_biased.conf";
  const std::string compas = "--config " + src + "/configs/compas.conf";
  const std::vector<std::string> commands{
      "compute-bonus " + biased + " --k 0.1 --seed 21",
      "compute-bonus " + biased + " --k 0.2 --log-discount --k-max 0.5 --seed 21",
      "compute-bonus " + biased + " --k 0.2 --objective fpr --attrs low_income,ell --seed 2",
      "compute-bonus " + compas + " --k 0.3 --objective di --seed 5",
      "evaluate " + biased + " --k 0.1 --bonus low_income:7.5,ell:7 --metrics disparity,di,fpr",
      "sweep-k " + biased + " --k-grid 0.05,0.2,0.4 --threads 2 --seed 6",
      "sweep-k " + biased + " --mode log-discounted --k-grid 0.1,0.3 --seed 6",
      "compare " + biased + " --k 0.1 --attrs low_income,ell --methods dca,quota,greedy,oracle "
                            "--bonus-max 12 --scale-sweep 0.25 --seed 8",
      "summarize " + compas + " --k 0.2",
  };
  std::size_t identical = 0;
  std::string failed;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string text[2];
    bool ok = true;
    for (int rep = 0; rep < 2; ++rep) {
      const auto out = dir / ("run" + std::to_string(i) + "_" + std::to_string(rep) + ".json");
      const std::string cmd = cli + " " + commands[i] + " --json " + out.string() + " > /dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      ok = ok && WIFEXITED(status) && WEXITSTATUS(status) == 0;
      std::ifstream in(out);
      std::stringstream buf;
      buf << in.rdbuf();
      try {
        text[rep] = strip_timing(Json::parse(buf.str())).dump();
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (ok && text[0] == text[1]) {
      ++identical;
    } else {
      failed += " [" + commands[i].substr(0, commands[i].find(' ')) + "]";
    }
  }
  fs::remove_all(dir);
  return {identical == commands.size(),
          fmt("%zu/%zu commands byte-identical across repeated runs (timing removed)", identical,
              commands.size()) +
              failed};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "Full-step swap property", full_step_swap},
      {2, "Oracle equivalence", oracle_equivalence},
      {3, "Disparity elimination at known k", disparity_elimination},
      {4, "COMPAS signs and reduction", compas},
      {5, "Utility trade-off linearity", linearity},
      {6, "Refinement benefit", refinement},
      {7, "Runtime independent of n", runtime_scaling},
      {8, "Metric brute-force equivalence", brute_force_metrics},
      {9, "CLI determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %d. %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
