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

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fairbonus/commands.hpp"
#include "fairbonus/error.hpp"

namespace {

const char* category(fairbonus::ExitCode code) {
  switch (code) {
    case fairbonus::ExitCode::kConfig: return "config";
    case fairbonus::ExitCode::kData: return "data";
    case fairbonus::ExitCode::kInfeasible: return "infeasible";
    default: return "error";
  }
}

void add_common(CLI::App* cmd, fairbonus::CommonOptions& o) {
  cmd->add_option("--data", o.data, "Data file (CSV); overrides the path in --config");
  cmd->add_option("--config", o.config, "Dataset config file");
  cmd->add_option("--format", o.format, "Dataset format override")
      ->check(CLI::IsMember({"csv", "compas", "synthetic"}));
  cmd->add_option("--orientation", o.orientation, "Ranking orientation override (higher|lower)");
  cmd->add_option("--attrs", o.attrs, "Attributes receiving bonus points (default: all)")
      ->delimiter(',');
  cmd->add_option("--k", o.k, "Selection fraction");
  cmd->add_flag("--log-discount", o.log_discount, "Optimize log-discounted disparity");
  cmd->add_option("--k-max", o.k_max, "Deepest log-discount checkpoint fraction");
  cmd->add_option("--objective", o.objective, "disparity, di or fpr")
      ->check(CLI::IsMember({"disparity", "di", "fpr"}));
  cmd->add_option("--granularity", o.granularity, "Bonus granularity in points");
  cmd->add_option("--bonus-max", o.bonus_max, "Upper cap on every bonus");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--sample-size", o.sample_size, "Records drawn per iteration");
  cmd->add_option("--threads", o.threads, "Worker threads for sweeps and the oracle");
  cmd->add_option("--json", o.json_out, "Write the JSON report here ('-' for stdout)");
  cmd->add_option("--csv", o.csv_out, "Write CSV output here ('-' for stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairbonus: bonus points for fair top-k selection"};
  app.require_subcommand(1);

  fairbonus::CommonOptions common;
  fairbonus::EvaluateOptions eval;
  fairbonus::SweepOptions sweep;
  fairbonus::CompareOptions compare;
  std::string sweep_mode = "per-k-optimized";

  auto* compute = app.add_subcommand("compute-bonus", "Optimize a bonus vector");
  add_common(compute, common);

  auto* evaluate = app.add_subcommand("evaluate", "Report metrics for a given bonus vector");
  add_common(evaluate, common);
  evaluate->add_option("--bonus", eval.bonus, "attr:value,attr:value")->required();
  evaluate->add_option("--metrics", eval.metrics, "disparity,di,fpr,ndcg,ddp")->delimiter(',');

  auto* sweep_cmd = app.add_subcommand("sweep-k", "Disparity and nDCG across a grid of k");
  add_common(sweep_cmd, common);
  sweep_cmd->add_option("--k-grid", sweep.k_grid, "Comma-separated k values")->delimiter(',');
  sweep_cmd->add_option("--mode", sweep_mode, "per-k-optimized, fixed-bonus or log-discounted");
  sweep_cmd->add_option("--bonus", sweep.bonus, "Fixed bonus (fixed-bonus mode)");

  auto* compare_cmd = app.add_subcommand("compare", "Compare DCA with baseline methods");
  add_common(compare_cmd, common);
  compare_cmd->add_option("--methods", compare.methods, "dca,quota,greedy,oracle")->delimiter(',');
  compare_cmd->add_option("--scale-sweep", compare.scale_step, "Emit scaled-bonus rows at this step");
  compare_cmd->add_option("--quota", compare.quota_fraction, "Quota fraction");

  auto* summary = app.add_subcommand("summarize", "Describe a dataset; --csv exports the normalized table");
  add_common(summary, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return static_cast<int>(fairbonus::ExitCode::kConfig);
  }

  try {
    if (*compute) return fairbonus::cmd_compute_bonus(common, std::cout);
    if (*evaluate) return fairbonus::cmd_evaluate(common, eval, std::cout);
    if (*sweep_cmd) {
      sweep.mode = fairbonus::parse_sweep_mode(sweep_mode);
      return fairbonus::cmd_sweep_k(common, sweep, std::cout);
    }
    if (*compare_cmd) return fairbonus::cmd_compare(common, compare, std::cout);
    if (*summary) return fairbonus::cmd_summarize(common, std::cout);
  } catch (const fairbonus::Error& e) {
    std::cerr << "error: " << category(e.code()) << ": " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
