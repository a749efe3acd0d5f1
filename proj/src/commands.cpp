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

#include "fairbonus/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "fairbonus/baselines.hpp"
#include "fairbonus/csv.hpp"
#include "fairbonus/error.hpp"
#include "fairbonus/sampling.hpp"

namespace fairbonus {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::string> resolved_attrs(const CommonOptions& options, const RecordTable& table) {
  return options.attrs.empty() ? table.fairness_names() : options.attrs;
}

template <typename Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& write) {
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file '" + path + "'");
  write(file);
  if (!file) throw ConfigError("failed writing '" + path + "'");
}

void emit_json(const CommonOptions& options, const Json& doc, std::ostream& out) {
  if (options.json_out.empty()) return;
  with_output(options.json_out, out, [&doc](std::ostream& s) { s << doc.dump(2) << '\n'; });
}

std::optional<ExposureReport> exposure_for(const RecordTable& table,
                                           std::span<const double> scores,
                                           std::span<const std::string> attrs,
                                           std::vector<std::string>& warnings) {
  std::vector<std::string> local;
  const auto groups = binary_groups(table, attrs, &local);
  if (groups.size() < 2) return std::nullopt;
  auto report = exposure_ddp(rank_all(scores, table.ids()), groups);
  for (const auto* list : {&local, &report.warnings}) {
    for (const auto& w : *list) {
      if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
    }
  }
  return report;
}

DisparityVector metric_on_selection(const RecordTable& table, const SelectionResult& sel,
                                    std::span<const std::string> attrs, MetricKind kind) {
  switch (kind) {
    case MetricKind::kDisparity:
      return disparity(table, sel, attrs);
    case MetricKind::kDisparateImpact:
      return disparate_impact_scaled(table, sel, attrs);
    case MetricKind::kFprGap:
      return fpr_gap(table, sel, attrs);
  }
  return {};
}

MetricSnapshot snapshot(const RecordTable& table, const RankingSpec& spec,
                        const BonusVector& bonus, const Objective& objective,
                        const std::vector<MetricKind>& extra,
                        std::vector<std::string>& warnings) {
  MetricSnapshot s;
  const auto ev = evaluate_bonus(table, spec, bonus, objective);
  s.objective = ev.objective;
  s.ndcg = ev.ndcg;
  const auto scores = score(table, spec, bonus);
  s.exposure = exposure_for(table, scores, bonus.attrs, warnings);
  if (!extra.empty()) {
    const auto sel = select_top_k(scores, table, spec.k);
    for (auto kind : extra) {
      s.metrics.emplace_back(std::string(to_string(kind)),
                             metric_on_selection(table, sel, bonus.attrs, kind));
    }
  }
  return s;
}

RunSettings settings_for(const std::string& command, const CommonOptions& options,
                         const Dataset& dataset, const RankingSpec& spec,
                         const DcaConfig& config) {
  RunSettings s;
  s.command = command;
  s.data_path = options.data;
  s.config_path = options.config;
  s.data_format = options.format;
  s.n_records = dataset.table.size();
  s.ranking = spec;
  s.dca = config;
  return s;
}

void append_unique(std::vector<std::string>& into, const std::vector<std::string>& from) {
  for (const auto& w : from) {
    if (std::find(into.begin(), into.end(), w) == into.end()) into.push_back(w);
  }
}

std::string fmt(double v) { return csv::format_double(v); }

}  // namespace

SweepMode parse_sweep_mode(std::string_view text) {
  if (text == "per-k-optimized" || text == "per-k") return SweepMode::kPerK;
  if (text == "fixed-bonus" || text == "fixed") return SweepMode::kFixedBonus;
  if (text == "log-discounted" || text == "log") return SweepMode::kLogDiscounted;
  throw ConfigError("unknown sweep mode '" + std::string(text) +
                    "' (per-k-optimized, fixed-bonus, log-discounted)");
}

Dataset load_from_options(const CommonOptions& options, std::string* format_name) {
  DatasetConfig config;
  if (!options.config.empty()) {
    config = read_dataset_config(options.config);
    if (!options.data.empty()) config.path = options.data;
  } else if (options.format == "compas") {
    if (options.data.empty()) throw ConfigError("--format compas needs --data");
    config = compas_config(options.data);
  } else if (!options.data.empty()) {
    throw ConfigError("--data without --config needs --format compas to know the column roles");
  } else {
    throw ConfigError("no dataset given (use --config and/or --data)");
  }
  if (options.format == "compas" && config.format != DatasetConfig::Format::kCompas) {
    auto compas = compas_config(config.path, config.orientation);
    if (!config.categorical.empty()) compas.categorical = config.categorical;
    config = std::move(compas);
  } else if (!options.format.empty() && options.format != "compas" && options.format != "csv" &&
             options.format != "synthetic") {
    throw ConfigError("unknown --format '" + options.format + "'");
  }
  if (!options.orientation.empty()) config.orientation = parse_orientation(options.orientation);
  if (format_name) {
    switch (config.format) {
      case DatasetConfig::Format::kCsv: *format_name = "csv"; break;
      case DatasetConfig::Format::kCompas: *format_name = "compas"; break;
      case DatasetConfig::Format::kSynthetic: *format_name = "synthetic"; break;
    }
  }
  return load_dataset(config);
}

DcaConfig dca_config_from_options(const CommonOptions& options, const RecordTable& table) {
  DcaConfig c;
  c.granularity = options.granularity;
  c.bonus_max = options.bonus_max;
  c.master_seed = options.seed;
  c.sample.sample_size = options.sample_size;
  c.objective.kind = parse_metric_kind(options.objective);
  if (options.log_discount) {
    LogDiscount ld;
    if (options.k_max) ld.k_max = *options.k_max;
    c.objective.log_discount = ld;
  } else if (options.k_max) {
    throw ConfigError("--k-max only applies with --log-discount");
  }
  c.attrs = resolved_attrs(options, table);
  c.validate();
  return c;
}

BonusVector parse_bonus(std::string_view text, double granularity) {
  BonusVector b;
  b.granularity = granularity;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    const auto pos = item.rfind(':');
    if (pos == std::string::npos) {
      throw ConfigError("--bonus expects attr:value pairs, got '" + item + "'");
    }
    auto name = item.substr(0, pos);
    name.erase(0, name.find_first_not_of(' '));
    name.erase(name.find_last_not_of(' ') + 1);
    const auto value_text = item.substr(pos + 1);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(value_text, &used);
      if (value_text.find_first_not_of(' ', used) != std::string::npos) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ConfigError("--bonus value for '" + name + "' is not a number");
    }
    if (!std::isfinite(value)) throw ConfigError("--bonus value for '" + name + "' is not finite");
    if (std::find(b.attrs.begin(), b.attrs.end(), name) != b.attrs.end()) {
      throw ConfigError("--bonus names '" + name + "' twice");
    }
    b.attrs.push_back(name);
    b.values.push_back(value);
  }
  if (b.attrs.empty()) throw ConfigError("--bonus is empty");
  return b;
}

RunReport make_report(const std::string& command, const CommonOptions& options,
                      const Dataset& dataset, const RankingSpec& spec,
                      const DcaConfig& config, const DcaResult& result) {
  RunReport r;
  r.settings = settings_for(command, options, dataset, spec, config);
  r.bonus = result.bonus;
  r.core_bonus = result.core_bonus;
  r.warnings = dataset.warnings;
  append_unique(r.warnings, result.warnings);
  const auto zero = BonusVector::zeros(result.bonus.attrs, config.granularity);
  r.before = snapshot(dataset.table, spec, zero, config.objective, {}, r.warnings);
  r.after = snapshot(dataset.table, spec, result.bonus, config.objective, {}, r.warnings);
  r.wall_seconds = result.wall_seconds;
  r.loop_seconds = result.loop_seconds;
  return r;
}

int cmd_compute_bonus(const CommonOptions& options, std::ostream& out) {
  const auto start = Clock::now();
  std::string format;
  auto ds = load_from_options(options, &format);
  auto opts = options;
  opts.format = format;
  const auto spec = ds.ranking(options.k);
  spec.validate();
  const auto config = dca_config_from_options(opts, ds.table);
  const auto result = run_dca(ds.table, spec, config);
  auto report = make_report("compute-bonus", opts, ds, spec, config, result);
  report.wall_seconds = seconds_since(start);
  if (options.json_out != "-") out << render_table(report);
  emit_json(options, to_json(report), out);
  return 0;
}

int cmd_evaluate(const CommonOptions& options, const EvaluateOptions& eval, std::ostream& out) {
  const auto start = Clock::now();
  std::string format;
  auto ds = load_from_options(options, &format);
  auto opts = options;
  opts.format = format;
  const auto spec = ds.ranking(options.k);
  spec.validate();
  auto bonus = parse_bonus(eval.bonus, options.granularity);
  for (const auto& a : bonus.attrs) (void)ds.table.fairness(a);
  opts.attrs = bonus.attrs;
  auto config = dca_config_from_options(opts, ds.table);
  config.initial_bonus = bonus.values;

  std::vector<MetricKind> kinds;
  for (const auto& m : eval.metrics) {
    if (m == "ndcg" || m == "ddp") continue;  // always reported
    kinds.push_back(parse_metric_kind(m));
  }
  RunReport r;
  r.settings = settings_for("evaluate", opts, ds, spec, config);
  r.bonus = bonus;
  r.warnings = ds.warnings;
  r.before = snapshot(ds.table, spec, BonusVector::zeros(bonus.attrs, bonus.granularity),
                      config.objective, kinds, r.warnings);
  r.after = snapshot(ds.table, spec, bonus, config.objective, kinds, r.warnings);
  append_unique(r.warnings, r.before.objective.warnings);
  append_unique(r.warnings, r.after.objective.warnings);
  r.wall_seconds = seconds_since(start);
  if (options.json_out != "-") out << render_table(r);
  emit_json(options, to_json(r), out);
  return 0;
}

int cmd_sweep_k(const CommonOptions& options, const SweepOptions& sweep, std::ostream& out) {
  const auto start = Clock::now();
  if (sweep.k_grid.empty()) throw ConfigError("k grid is empty");
  for (double k : sweep.k_grid) {
    if (!(k > 0.0 && k < 1.0)) throw ConfigError("k grid values must lie in (0,1)");
  }
  std::string format;
  auto ds = load_from_options(options, &format);
  auto opts = options;
  opts.format = format;
  if (sweep.mode == SweepMode::kLogDiscounted) opts.log_discount = true;
  if (sweep.mode == SweepMode::kPerK && options.log_discount) {
    throw ConfigError("per-k-optimized sweeps optimize at each k; drop --log-discount");
  }
  const auto config = dca_config_from_options(opts, ds.table);
  const auto base_spec = ds.ranking(options.k);
  base_spec.validate();

  struct Row {
    double k = 0.0;
    BonusVector bonus;
    DisparityVector disparity;
    double ndcg = 1.0;
    std::vector<std::string> warnings;
  };
  std::vector<Row> rows(sweep.k_grid.size());
  const Objective at_k{config.objective.kind, std::nullopt};

  std::optional<BonusVector> shared;
  std::vector<std::string> warnings = ds.warnings;
  if (sweep.mode == SweepMode::kFixedBonus && !sweep.bonus.empty()) {
    shared = parse_bonus(sweep.bonus, options.granularity);
    for (const auto& a : shared->attrs) (void)ds.table.fairness(a);
  } else if (sweep.mode != SweepMode::kPerK) {
    const auto result = run_dca(ds.table, base_spec, config);
    shared = result.bonus;
    append_unique(warnings, result.warnings);
  }

  auto run_row = [&](std::size_t i) {
    Row& row = rows[i];
    row.k = sweep.k_grid[i];
    auto spec = base_spec;
    spec.k = row.k;
    if (shared) {
      row.bonus = *shared;
    } else {
      const auto result = run_dca(ds.table, spec, config);
      row.bonus = result.bonus;
      row.warnings = result.warnings;
    }
    const auto ev = evaluate_bonus(ds.table, spec, row.bonus, at_k);
    row.disparity = ev.objective;
    row.ndcg = ev.ndcg;
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, rows.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) run_row(i);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t i = w; i < rows.size(); i += workers) run_row(i);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  for (const auto& row : rows) append_unique(warnings, row.warnings);

  const auto& attrs = rows.front().bonus.attrs;
  const char* mode_name = sweep.mode == SweepMode::kPerK           ? "per-k-optimized"
                          : sweep.mode == SweepMode::kFixedBonus ? "fixed-bonus"
                                                                 : "log-discounted";
  const std::string metric(to_string(config.objective.kind));

  auto write_csv = [&](std::ostream& s) {
    std::vector<std::string> header{"k", "mode"};
    for (const auto& a : attrs) header.push_back("bonus." + a);
    for (const auto& a : attrs) header.push_back(metric + "." + a);
    header.push_back("norm");
    header.push_back("ndcg");
    csv::write_row(s, header);
    for (const auto& row : rows) {
      std::vector<std::string> fields{fmt(row.k), mode_name};
      for (double v : row.bonus.values) fields.push_back(fmt(v));
      for (double v : row.disparity.components) fields.push_back(fmt(v));
      fields.push_back(fmt(row.disparity.norm()));
      fields.push_back(fmt(row.ndcg));
      csv::write_row(s, fields);
    }
  };
  if (options.json_out != "-") with_output(options.csv_out, out, write_csv);

  if (!options.json_out.empty()) {
    Json doc{{"schema_version", kReportSchemaVersion},
             {"settings", to_json(settings_for("sweep-k", opts, ds, base_spec, config))},
             {"mode", mode_name}};
    Json list = Json::array();
    for (const auto& row : rows) {
      list.push_back(Json{{"k", row.k},
                          {"bonus", to_json(row.bonus)},
                          {metric, to_json(row.disparity)},
                          {"ndcg", row.ndcg}});
    }
    doc["rows"] = std::move(list);
    doc["warnings"] = warnings;
    doc["timing"] = Json{{"wall_seconds", seconds_since(start)}};
    emit_json(options, doc, out);
  }
  return 0;
}

int cmd_compare(const CommonOptions& options, const CompareOptions& compare, std::ostream& out) {
  const auto start = Clock::now();
  if (compare.methods.empty()) throw ConfigError("--methods is empty");
  for (const auto& m : compare.methods) {
    if (m != "dca" && m != "quota" && m != "greedy" && m != "oracle") {
      throw ConfigError("unknown method '" + m + "' (dca, quota, greedy, oracle)");
    }
  }
  if (options.log_discount) {
    throw ConfigError("compare evaluates selections at a fixed k; --log-discount is not supported");
  }
  if (compare.scale_step && !(*compare.scale_step > 0.0 && *compare.scale_step <= 1.0)) {
    throw ConfigError("--scale-sweep step must lie in (0,1]");
  }
  std::string format;
  auto ds = load_from_options(options, &format);
  auto opts = options;
  opts.format = format;
  const auto spec = ds.ranking(options.k);
  spec.validate();
  const auto config = dca_config_from_options(opts, ds.table);
  const auto& attrs = config.attrs;
  const auto& table = ds.table;
  const std::size_t k_count = selection_count(table.size(), spec.k);
  std::vector<std::string> warnings = ds.warnings;

  struct Row {
    std::string method;
    std::string parameter;
    DisparityVector disparity;
    double ndcg = 1.0;
  };
  std::vector<Row> rows;

  const auto weights = utility_weights(table, spec);
  const auto base_scores = score(table, spec, BonusVector::zeros(attrs, config.granularity));
  const auto original = rank_all(base_scores, table.ids());
  auto selection_row = [&](std::string method, std::string parameter, const SelectionResult& sel) {
    auto rows_in_order = sel.selected_rows;
    std::sort(rows_in_order.begin(), rows_in_order.end(), [&](std::size_t a, std::size_t b) {
      if (base_scores[a] != base_scores[b]) return base_scores[a] > base_scores[b];
      return table.ids()[a] < table.ids()[b];
    });
    rows.push_back({std::move(method), std::move(parameter),
                    metric_on_selection(table, sel, attrs, config.objective.kind),
                    ndcg_at_k(original, rows_in_order, spec.k, weights)});
  };
  auto bonus_row = [&](std::string method, std::string parameter, const BonusVector& bonus) {
    const auto ev = evaluate_bonus(table, spec, bonus, config.objective);
    rows.push_back({std::move(method), std::move(parameter), ev.objective, ev.ndcg});
  };

  const bool want_dca = std::count(compare.methods.begin(), compare.methods.end(), "dca") > 0;
  std::optional<DcaResult> dca;
  if (want_dca || compare.scale_step ||
      std::count(compare.methods.begin(), compare.methods.end(), "greedy") > 0) {
    dca = run_dca(table, spec, config);
    append_unique(warnings, dca->warnings);
  }

  std::vector<std::string> binary_attrs;
  for (const auto& a : attrs) {
    if (table.fairness(a).kind == AttrKind::kBinary) binary_attrs.push_back(a);
  }

  for (const auto& method : compare.methods) {
    if (method == "dca") {
      std::ostringstream p;
      p << "bonus=";
      for (std::size_t i = 0; i < dca->bonus.size(); ++i) {
        p << (i ? ";" : "") << dca->bonus.attrs[i] << ':' << fmt(dca->bonus.values[i]);
      }
      bonus_row("dca", p.str(), dca->bonus);
    } else if (method == "quota") {
      if (binary_attrs.empty()) throw ConfigError("quota needs at least one binary attribute");
      QuotaSpec q;
      q.protected_attrs = binary_attrs;
      if (compare.quota_fraction) {
        q.quota_fraction = *compare.quota_fraction;
      } else {
        std::size_t members = 0;
        for (std::size_t i = 0; i < table.size(); ++i) {
          bool in = false;
          for (const auto& a : binary_attrs) in = in || table.fairness(a).values[i] == 1.0;
          members += in;
        }
        q.quota_fraction = static_cast<double>(members) / static_cast<double>(table.size());
      }
      const auto result = quota_select(table, spec, q);
      if (result.shortfall > 0) {
        warnings.push_back("quota: " + std::to_string(result.shortfall) +
                           " reserved slots had no protected candidate");
      }
      selection_row("quota", "fraction=" + fmt(q.quota_fraction), result.selection);
    } else if (method == "greedy") {
      if (binary_attrs.empty()) throw ConfigError("greedy needs at least one binary attribute");
      const auto dca_sel = select_top_k(score(table, spec, dca->bonus), table, spec.k);
      const auto target = disparity(table, dca_sel, binary_attrs);
      const auto constraints = constraints_from_target(table, target, k_count);
      std::ostringstream p;
      p << "minima=";
      for (std::size_t i = 0; i < constraints.minima.size(); ++i) {
        p << (i ? ";" : "") << constraints.minima[i].attr << ':' << constraints.minima[i].min_count;
      }
      selection_row("greedy", p.str(), greedy_reranker(table, spec, constraints));
    } else if (method == "oracle") {
      const double cap = config.bonus_max.value_or(20.0);
      const auto result = grid_search_oracle(table, spec, attrs, config.granularity, cap,
                                             config.objective, std::max(1u, options.threads));
      std::ostringstream p;
      p << "bonus=";
      for (std::size_t i = 0; i < result.bonus.size(); ++i) {
        p << (i ? ";" : "") << result.bonus.attrs[i] << ':' << fmt(result.bonus.values[i]);
      }
      bonus_row("oracle", p.str(), result.bonus);
    }
  }

  if (compare.scale_step) {
    const double step = *compare.scale_step;
    const auto count = static_cast<std::size_t>(std::floor(1.0 / step + 1e-9));
    for (std::size_t i = 0; i <= count; ++i) {
      const double s = std::min(1.0, static_cast<double>(i) * step);
      bonus_row("dca-scaled", "scale=" + fmt(s), scale_bonus(dca->bonus, s));
    }
    if (static_cast<double>(count) * step < 1.0 - 1e-9) {
      bonus_row("dca-scaled", "scale=1", scale_bonus(dca->bonus, 1.0));
    }
  }

  const std::string metric(to_string(config.objective.kind));
  auto write_csv = [&](std::ostream& s) {
    std::vector<std::string> header{"method", "parameter"};
    for (const auto& a : attrs) header.push_back(metric + "." + a);
    header.push_back("norm");
    header.push_back("ndcg");
    csv::write_row(s, header);
    for (const auto& row : rows) {
      std::vector<std::string> fields{row.method, row.parameter};
      for (double v : row.disparity.components) fields.push_back(fmt(v));
      fields.push_back(fmt(row.disparity.norm()));
      fields.push_back(fmt(row.ndcg));
      csv::write_row(s, fields);
    }
  };
  if (options.json_out != "-") with_output(options.csv_out, out, write_csv);

  if (!options.json_out.empty()) {
    Json doc{{"schema_version", kReportSchemaVersion},
             {"settings", to_json(settings_for("compare", opts, ds, spec, config))}};
    Json list = Json::array();
    for (const auto& row : rows) {
      list.push_back(Json{{"method", row.method},
                          {"parameter", row.parameter},
                          {metric, to_json(row.disparity)},
                          {"ndcg", row.ndcg}});
    }
    doc["rows"] = std::move(list);
    doc["warnings"] = warnings;
    doc["timing"] = Json{{"wall_seconds", seconds_since(start)}};
    emit_json(options, doc, out);
  }
  return 0;
}

int cmd_summarize(const CommonOptions& options, std::ostream& out) {
  std::string format;
  const auto ds = load_from_options(options, &format);
  const auto s = summarize(ds.table, options.k, options.sample_size);
  if (options.json_out != "-") {
    out << "records: " << s.n_records << '\n';
    for (const auto& a : s.fairness) {
      out << "  " << a.name << " (" << to_string(a.kind) << ") mean " << fmt(a.mean) << '\n';
    }
    out << "rarest group frequency: " << (s.rarest_group ? fmt(*s.rarest_group) : "n/a") << '\n'
        << "k: " << fmt(s.k) << '\n'
        << "recommended sample size: " << s.recommended_sample_size << '\n'
        << "configured sample size: " << s.configured_sample_size << '\n';
    for (const auto& w : ds.warnings) out << "warning: " << w << '\n';
  }
  if (!options.csv_out.empty()) {
    with_output(options.csv_out, out, [&](std::ostream& f) { write_table_csv(ds.table, f); });
  }
  if (!options.json_out.empty()) {
    Json attrs = Json::array();
    for (const auto& a : s.fairness) {
      attrs.push_back(Json{{"name", a.name}, {"kind", std::string(to_string(a.kind))}, {"mean", a.mean}});
    }
    Json doc{{"schema_version", kReportSchemaVersion},
             {"format", format},
             {"n_records", s.n_records},
             {"fairness", attrs},
             {"rarest_group", s.rarest_group ? Json(*s.rarest_group) : Json(nullptr)},
             {"k", s.k},
             {"recommended_sample_size", s.recommended_sample_size},
             {"configured_sample_size", s.configured_sample_size},
             {"warnings", ds.warnings}};
    emit_json(options, doc, out);
  }
  return 0;
}

}  // namespace fairbonus
