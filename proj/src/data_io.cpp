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

#include "fairbonus/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "fairbonus/csv.hpp"
#include "fairbonus/error.hpp"
#include "fairbonus/sampling.hpp"

namespace fairbonus {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool is_missing(std::string_view cell) {
  cell = trim(cell);
  return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" ||
         cell == "null" || cell == "NULL";
}

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find(sep, start);
    const auto piece = trim(text.substr(start, pos == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : pos - start));
    if (!piece.empty()) out.emplace_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view text, std::string_view key) {
  if (auto v = parse_number(text)) return *v;
  throw ConfigError("'" + std::string(key) + "': '" + std::string(text) +
                    "' is not a number");
}

std::pair<std::string, std::string> split_last(std::string_view item, char sep,
                                               std::string_view key) {
  const auto pos = item.rfind(sep);
  if (pos == std::string_view::npos) {
    throw ConfigError("'" + std::string(key) + "': expected name" + sep +
                      "value in '" + std::string(item) + "'");
  }
  return {std::string(trim(item.substr(0, pos))),
          std::string(trim(item.substr(pos + 1)))};
}

Bounds parse_bounds(std::string_view text, std::string_view key) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) {
    throw ConfigError("'" + std::string(key) + "': bounds must be 'lo, hi'");
  }
  Bounds b{to_double(parts[0], key), to_double(parts[1], key)};
  if (!(b.first < b.second)) {
    throw ConfigError("'" + std::string(key) + "': lower bound must be below upper");
  }
  return b;
}

}  // namespace

std::string category_column(std::string_view column, std::string_view category) {
  std::string out(column);
  out.push_back('.');
  for (char c : category) out.push_back(c == ' ' ? '_' : c);
  return out;
}

std::vector<double> normalize(std::span<const double> values,
                              std::optional<Bounds> bounds,
                              std::string_view column) {
  std::vector<double> out(values.begin(), values.end());
  if (out.empty()) return out;
  double lo = 0.0, hi = 0.0;
  if (bounds) {
    std::tie(lo, hi) = *bounds;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i] < lo || out[i] > hi) {
        std::ostringstream msg;
        msg << "column '" << column << "' value " << out[i] << " (record " << i
            << ") lies outside declared bounds [" << lo << ", " << hi << "]";
        throw DataError(msg.str());
      }
    }
  } else {
    const auto [mn, mx] = std::minmax_element(out.begin(), out.end());
    lo = *mn;
    hi = *mx;
  }
  if (hi == lo) {
    std::fill(out.begin(), out.end(), 0.0);
    return out;
  }
  const double width = hi - lo;
  for (double& v : out) v = std::clamp((v - lo) / width, 0.0, 1.0);
  return out;
}

void DatasetConfig::validate() const {
  if (format == Format::kSynthetic) {
    if (!synthetic) throw ConfigError("synthetic dataset without a generator spec");
    synthetic->validate();
  } else if (path.empty()) {
    throw ConfigError("dataset path is empty");
  }
  if (format != Format::kSynthetic && scores.empty()) {
    throw ConfigError("dataset declares no score attributes");
  }
  if (!(score_scale > 0.0)) throw ConfigError("score_scale must be positive");
  std::set<std::string> roles;
  auto claim = [&roles](const std::string& name, const char* role) {
    if (!roles.insert(name).second) {
      throw ConfigError("column '" + name + "' is given more than one role (" +
                        role + ")");
    }
  };
  if (id_column) claim(*id_column, "id");
  for (const auto& s : scores) claim(s.column, "score");
  for (const auto& f : fairness) claim(f.column, "fairness");
  for (const auto& c : categorical) claim(c.column, "categorical");
  if (outcome) claim(*outcome, "outcome");
}

Dataset load_csv(const DatasetConfig& config) {
  config.validate();
  const auto doc = csv::read_file(config.path);

  auto column_index = [&doc](const std::string& name) {
    const auto idx = doc.column(name);
    if (idx == std::string::npos) {
      throw DataError("data file has no column '" + name + "'");
    }
    return idx;
  };

  std::optional<std::size_t> id_idx;
  if (config.id_column) id_idx = column_index(*config.id_column);
  std::vector<std::size_t> score_idx, fair_idx, cat_idx;
  for (const auto& s : config.scores) score_idx.push_back(column_index(s.column));
  for (const auto& f : config.fairness) fair_idx.push_back(column_index(f.column));
  for (const auto& c : config.categorical) cat_idx.push_back(column_index(c.column));
  std::optional<std::size_t> outcome_idx;
  if (config.outcome) outcome_idx = column_index(*config.outcome);

  std::vector<std::size_t> required = score_idx;
  required.insert(required.end(), fair_idx.begin(), fair_idx.end());
  required.insert(required.end(), cat_idx.begin(), cat_idx.end());
  if (id_idx) required.push_back(*id_idx);
  if (outcome_idx) required.push_back(*outcome_idx);

  Dataset ds{RecordTable({0}, {}, {}), {}, config.orientation, config.score_scale, {}};

  std::vector<std::int64_t> ids;
  std::vector<std::vector<double>> raw_scores(score_idx.size());
  std::vector<std::vector<double>> raw_fair(fair_idx.size());
  std::vector<std::vector<std::string>> raw_cat(cat_idx.size());
  std::vector<double> raw_outcome;
  std::size_t dropped = 0;

  auto numeric = [&doc](const csv::Row& row, std::size_t idx) {
    const auto v = parse_number(row.fields[idx]);
    if (!v) {
      throw DataError("line " + std::to_string(row.line) + ", column '" +
                      doc.header[idx] + "': '" + row.fields[idx] +
                      "' is not numeric");
    }
    return *v;
  };
  auto binary = [&](const csv::Row& row, std::size_t idx) {
    const double v = numeric(row, idx);
    if (v != 0.0 && v != 1.0) {
      throw DataError("line " + std::to_string(row.line) + ", column '" +
                      doc.header[idx] + "': value " + row.fields[idx] +
                      " in a column declared binary");
    }
    return v;
  };

  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    const auto& row = doc.rows[r];
    const bool missing = std::any_of(required.begin(), required.end(),
                                     [&](std::size_t i) { return is_missing(row.fields[i]); });
    if (missing) {
      ++dropped;
      if (dropped <= 10) {
        ds.warnings.push_back("line " + std::to_string(row.line) +
                              ": missing required value; record rejected");
      }
      continue;
    }
    if (id_idx) {
      const double v = numeric(row, *id_idx);
      if (v != std::floor(v) || std::fabs(v) > 9.0e15) {
        throw DataError("line " + std::to_string(row.line) + ": id '" +
                        row.fields[*id_idx] + "' is not an integer");
      }
      ids.push_back(static_cast<std::int64_t>(v));
    } else {
      ids.push_back(static_cast<std::int64_t>(r));
    }
    for (std::size_t j = 0; j < score_idx.size(); ++j) {
      raw_scores[j].push_back(numeric(row, score_idx[j]));
    }
    for (std::size_t j = 0; j < fair_idx.size(); ++j) {
      raw_fair[j].push_back(config.fairness[j].kind == AttrKind::kBinary
                                ? binary(row, fair_idx[j])
                                : numeric(row, fair_idx[j]));
    }
    for (std::size_t j = 0; j < cat_idx.size(); ++j) {
      raw_cat[j].emplace_back(trim(row.fields[cat_idx[j]]));
    }
    if (outcome_idx) raw_outcome.push_back(binary(row, *outcome_idx));
  }
  if (dropped > 10) {
    ds.warnings.push_back(std::to_string(dropped) +
                          " records rejected for missing values in total");
  }
  if (ids.empty()) throw DataError("data file '" + config.path + "' has no usable records");

  std::vector<ScoreColumn> scores;
  for (std::size_t j = 0; j < config.scores.size(); ++j) {
    const auto& s = config.scores[j];
    scores.push_back({s.column, normalize(raw_scores[j], s.bounds, s.column)});
    ds.weights.emplace_back(s.column, s.weight);
  }
  std::vector<FairnessColumn> fairness;
  for (std::size_t j = 0; j < config.fairness.size(); ++j) {
    const auto& f = config.fairness[j];
    auto values = f.kind == AttrKind::kBinary ? raw_fair[j]
                                              : normalize(raw_fair[j], f.bounds, f.column);
    fairness.push_back({f.column, f.kind, std::move(values)});
  }
  for (std::size_t j = 0; j < config.categorical.size(); ++j) {
    const auto& c = config.categorical[j];
    std::vector<std::string> cats = c.categories;
    if (cats.empty()) {
      std::set<std::string> seen(raw_cat[j].begin(), raw_cat[j].end());
      cats.assign(seen.begin(), seen.end());
    }
    for (const auto& cat : cats) {
      FairnessColumn col{category_column(c.column, cat), AttrKind::kBinary, {}};
      col.values.reserve(ids.size());
      std::size_t hits = 0;
      for (const auto& v : raw_cat[j]) {
        col.values.push_back(v == cat ? 1.0 : 0.0);
        hits += (v == cat);
      }
      if (hits == 0) {
        ds.warnings.push_back("category '" + cat + "' of '" + c.column +
                              "' does not occur in the data");
      }
      fairness.push_back(std::move(col));
    }
  }
  std::optional<OutcomeColumn> outcome;
  if (config.outcome) outcome = OutcomeColumn{*config.outcome, std::move(raw_outcome)};

  ds.table = RecordTable(std::move(ids), std::move(scores), std::move(fairness),
                         std::move(outcome));
  return ds;
}

Dataset load_dataset(const DatasetConfig& config) {
  if (config.format != DatasetConfig::Format::kSynthetic) return load_csv(config);
  config.validate();
  Dataset ds{generate_synthetic(*config.synthetic), {}, config.orientation,
             config.score_scale, {}};
  if (config.scores.empty()) {
    const double w = 1.0 / static_cast<double>(config.synthetic->scores.size());
    for (const auto& s : config.synthetic->scores) ds.weights.emplace_back(s.name, w);
  } else {
    for (const auto& s : config.scores) ds.weights.emplace_back(s.column, s.weight);
  }
  return ds;
}

DatasetConfig compas_config(std::string path, Orientation orientation,
                            std::vector<std::string> races) {
  DatasetConfig c;
  c.format = DatasetConfig::Format::kCompas;
  c.path = std::move(path);
  c.id_column = "id";
  c.scores.push_back({"decile_score", 1.0, Bounds{0.0, 10.0}});
  c.categorical.push_back({"race", std::move(races)});
  c.outcome = "two_year_recid";
  c.orientation = orientation;
  c.score_scale = 10.0;
  return c;
}

namespace {

ScoreDistribution parse_distribution(const std::string& name, std::string_view spec,
                                     std::string_view key) {
  ScoreDistribution d;
  d.name = name;
  const auto open = spec.find('(');
  const auto close = spec.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw ConfigError("'" + std::string(key) + "': expected normal(mean,sd) or uniform(lo,hi)");
  }
  const auto kind = trim(spec.substr(0, open));
  const auto args = split(spec.substr(open + 1, close - open - 1), ',');
  if (args.size() != 2) throw ConfigError("'" + std::string(key) + "': two parameters expected");
  if (kind == "normal") {
    d.kind = ScoreDistribution::Kind::kNormal;
  } else if (kind == "uniform") {
    d.kind = ScoreDistribution::Kind::kUniform;
  } else {
    throw ConfigError("'" + std::string(key) + "': unknown distribution '" +
                      std::string(kind) + "'");
  }
  d.a = to_double(args[0], key);
  d.b = to_double(args[1], key);
  return d;
}

// Items of a comma list are `name:value`; a bare `name` yields an empty value.
std::vector<std::pair<std::string, std::string>> named_items(std::string_view value) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& item : split(value, ',')) {
    const auto pos = item.find(':');
    if (pos == std::string::npos) {
      out.emplace_back(item, "");
    } else {
      out.emplace_back(std::string(trim(std::string_view(item).substr(0, pos))),
                       std::string(trim(std::string_view(item).substr(pos + 1))));
    }
  }
  return out;
}

}  // namespace

DatasetConfig parse_dataset_config(std::string_view text, const std::string& base_dir) {
  DatasetConfig c;
  std::map<std::string, Bounds> score_bounds, fairness_bounds;
  std::map<std::string, std::vector<std::string>> categories;
  SyntheticSpec syn;
  bool has_synthetic = false;
  std::string format = "csv";
  std::string distribution_list;  // synthetic.score needs the parenthesized form

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key(trim(view.substr(0, eq)));
    const std::string value(trim(view.substr(eq + 1)));

    if (key == "format") {
      format = value;
    } else if (key == "path") {
      std::filesystem::path p(value);
      c.path = p.is_absolute() ? value : (std::filesystem::path(base_dir) / p).string();
    } else if (key == "id") {
      c.id_column = value;
    } else if (key == "score") {
      for (const auto& [name, w] : named_items(value)) {
        c.scores.push_back({name, w.empty() ? 1.0 : to_double(w, key), std::nullopt});
      }
    } else if (key.rfind("score_bounds.", 0) == 0) {
      score_bounds[key.substr(13)] = parse_bounds(value, key);
    } else if (key == "fairness") {
      for (const auto& [name, kind] : named_items(value)) {
        AttrKind k = AttrKind::kBinary;
        if (kind == "continuous") {
          k = AttrKind::kContinuous;
        } else if (!kind.empty() && kind != "binary") {
          throw ConfigError("'fairness': unknown kind '" + kind + "' for '" + name + "'");
        }
        c.fairness.push_back({name, k, std::nullopt});
      }
    } else if (key.rfind("fairness_bounds.", 0) == 0) {
      fairness_bounds[key.substr(16)] = parse_bounds(value, key);
    } else if (key == "categorical") {
      for (const auto& name : split(value, ',')) c.categorical.push_back({name, {}});
    } else if (key.rfind("categories.", 0) == 0) {
      categories[key.substr(11)] = split(value, ',');
    } else if (key == "outcome") {
      c.outcome = value;
    } else if (key == "orientation") {
      c.orientation = parse_orientation(value);
    } else if (key == "score_scale") {
      c.score_scale = to_double(value, key);
    } else if (key.rfind("synthetic.", 0) == 0) {
      has_synthetic = true;
      const std::string sub = key.substr(10);
      if (sub == "n") {
        syn.n_records = static_cast<std::size_t>(to_double(value, key));
      } else if (sub == "seed") {
        syn.seed = static_cast<std::uint64_t>(to_double(value, key));
      } else if (sub == "score") {
        distribution_list = value;
      } else if (sub == "group") {
        for (const auto& [name, freq] : named_items(value)) {
          if (freq == "continuous") {
            syn.groups.push_back({name, AttrKind::kContinuous, 0.0});
          } else {
            syn.groups.push_back({name, AttrKind::kBinary, to_double(freq, key)});
          }
        }
      } else if (sub == "shift") {
        for (const auto& [target, delta] : named_items(value)) {
          const auto [group, attr] = split_last(target, '>', key);
          syn.shifts.push_back({group, attr, to_double(delta, key)});
        }
      } else if (sub == "cooccur") {
        for (const auto& [pair, joint] : named_items(value)) {
          const auto [first, second] = split_last(pair, '&', key);
          syn.cooccurrences.push_back({first, second, to_double(joint, key)});
        }
      } else if (sub == "outcome") {
        syn.outcome = value;
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  if (!distribution_list.empty()) {
    // Split on the commas that are outside parentheses.
    int depth = 0;
    std::string item;
    auto flush = [&] {
      const auto t = trim(item);
      if (!t.empty()) {
        const auto [name, dist] = std::pair{std::string(trim(t.substr(0, t.find(':')))),
                                            std::string(t.substr(t.find(':') + 1))};
        if (t.find(':') == std::string_view::npos) {
          throw ConfigError("'synthetic.score': expected name:distribution");
        }
        syn.scores.push_back(parse_distribution(name, dist, "synthetic.score"));
      }
      item.clear();
    };
    for (char ch : distribution_list) {
      if (ch == '(') ++depth;
      if (ch == ')') --depth;
      if (ch == ',' && depth == 0) {
        flush();
      } else {
        item.push_back(ch);
      }
    }
    flush();
  }

  if (format == "csv") {
    c.format = DatasetConfig::Format::kCsv;
  } else if (format == "compas") {
    auto compas = compas_config(c.path, c.orientation);
    compas.categorical = c.categorical.empty() ? compas.categorical : c.categorical;
    if (c.scores.size() == 1) compas.scores[0].column = c.scores[0].column;
    c = std::move(compas);
  } else if (format == "synthetic") {
    c.format = DatasetConfig::Format::kSynthetic;
  } else {
    throw ConfigError("unknown dataset format '" + format + "'");
  }
  if (has_synthetic) c.synthetic = syn;

  for (auto& s : c.scores) {
    if (auto it = score_bounds.find(s.column); it != score_bounds.end()) s.bounds = it->second;
  }
  for (auto& f : c.fairness) {
    if (auto it = fairness_bounds.find(f.column); it != fairness_bounds.end()) {
      f.bounds = it->second;
    }
  }
  for (auto& cat : c.categorical) {
    if (auto it = categories.find(cat.column); it != categories.end()) {
      cat.categories = it->second;
    }
  }
  c.validate();
  return c;
}

DatasetConfig read_dataset_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_dataset_config(buf.str(), parent.empty() ? "." : parent.string());
}

void write_table_csv(const RecordTable& table, std::ostream& out) {
  std::vector<std::string> header{"id"};
  for (const auto& c : table.score_columns()) header.push_back(c.name);
  for (const auto& c : table.fairness_columns()) header.push_back(c.name);
  if (table.outcome()) header.push_back(table.outcome()->name);
  csv::write_row(out, header);
  std::vector<std::string> fields;
  for (std::size_t i = 0; i < table.size(); ++i) {
    fields.clear();
    fields.push_back(std::to_string(table.ids()[i]));
    for (const auto& c : table.score_columns()) fields.push_back(csv::format_double(c.values[i]));
    for (const auto& c : table.fairness_columns()) {
      fields.push_back(csv::format_double(c.values[i]));
    }
    if (table.outcome()) fields.push_back(csv::format_double(table.outcome()->values[i]));
    csv::write_row(out, fields);
  }
}

DatasetSummary summarize(const RecordTable& table, double k,
                         std::size_t configured_sample_size) {
  DatasetSummary s;
  s.n_records = table.size();
  const auto n = static_cast<double>(table.size());
  for (const auto& c : table.fairness_columns()) {
    const double mean = std::accumulate(c.values.begin(), c.values.end(), 0.0) / n;
    s.fairness.push_back({c.name, c.kind, mean});
  }
  s.rarest_group = rarest_group_frequency(table);
  s.k = k;
  s.recommended_sample_size = recommended_sample_size(k, s.rarest_group);
  s.configured_sample_size = configured_sample_size;
  return s;
}

}  // namespace fairbonus
