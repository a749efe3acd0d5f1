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

#include "fairbonus/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace fairbonus {

namespace {

Json exposure_json(const ExposureReport& e) {
  Json groups = Json::object();
  for (std::size_t i = 0; i < e.groups.size(); ++i) groups[e.groups[i]] = e.per_capita[i];
  return Json{{"ddp", e.ddp}, {"per_capita_exposure", groups}};
}

Json snapshot_json(const MetricSnapshot& s) {
  Json out{{"objective", to_json(s.objective)}, {"ndcg", s.ndcg}};
  out["ddp"] = s.exposure ? exposure_json(*s.exposure) : Json(nullptr);
  if (!s.metrics.empty()) {
    Json m = Json::object();
    for (const auto& [name, d] : s.metrics) m[name] = to_json(d);
    out["metrics"] = std::move(m);
  }
  return out;
}

std::string fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

}  // namespace

Json to_json(const RankingSpec& spec) {
  Json weights = Json::object();
  for (const auto& [name, w] : spec.weights) weights[name] = w;
  return Json{{"weights", weights},
              {"orientation", std::string(to_string(spec.orientation))},
              {"k", spec.k},
              {"score_scale", spec.score_scale}};
}

Json to_json(const DcaConfig& c) {
  Json out{{"learning_rates", c.learning_rates},
           {"iterations_per_rate", c.iterations_per_rate},
           {"refine_iterations", c.refine_iterations},
           {"rolling_average_window", c.rolling_average_window},
           {"sample_size", c.sample.sample_size},
           {"sample_with_replacement", c.sample.replacement},
           {"granularity", c.granularity},
           {"bonus_min", c.bonus_min},
           {"bonus_max", c.bonus_max ? Json(*c.bonus_max) : Json(nullptr)},
           {"objective", std::string(to_string(c.objective.kind))},
           {"seed", c.master_seed},
           {"adam",
            {{"alpha", c.adam.alpha},
             {"beta1", c.adam.beta1},
             {"beta2", c.adam.beta2},
             {"epsilon", c.adam.epsilon}}},
           {"attrs", c.attrs}};
  if (c.objective.log_discount) {
    const auto& ld = *c.objective.log_discount;
    out["log_discount"] = Json{{"k_max", ld.k_max}, {"step", ld.step}, {"fractions", ld.fractions}};
  } else {
    out["log_discount"] = nullptr;
  }
  out["initial_bonus"] = c.initial_bonus ? Json(*c.initial_bonus) : Json(nullptr);
  return out;
}

Json to_json(const RunSettings& s) {
  return Json{{"command", s.command},
              {"data", s.data_path},
              {"config", s.config_path},
              {"format", s.data_format},
              {"n_records", s.n_records},
              {"ranking", to_json(s.ranking)},
              {"dca", to_json(s.dca)}};
}

Json to_json(const DisparityVector& d) {
  Json comps = Json::object();
  for (std::size_t i = 0; i < d.attrs.size(); ++i) comps[d.attrs[i]] = d.components[i];
  return Json{{"components", comps}, {"norm", d.norm()}};
}

Json to_json(const BonusVector& b) {
  Json out = Json::object();
  for (std::size_t i = 0; i < b.attrs.size(); ++i) out[b.attrs[i]] = b.values[i];
  return out;
}

Json to_json(const RunReport& r) {
  Json out{{"schema_version", kReportSchemaVersion},
           {"settings", to_json(r.settings)},
           {"bonus", to_json(r.bonus)}};
  out["core_bonus"] = r.core_bonus ? to_json(*r.core_bonus) : Json(nullptr);
  out["before"] = snapshot_json(r.before);
  out["after"] = snapshot_json(r.after);
  out["warnings"] = r.warnings;
  out["timing"] = Json{{"wall_seconds", r.wall_seconds}, {"loop_seconds", r.loop_seconds}};
  return out;
}

Json strip_timing(Json doc) {
  if (doc.is_object()) {
    doc.erase("timing");
    for (auto& [key, value] : doc.items()) value = strip_timing(std::move(value));
  } else if (doc.is_array()) {
    for (auto& value : doc) value = strip_timing(std::move(value));
  }
  return doc;
}

std::string render_table(const RunReport& r) {
  const auto& attrs = r.before.objective.attrs;
  std::size_t label_width = 18;
  std::vector<std::size_t> widths;
  for (const auto& a : attrs) widths.push_back(std::max<std::size_t>(a.size(), 8));

  std::ostringstream out;
  auto cell = [&out](const std::string& text, std::size_t width) {
    out << ' ' << std::string(width > text.size() ? width - text.size() : 0, ' ') << text;
  };
  auto row = [&](const std::string& label, const std::vector<double>& values,
                 std::optional<double> norm, int precision) {
    out << label << std::string(label_width > label.size() ? label_width - label.size() : 0, ' ');
    for (std::size_t i = 0; i < values.size(); ++i) cell(fixed(values[i], precision), widths[i]);
    cell(norm ? fixed(*norm, 3) : "", 8);
    out << '\n';
  };

  out << std::string(label_width, ' ');
  for (std::size_t i = 0; i < attrs.size(); ++i) cell(attrs[i], widths[i]);
  cell("Norm", 8);
  out << '\n';

  std::vector<double> bonus(attrs.size(), 0.0);
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    const auto it = std::find(r.bonus.attrs.begin(), r.bonus.attrs.end(), attrs[i]);
    if (it != r.bonus.attrs.end()) bonus[i] = r.bonus.values[it - r.bonus.attrs.begin()];
  }
  row("Bonus points", bonus, std::nullopt, 2);
  row("Disparity before", r.before.objective.components, r.before.objective.norm(), 3);
  row("Disparity after", r.after.objective.components, r.after.objective.norm(), 3);

  out << "nDCG@k " << fixed(r.after.ndcg, 4);
  if (r.before.exposure && r.after.exposure) {
    out << "   DDP before " << fixed(r.before.exposure->ddp, 4) << "  after "
        << fixed(r.after.exposure->ddp, 4);
  }
  out << '\n';
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
  return out.str();
}

}  // namespace fairbonus
