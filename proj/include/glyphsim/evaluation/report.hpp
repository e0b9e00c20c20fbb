// Copyright 2026 The glyphsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef GLYPHSIM_EVALUATION_REPORT_HPP_
#define GLYPHSIM_EVALUATION_REPORT_HPP_

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "glyphsim/core.hpp"
#include "glyphsim/evaluation/ranking.hpp"

namespace glyphsim::evaluation {

/// Metrics of one evaluated model (teacher, student, target, ...).
class ModelMetrics {
 public:
  explicit ModelMetrics(std::string model) : model_(std::move(model)) {}

  const std::string& model() const { return model_; }

  /// Records a metric; a key may be set only once.
  ModelMetrics& set(const std::string& key, nlohmann::json value) {
    if (values_.contains(key)) throw Error("duplicate metric key: " + key + " for " + model_);
    values_[key] = std::move(value);
    return *this;
  }

  /// Records a metric as not applicable to this run; it is reported as null.
  ModelMetrics& skip(const std::string& key) { return set(key, nullptr); }

  bool has(const std::string& key) const { return values_.contains(key); }
  const nlohmann::json& get(const std::string& key) const { return values_.at(key); }
  const std::map<std::string, nlohmann::json>& values() const { return values_; }

 private:
  std::string model_;
  std::map<std::string, nlohmann::json> values_;
};

struct RunMetadata {
  std::string config_hash;
  std::uint64_t seed = 0;
  nlohmann::json extra = nlohmann::json::object();
};

inline constexpr const char* kGlyphMetrics[] = {"n20r1", "n20r5"};
inline constexpr const char* kScriptMetrics[] = {"ndcg10", "spearman_rho"};

/// separability[triple][model] = ratio
using SeparabilityTable = std::map<std::string, std::map<std::string, double>>;

/// Aggregates per-model metrics into the report JSON. Glyph metrics are
/// required for every model; script metrics are null when absent. The
/// top-level metric fields repeat the first model's values.
inline nlohmann::json build_report(const std::vector<ModelMetrics>& models,
                                   const SeparabilityTable& separability,
                                   const RunMetadata& meta,
                                   const std::vector<std::string>& notices = {}) {
  if (models.empty()) throw Error("report needs at least one model");
  std::set<std::string> names;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& m : models) {
    if (!names.insert(m.model()).second) throw Error("duplicate metric key: model " + m.model());
    nlohmann::json row;
    row["model"] = m.model();
    for (const char* key : kGlyphMetrics) {
      if (!m.has(key)) throw Error(std::string("missing required metric ") + key + " for " + m.model());
      row[key] = m.get(key);
    }
    for (const char* key : kScriptMetrics) row[key] = m.has(key) ? m.get(key) : nullptr;
    for (const auto& [k, v] : m.values())
      if (!row.contains(k)) row[k] = v;
    rows.push_back(row);
  }
  nlohmann::json report;
  report["tool_version"] = kVersion;
  report["config_hash"] = meta.config_hash;
  report["seed"] = meta.seed;
  report["relevance_mapping"] = kRelevanceMapping;
  report["models"] = rows;
  for (const char* key : kGlyphMetrics) report[key] = rows.front()[key];
  for (const char* key : kScriptMetrics) report[key] = rows.front()[key];
  nlohmann::json sep = nlohmann::json::object();
  for (const auto& [triple, by_model] : separability) {
    for (const auto& [model, value] : by_model) {
      if (!names.contains(model)) throw Error("separability given for unknown model " + model);
      sep[triple][model] = value;
    }
  }
  report["separability"] = sep;
  report["notices"] = notices;
  report["metadata"] = meta.extra;
  return report;
}

namespace detail {

inline std::string cell(const nlohmann::json& v, int decimals) {
  if (v.is_null()) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v.get<double>());
  return buf;
}

}  // namespace detail

/// Plain-text table with one row per model.
inline std::string format_report_table(const nlohmann::json& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %8s %8s %9s %12s\n", "Model", "N20R1", "N20R5",
                "NDCG@10", "Spearman rho");
  out << line;
  for (const auto& row : report.at("models")) {
    const auto pct = [&](const char* k) {
      return row[k].is_null() ? nlohmann::json(nullptr)
                              : nlohmann::json(100.0 * row[k].get<double>());
    };
    std::snprintf(line, sizeof line, "%-12s %8s %8s %9s %12s\n",
                  row.at("model").get<std::string>().c_str(),
                  detail::cell(pct("n20r1"), 1).c_str(), detail::cell(pct("n20r5"), 1).c_str(),
                  detail::cell(row["ndcg10"], 4).c_str(),
                  detail::cell(row["spearman_rho"], 4).c_str());
    out << line;
  }
  if (!report.at("separability").empty()) {
    out << "\nSeparability ratio (lower is better)\n";
    for (const auto& [triple, by_model] : report.at("separability").items()) {
      out << "  " << triple << ':';
      for (const auto& [model, v] : by_model.items())
        out << ' ' << model << '=' << detail::cell(v, 4);
      out << '\n';
    }
  }
  for (const auto& n : report.value("notices", nlohmann::json::array()))
    out << "note: " << n.get<std::string>() << '\n';
  out << "config " << report.at("config_hash").get<std::string>() << ", seed "
      << report.at("seed").get<std::uint64_t>() << ", glyphsim "
      << report.at("tool_version").get<std::string>() << '\n';
  return out.str();
}

inline void write_report(const std::filesystem::path& dir, const nlohmann::json& report) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report.json");
    if (!out) throw Error("cannot write report.json in " + dir.string());
    out << report.dump(2) << '\n';
  }
  std::ofstream out(dir / "report.txt");
  if (!out) throw Error("cannot write report.txt in " + dir.string());
  out << format_report_table(report);
}

}  // namespace glyphsim::evaluation

#endif  // GLYPHSIM_EVALUATION_REPORT_HPP_
