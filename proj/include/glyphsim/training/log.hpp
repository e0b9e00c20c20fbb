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


#ifndef GLYPHSIM_TRAINING_LOG_HPP_
#define GLYPHSIM_TRAINING_LOG_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "glyphsim/core.hpp"

namespace glyphsim::training {

struct StepRecord {
  std::int64_t step = 0;
  int epoch = 0;
  double lr = 0.0;
  double loss = 0.0;
  std::optional<double> kappa;
  double grad_norm = 0.0;
  std::optional<double> probe_cosine;
  double wall_seconds = 0.0;
};

struct ValidationRecord {
  int epoch = 0;
  std::int64_t step = 0;
  std::string metric;
  double value = 0.0;
};

/// Append-only record of a training run.
class TrainingLog {
 public:
  void append(const StepRecord& r) {
    if (!steps_.empty() && r.step <= steps_.back().step)
      throw Error("training log steps must increase");
    steps_.push_back(r);
  }
  void append(const ValidationRecord& r) { validation_.push_back(r); }

  const std::vector<StepRecord>& steps() const { return steps_; }
  const std::vector<ValidationRecord>& validation() const { return validation_; }

  std::vector<double> losses() const {
    std::vector<double> out;
    out.reserve(steps_.size());
    for (const auto& s : steps_) out.push_back(s.loss);
    return out;
  }

  /// step,epoch,lr,loss,kappa,grad_norm,probe_cos,wall_clock
  void write_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "step,epoch,lr,loss,kappa,grad_norm,probe_cos,wall_clock\n";
    out.precision(9);
    for (const auto& s : steps_) {
      out << s.step << ',' << s.epoch << ',' << s.lr << ',' << s.loss << ',';
      if (s.kappa) out << *s.kappa;
      out << ',' << s.grad_norm << ',';
      if (s.probe_cosine) out << *s.probe_cosine;
      out << ',' << s.wall_seconds << '\n';
    }
  }

  void write_validation_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "epoch,step,metric,value\n";
    out.precision(9);
    for (const auto& v : validation_)
      out << v.epoch << ',' << v.step << ',' << v.metric << ',' << v.value << '\n';
  }

  nlohmann::json summary() const {
    nlohmann::json j;
    j["steps"] = steps_.size();
    if (!steps_.empty()) {
      j["first_loss"] = steps_.front().loss;
      j["final_loss"] = steps_.back().loss;
      j["wall_seconds"] = steps_.back().wall_seconds;
      double max_probe = -2.0;
      bool any = false;
      for (const auto& s : steps_)
        if (s.probe_cosine) {
          any = true;
          max_probe = std::max(max_probe, *s.probe_cosine);
        }
      j["max_probe_cosine"] = any ? nlohmann::json(max_probe) : nlohmann::json(nullptr);
    }
    j["validation"] = nlohmann::json::array();
    for (const auto& v : validation_)
      j["validation"].push_back(
          {{"epoch", v.epoch}, {"step", v.step}, {"metric", v.metric}, {"value", v.value}});
    return j;
  }

 private:
  std::vector<StepRecord> steps_;
  std::vector<ValidationRecord> validation_;
};

}  // namespace glyphsim::training

#endif  // GLYPHSIM_TRAINING_LOG_HPP_
