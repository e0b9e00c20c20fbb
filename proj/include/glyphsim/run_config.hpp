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


#ifndef GLYPHSIM_RUN_CONFIG_HPP_
#define GLYPHSIM_RUN_CONFIG_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "glyphsim/dataset/augment.hpp"
#include "glyphsim/encoder/encoder.hpp"
#include "glyphsim/evaluation/episodes.hpp"
#include "glyphsim/similarity/similarity.hpp"
#include "glyphsim/training/config.hpp"

namespace glyphsim {

struct RunPaths {
  std::string data_root;  // Omniglot-style root: <script>/<character>/*.png
  std::string manifest;   // script -> split assignment
  std::string fonts;      // directory of user-supplied font files
  std::string ranges;     // Unicode script ranges
  std::string levels;     // curated script similarity levels
  std::string out = "out";
};

/// Everything a pipeline run depends on. Stage, encoder and evaluation seeds
/// are derived from the single master seed.
struct RunConfig {
  std::uint64_t seed = 0;
  int threads = 1;
  encoder::EncoderConfig encoder;
  dataset::AugmentationParams augmentation;  // offline copies for Stage 1
  training::Stage1Config stage1;
  training::Stage2Config stage2;
  evaluation::EvalConfig eval;
  similarity::Granularity granularity = similarity::Granularity::kInstances;
  std::vector<std::array<std::string, 3>> separability_triples;
  RunPaths paths;

  void derive_seeds() {
    encoder.seed = derive_seed_str(seed, "encoder");
    stage1.seed = derive_seed_str(seed, "stage1");
    stage2.seed = derive_seed_str(seed, "stage2");
    eval.seed = derive_seed_str(seed, "eval");
  }

  void validate(Diagnostics* diag = nullptr) const {
    if (threads < 1) throw Error("threads must be >= 1");
    encoder.validate();
    augmentation.validate();
    stage1.validate(diag);
    stage2.validate(diag);
    eval.validate();
  }
};

namespace config_detail {

/// Reads known keys from a JSON object and rejects unknown ones.
class Reader {
 public:
  Reader(const nlohmann::json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw Error("config section " + where_ + " must be an object");
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    used_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw Error("config " + where_ + "." + key + ": " + e.what());
    }
  }

  void range(const std::string& key, dataset::Range& out) {
    std::vector<double> v{out.lo, out.hi};
    get(key, v);
    if (v.size() != 2) throw Error("config " + where_ + "." + key + " must be [lo, hi]");
    out = {v[0], v[1]};
  }

  const nlohmann::json* section(const std::string& key) {
    used_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!used_.contains(key)) throw Error("unknown config key: " + where_ + "." + key);
  }

 private:
  const nlohmann::json& j_;
  std::string where_;
  std::set<std::string> used_;
};

inline nlohmann::json augmentation_json(const dataset::AugmentationParams& a) {
  return {{"rotation_degrees", {a.rotation_degrees.lo, a.rotation_degrees.hi}},
          {"shear", {a.shear.lo, a.shear.hi}},
          {"zoom", {a.zoom.lo, a.zoom.hi}},
          {"translation", {a.translation.lo, a.translation.hi}},
          {"rotation_probability", a.rotation_probability},
          {"shear_probability", a.shear_probability},
          {"zoom_probability", a.zoom_probability},
          {"translation_probability", a.translation_probability},
          {"augmentations_per_instance", a.augmentations_per_instance},
          {"dilation_probability", a.dilation_probability}};
}

inline void read_augmentation(const nlohmann::json& j, const std::string& where,
                              dataset::AugmentationParams& a) {
  Reader r(j, where);
  r.range("rotation_degrees", a.rotation_degrees);
  r.range("shear", a.shear);
  r.range("zoom", a.zoom);
  r.range("translation", a.translation);
  r.get("rotation_probability", a.rotation_probability);
  r.get("shear_probability", a.shear_probability);
  r.get("zoom_probability", a.zoom_probability);
  r.get("translation_probability", a.translation_probability);
  r.get("augmentations_per_instance", a.augmentations_per_instance);
  r.get("dilation_probability", a.dilation_probability);
  r.finish();
}

}  // namespace config_detail

/// Canonical JSON form. Paths and the thread count are included only when
/// `with_runtime` is set; they do not enter the config hash.
inline nlohmann::json to_json(const RunConfig& c, bool with_runtime = true) {
  using config_detail::augmentation_json;
  nlohmann::json j;
  j["seed"] = c.seed;
  j["encoder"] = {{"architecture", c.encoder.architecture},
                  {"embedding_dim", c.encoder.embedding_dim}};
  j["augmentation"] = augmentation_json(c.augmentation);
  const auto& s1 = c.stage1;
  j["stage1"] = {{"batch_size", s1.batch_size},
                 {"base_lr", s1.base_lr},
                 {"weight_decay", s1.weight_decay},
                 {"warmup_epochs", s1.warmup_epochs},
                 {"grad_clip", s1.grad_clip},
                 {"temperature", s1.temperature},
                 {"epochs", s1.epochs},
                 {"validation_fraction", s1.validation_fraction},
                 {"validate_every", s1.validate_every},
                 {"validation_episodes", s1.validation_episodes},
                 {"validation_way", s1.validation_way}};
  const auto& s2 = c.stage2;
  j["stage2"] = {{"ema_decay", s2.ema_decay},
                 {"predictor_hidden", s2.predictor_hidden},
                 {"batch_size", s2.batch_size},
                 {"base_lr", s2.base_lr},
                 {"predictor_lr_multiplier", s2.predictor_lr_multiplier},
                 {"weight_decay", s2.weight_decay},
                 {"warmup_epochs", s2.warmup_epochs},
                 {"grad_clip", s2.grad_clip},
                 {"epochs", s2.epochs},
                 {"init_mode", training::to_string(s2.init_mode)},
                 {"augmentation", augmentation_json(s2.augmentation)},
                 {"probe_size", s2.probe_size},
                 {"probe_every_steps", s2.probe_every_steps}};
  nlohmann::json triples = nlohmann::json::array();
  for (const auto& t : c.separability_triples) triples.push_back({t[0], t[1], t[2]});
  j["eval"] = {{"n_way", c.eval.n_way},
               {"k_values", c.eval.k_values},
               {"episodes", c.eval.episodes},
               {"ndcg_k", c.eval.ndcg_k},
               {"granularity", similarity::to_string(c.granularity)},
               {"separability_triples", triples}};
  if (with_runtime) {
    j["threads"] = c.threads;
    j["paths"] = {{"data_root", c.paths.data_root}, {"manifest", c.paths.manifest},
                  {"fonts", c.paths.fonts},         {"ranges", c.paths.ranges},
                  {"levels", c.paths.levels},       {"out", c.paths.out}};
  }
  return j;
}

/// Parses a config, starting from defaults. Unknown keys are errors.
inline RunConfig run_config_from_json(const nlohmann::json& j) {
  using config_detail::Reader;
  RunConfig c;
  Reader root(j, "config");
  root.get("seed", c.seed);
  root.get("threads", c.threads);
  if (const auto* s = root.section("encoder")) {
    Reader r(*s, "encoder");
    r.get("architecture", c.encoder.architecture);
    r.get("embedding_dim", c.encoder.embedding_dim);
    r.finish();
  }
  if (const auto* s = root.section("augmentation"))
    config_detail::read_augmentation(*s, "augmentation", c.augmentation);
  if (const auto* s = root.section("stage1")) {
    auto& s1 = c.stage1;
    Reader r(*s, "stage1");
    r.get("batch_size", s1.batch_size);
    r.get("base_lr", s1.base_lr);
    r.get("weight_decay", s1.weight_decay);
    r.get("warmup_epochs", s1.warmup_epochs);
    r.get("grad_clip", s1.grad_clip);
    r.get("temperature", s1.temperature);
    r.get("epochs", s1.epochs);
    r.get("validation_fraction", s1.validation_fraction);
    r.get("validate_every", s1.validate_every);
    r.get("validation_episodes", s1.validation_episodes);
    r.get("validation_way", s1.validation_way);
    r.finish();
  }
  if (const auto* s = root.section("stage2")) {
    auto& s2 = c.stage2;
    Reader r(*s, "stage2");
    r.get("ema_decay", s2.ema_decay);
    r.get("predictor_hidden", s2.predictor_hidden);
    r.get("batch_size", s2.batch_size);
    r.get("base_lr", s2.base_lr);
    r.get("predictor_lr_multiplier", s2.predictor_lr_multiplier);
    r.get("weight_decay", s2.weight_decay);
    r.get("warmup_epochs", s2.warmup_epochs);
    r.get("grad_clip", s2.grad_clip);
    r.get("epochs", s2.epochs);
    std::string mode = training::to_string(s2.init_mode);
    r.get("init_mode", mode);
    s2.init_mode = training::parse_init_mode(mode);
    if (const auto* a = r.section("augmentation"))
      config_detail::read_augmentation(*a, "stage2.augmentation", s2.augmentation);
    r.get("probe_size", s2.probe_size);
    r.get("probe_every_steps", s2.probe_every_steps);
    r.finish();
  }
  if (const auto* s = root.section("eval")) {
    Reader r(*s, "eval");
    r.get("n_way", c.eval.n_way);
    r.get("k_values", c.eval.k_values);
    r.get("episodes", c.eval.episodes);
    r.get("ndcg_k", c.eval.ndcg_k);
    std::string g = similarity::to_string(c.granularity);
    r.get("granularity", g);
    c.granularity = similarity::parse_granularity(g);
    std::vector<std::vector<std::string>> triples;
    r.get("separability_triples", triples);
    for (const auto& t : triples) {
      if (t.size() != 3) throw Error("eval.separability_triples entries need 3 script ids");
      c.separability_triples.push_back({t[0], t[1], t[2]});
    }
    r.finish();
  }
  if (const auto* s = root.section("paths")) {
    Reader r(*s, "paths");
    r.get("data_root", c.paths.data_root);
    r.get("manifest", c.paths.manifest);
    r.get("fonts", c.paths.fonts);
    r.get("ranges", c.paths.ranges);
    r.get("levels", c.paths.levels);
    r.get("out", c.paths.out);
    r.finish();
  }
  root.finish();
  c.derive_seeds();
  return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return run_config_from_json(j);
}

/// 16-hex-digit hash of the canonical config without runtime fields.
inline std::string config_hash(const RunConfig& c) {
  return hex64(fnv1a(to_json(c, /*with_runtime=*/false).dump()));
}

}  // namespace glyphsim

#endif  // GLYPHSIM_RUN_CONFIG_HPP_
