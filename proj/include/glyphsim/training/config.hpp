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


#ifndef GLYPHSIM_TRAINING_CONFIG_HPP_
#define GLYPHSIM_TRAINING_CONFIG_HPP_

#include <cstdint>
#include <string>

#include "glyphsim/core.hpp"
#include "glyphsim/dataset/augment.hpp"

namespace glyphsim::training {

namespace detail {

inline void check_range(Diagnostics* diag, const char* name, double v,
                        double lo, double hi) {
  if (v < lo || v > hi)
    warn(diag, std::string(name) + " = " + std::to_string(v) +
                   " is outside the usual range [" + std::to_string(lo) +
                   ", " + std::to_string(hi) + "]");
}

}  // namespace detail

struct Stage1Config {
  int batch_size = 256;
  double base_lr = 1e-4;
  double weight_decay = 1e-6;
  int warmup_epochs = 10;
  double grad_clip = 1.0;
  double temperature = 0.1;
  int epochs = 150;
  std::uint64_t seed = 0;
  /// Fraction of classes held out for validation; 0 disables validation.
  double validation_fraction = 0.1;
  int validate_every = 5;
  int validation_episodes = 400;
  int validation_way = 20;

  /// Hard errors for unusable values; warnings for values outside the
  /// ranges explored for the reference models.
  void validate(Diagnostics* diag = nullptr) const {
    if (epochs < 1) throw Error("stage1.epochs must be >= 1");
    if (batch_size < 4) throw Error("stage1.batch_size must be >= 4");
    if (!(temperature > 0.0)) throw Error("stage1.temperature must be positive");
    if (!(base_lr >= 0.0)) throw Error("stage1.base_lr must be >= 0");
    if (!(weight_decay >= 0.0)) throw Error("stage1.weight_decay must be >= 0");
    if (warmup_epochs < 0) throw Error("stage1.warmup_epochs must be >= 0");
    if (!(grad_clip >= 0.0)) throw Error("stage1.grad_clip must be >= 0");
    if (!(validation_fraction >= 0.0 && validation_fraction < 1.0))
      throw Error("stage1.validation_fraction must be in [0, 1)");
    if (validate_every < 1) throw Error("stage1.validate_every must be >= 1");
    if (validation_way < 2) throw Error("stage1.validation_way must be >= 2");
    if (validation_episodes < 1) throw Error("stage1.validation_episodes must be >= 1");
    if (batch_size != 128 && batch_size != 256 && batch_size != 512)
      warn(diag, "stage1.batch_size = " + std::to_string(batch_size) +
                     " is not one of 128, 256, 512");
    detail::check_range(diag, "stage1.base_lr", base_lr, 3e-5, 3e-4);
    detail::check_range(diag, "stage1.weight_decay", weight_decay, 1e-7, 1e-4);
    detail::check_range(diag, "stage1.warmup_epochs", warmup_epochs, 5, 60);
    detail::check_range(diag, "stage1.grad_clip", grad_clip, 0, 2);
    detail::check_range(diag, "stage1.temperature", temperature, 0.05, 0.3);
    detail::check_range(diag, "stage1.epochs", epochs, 50, 300);
  }
};

enum class InitMode { kTeacher, kRandom };

inline std::string to_string(InitMode m) {
  return m == InitMode::kTeacher ? "teacher" : "random";
}

inline InitMode parse_init_mode(const std::string& s) {
  if (s == "teacher") return InitMode::kTeacher;
  if (s == "random") return InitMode::kRandom;
  throw Error("unknown init mode: " + s);
}

struct Stage2Config {
  double ema_decay = 0.996;
  int predictor_hidden = 512;
  int batch_size = 256;
  double base_lr = 1e-4;
  /// Multiplier applied to base_lr for the predictor.
  double predictor_lr_multiplier = 2.0;
  double weight_decay = 1e-6;
  int warmup_epochs = 10;
  double grad_clip = 1.0;
  int epochs = 300;
  InitMode init_mode = InitMode::kTeacher;
  std::uint64_t seed = 0;
  /// View augmentation; geometric only unless dilation_probability > 0.
  dataset::AugmentationParams augmentation{};
  /// Probe set size for the collapse monitor and how often it is evaluated.
  int probe_size = 256;
  int probe_every_steps = 0;  // 0: once per epoch

  void validate(Diagnostics* diag = nullptr) const {
    if (epochs < 0) throw Error("stage2.epochs must be >= 0");
    if (batch_size < 1) throw Error("stage2.batch_size must be >= 1");
    if (!(ema_decay >= 0.0 && ema_decay <= 1.0))
      throw Error("stage2.ema_decay must be in [0, 1]");
    if (predictor_hidden < 1) throw Error("stage2.predictor_hidden must be >= 1");
    if (!(base_lr >= 0.0)) throw Error("stage2.base_lr must be >= 0");
    if (!(predictor_lr_multiplier >= 0.0))
      throw Error("stage2.predictor_lr_multiplier must be >= 0");
    if (!(weight_decay >= 0.0)) throw Error("stage2.weight_decay must be >= 0");
    if (warmup_epochs < 0) throw Error("stage2.warmup_epochs must be >= 0");
    if (!(grad_clip >= 0.0)) throw Error("stage2.grad_clip must be >= 0");
    if (probe_size < 2) throw Error("stage2.probe_size must be >= 2");
    if (probe_every_steps < 0) throw Error("stage2.probe_every_steps must be >= 0");
    augmentation.validate();
    detail::check_range(diag, "stage2.ema_decay", ema_decay, 0.95, 0.9995);
    if (predictor_hidden != 256 && predictor_hidden != 512 && predictor_hidden != 1024)
      warn(diag, "stage2.predictor_hidden = " + std::to_string(predictor_hidden) +
                     " is not one of 256, 512, 1024");
    detail::check_range(diag, "stage2.predictor_lr_multiplier",
                        predictor_lr_multiplier, 1, 4);
  }
};

}  // namespace glyphsim::training

#endif  // GLYPHSIM_TRAINING_CONFIG_HPP_
