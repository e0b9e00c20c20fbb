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


#ifndef GLYPHSIM_TRAINING_SCHEDULE_HPP_
#define GLYPHSIM_TRAINING_SCHEDULE_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "glyphsim/core.hpp"

namespace glyphsim::training {

/// Linear warmup from 0 to base_lr over `warmup_steps`, then cosine decay to
/// 0 at `total_steps`.
inline double lr_schedule(std::int64_t step, std::int64_t warmup_steps,
                          std::int64_t total_steps, double base_lr) {
  if (total_steps <= 0 || step < 0 || step > total_steps)
    throw Error("lr_schedule: step " + std::to_string(step) +
                " outside [0, " + std::to_string(total_steps) + "]");
  if (warmup_steps < 0 || warmup_steps >= total_steps)
    throw Error("lr_schedule: warmup_steps must lie in [0, total_steps)");
  if (step < warmup_steps)
    return base_lr * static_cast<double>(step) / static_cast<double>(warmup_steps);
  const double progress = static_cast<double>(step - warmup_steps) /
                          static_cast<double>(total_steps - warmup_steps);
  return base_lr * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
}

}  // namespace glyphsim::training

#endif  // GLYPHSIM_TRAINING_SCHEDULE_HPP_
