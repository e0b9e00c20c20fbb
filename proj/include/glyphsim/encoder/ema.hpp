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

#ifndef GLYPHSIM_ENCODER_EMA_HPP_
#define GLYPHSIM_ENCODER_EMA_HPP_

#include "glyphsim/encoder/tensor.hpp"

namespace glyphsim::encoder {

/// target <- kappa * target + (1 - kappa) * student, for every tensor.
template <typename T>
void ema_update(ParamSet<T>& target, const ParamSet<T>& student, double kappa) {
  if (!(kappa >= 0.0 && kappa <= 1.0))
    throw Error("EMA decay must lie in [0, 1]");
  if (!target.same_layout(student))
    throw Error("EMA target and student have different tensor layouts");
  const T k = static_cast<T>(kappa);
  const T one_minus_k = static_cast<T>(1.0 - kappa);
  for (std::size_t i = 0; i < target.size(); ++i)
    target[i].values = k * target[i].values + one_minus_k * student[i].values;
}

}  // namespace glyphsim::encoder

#endif  // GLYPHSIM_ENCODER_EMA_HPP_
