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


#ifndef GLYPHSIM_TRAINING_OPTIMIZER_HPP_
#define GLYPHSIM_TRAINING_OPTIMIZER_HPP_

#include <cmath>
#include <initializer_list>

#include "glyphsim/encoder/tensor.hpp"

namespace glyphsim::training {

/// Adam with decoupled weight decay. Moments live alongside the parameter
/// set they were created for.
template <typename T>
class AdamW {
 public:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;

  explicit AdamW(const ParamSet<T>& params)
      : m_(params.zeros_like()), v_(params.zeros_like()) {}

  std::int64_t steps() const { return t_; }

  /// params <- params - lr * wd * params, then the bias-corrected Adam step.
  /// Throws on non-finite gradients without touching the parameters.
  void step(ParamSet<T>& params, const ParamSet<T>& grads, double lr,
            double weight_decay) {
    if (!params.same_layout(grads) || !params.same_layout(m_))
      throw Error("optimizer: parameter and gradient layouts differ");
    if (!grads.all_finite()) throw Error("non-finite gradient");
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
    const T decay = static_cast<T>(1.0 - lr * weight_decay);
    const T step_size = static_cast<T>(lr / c1);
    const T inv_sqrt_c2 = static_cast<T>(1.0 / std::sqrt(c2));
    for (std::size_t i = 0; i < params.size(); ++i) {
      auto& p = params[i].values;
      const auto& g = grads[i].values;
      auto& m = m_[i].values;
      auto& v = v_[i].values;
      m = static_cast<T>(kBeta1) * m + static_cast<T>(1.0 - kBeta1) * g;
      v = static_cast<T>(kBeta2) * v +
          static_cast<T>(1.0 - kBeta2) * g.cwiseProduct(g);
      p *= decay;
      p.array() -= step_size * m.array() /
                   ((v.array().sqrt() * inv_sqrt_c2) + static_cast<T>(kEps));
    }
  }

 private:
  ParamSet<T> m_, v_;
  std::int64_t t_ = 0;
};

/// Global L2 norm over several gradient sets.
template <typename T>
double global_norm(std::initializer_list<const ParamSet<T>*> sets) {
  double s = 0.0;
  for (const auto* g : sets) s += static_cast<double>(g->squared_norm());
  return std::sqrt(s);
}

/// Rescales all sets jointly so their global norm is at most `max_norm`.
/// max_norm <= 0 disables clipping. Returns the pre-clip norm.
template <typename T>
double clip_global_norm(std::initializer_list<ParamSet<T>*> sets, double max_norm) {
  double s = 0.0;
  for (const auto* g : sets) s += static_cast<double>(g->squared_norm());
  const double norm = std::sqrt(s);
  if (max_norm > 0.0 && norm > max_norm) {
    const T factor = static_cast<T>(max_norm / norm);
    for (auto* g : sets) g->scale(factor);
  }
  return norm;
}

}  // namespace glyphsim::training

#endif  // GLYPHSIM_TRAINING_OPTIMIZER_HPP_
