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

#ifndef GLYPHSIM_ENCODER_PREDICTOR_HPP_
#define GLYPHSIM_ENCODER_PREDICTOR_HPP_

#include <cmath>
#include <string>

#include "glyphsim/encoder/tensor.hpp"
#include "glyphsim/rng.hpp"

namespace glyphsim::encoder {

/// Two-layer MLP d -> hidden -> d with a ReLU between the layers. Operates
/// directly on backbone embeddings; there is no projection head.
template <typename T>
struct PredictorParams {
  int dim = 0;
  int hidden = 0;
  ParamSet<T> tensors;

  template <typename U>
  PredictorParams<U> cast() const {
    return {dim, hidden, tensors.template cast<U>()};
  }
};

template <typename T = float>
PredictorParams<T> init_predictor(int dim, int hidden, std::uint64_t seed) {
  if (dim <= 0 || hidden <= 0) throw Error("predictor widths must be positive");
  PredictorParams<T> p{dim, hidden, {}};
  p.tensors.add("pred.fc1.weight", {hidden, dim});
  p.tensors.add("pred.fc1.bias", {hidden});
  p.tensors.add("pred.fc2.weight", {dim, hidden});
  p.tensors.add("pred.fc2.bias", {dim});
  for (auto& t : p.tensors) {
    if (t.name.ends_with(".bias")) continue;
    Rng rng(derive_seed_str(seed, t.name));
    const double stddev = std::sqrt(2.0 / t.shape[1]);
    for (auto& v : t.values) v = static_cast<T>(stddev * rng.normal());
  }
  return p;
}

template <typename T>
struct PredictorCache {
  Vec<T> input;
  Vec<T> hidden_pre;
  Vec<T> hidden;
};

/// q(z). The output is not normalized. `bypass_nonlinearity` replaces the
/// ReLU by the identity (used to check the linear path).
template <typename T>
Vec<T> predictor_forward(const PredictorParams<T>& p, const Vec<T>& z,
                         PredictorCache<T>* cache = nullptr,
                         bool bypass_nonlinearity = false) {
  if (z.size() != p.dim)
    throw Error("predictor input has length " + std::to_string(z.size()) +
                ", expected " + std::to_string(p.dim));
  Eigen::Map<const Mat<T>> w1(p.tensors.get("pred.fc1.weight").values.data(),
                              p.hidden, p.dim);
  Eigen::Map<const Mat<T>> w2(p.tensors.get("pred.fc2.weight").values.data(),
                              p.dim, p.hidden);
  Vec<T> pre = w1 * z + p.tensors.get("pred.fc1.bias").values;
  Vec<T> hid = bypass_nonlinearity ? pre : Vec<T>(pre.cwiseMax(T(0)));
  Vec<T> out = w2 * hid + p.tensors.get("pred.fc2.bias").values;
  if (cache) {
    cache->input = z;
    cache->hidden_pre = std::move(pre);
    cache->hidden = std::move(hid);
  }
  return out;
}

/// Accumulates parameter gradients and returns dL/dz.
template <typename T>
Vec<T> predictor_backward(const PredictorParams<T>& p,
                          const PredictorCache<T>& cache, const Vec<T>& dout,
                          ParamSet<T>& grads) {
  Eigen::Map<const Mat<T>> w1(p.tensors.get("pred.fc1.weight").values.data(),
                              p.hidden, p.dim);
  Eigen::Map<const Mat<T>> w2(p.tensors.get("pred.fc2.weight").values.data(),
                              p.dim, p.hidden);
  Eigen::Map<Mat<T>> dw2(grads.get("pred.fc2.weight").values.data(), p.dim, p.hidden);
  Eigen::Map<Mat<T>> dw1(grads.get("pred.fc1.weight").values.data(), p.hidden, p.dim);
  dw2.noalias() += dout * cache.hidden.transpose();
  grads.get("pred.fc2.bias").values += dout;
  Vec<T> dhid = w2.transpose() * dout;
  dhid = (cache.hidden_pre.array() > T(0)).select(dhid.array(), T(0)).matrix();
  dw1.noalias() += dhid * cache.input.transpose();
  grads.get("pred.fc1.bias").values += dhid;
  return w1.transpose() * dhid;
}

}  // namespace glyphsim::encoder

#endif  // GLYPHSIM_ENCODER_PREDICTOR_HPP_
