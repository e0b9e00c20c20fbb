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

#ifndef GLYPHSIM_ENCODER_TENSOR_HPP_
#define GLYPHSIM_ENCODER_TENSOR_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "glyphsim/core.hpp"

namespace glyphsim {

template <typename T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
struct NamedTensor {
  std::string name;
  std::vector<int> shape;
  Vec<T> values;

  std::int64_t numel() const {
    return std::accumulate(shape.begin(), shape.end(), std::int64_t{1},
                           std::multiplies<>());
  }
};

/// Ordered collection of named tensors. Order is insertion order and is the
/// order used for serialization, optimizer state and EMA.
template <typename T>
class ParamSet {
 public:
  NamedTensor<T>& add(const std::string& name, std::vector<int> shape) {
    if (index_.contains(name)) throw Error("duplicate tensor " + name);
    NamedTensor<T> t{name, std::move(shape), {}};
    t.values = Vec<T>::Zero(t.numel());
    index_[name] = tensors_.size();
    tensors_.push_back(std::move(t));
    return tensors_.back();
  }

  bool contains(const std::string& name) const { return index_.contains(name); }

  NamedTensor<T>& get(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error("no tensor named " + name);
    return tensors_[it->second];
  }
  const NamedTensor<T>& get(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error("no tensor named " + name);
    return tensors_[it->second];
  }

  std::size_t size() const { return tensors_.size(); }
  NamedTensor<T>& operator[](std::size_t i) { return tensors_[i]; }
  const NamedTensor<T>& operator[](std::size_t i) const { return tensors_[i]; }
  auto begin() { return tensors_.begin(); }
  auto end() { return tensors_.end(); }
  auto begin() const { return tensors_.begin(); }
  auto end() const { return tensors_.end(); }

  std::int64_t parameter_count() const {
    std::int64_t n = 0;
    for (const auto& t : tensors_) n += t.numel();
    return n;
  }

  ParamSet zeros_like() const {
    ParamSet out;
    for (const auto& t : tensors_) out.add(t.name, t.shape);
    return out;
  }

  void set_zero() {
    for (auto& t : tensors_) t.values.setZero();
  }

  template <typename U>
  ParamSet<U> cast() const {
    ParamSet<U> out;
    for (const auto& t : tensors_) out.add(t.name, t.shape).values = t.values.template cast<U>();
    return out;
  }

  bool same_layout(const ParamSet& other) const {
    if (other.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i)
      if (tensors_[i].name != other[i].name || tensors_[i].shape != other[i].shape)
        return false;
    return true;
  }

  bool all_finite() const {
    for (const auto& t : tensors_)
      if (!t.values.allFinite()) return false;
    return true;
  }

  T squared_norm() const {
    T s = 0;
    for (const auto& t : tensors_) s += t.values.squaredNorm();
    return s;
  }

  void scale(T factor) {
    for (auto& t : tensors_) t.values *= factor;
  }

  void add_scaled(const ParamSet& other, T factor) {
    for (std::size_t i = 0; i < size(); ++i)
      tensors_[i].values += factor * other[i].values;
  }

  bool operator==(const ParamSet& other) const {
    if (!same_layout(other)) return false;
    for (std::size_t i = 0; i < size(); ++i)
      if (tensors_[i].values != other[i].values) return false;
    return true;
  }

 private:
  std::vector<NamedTensor<T>> tensors_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace glyphsim

#endif  // GLYPHSIM_ENCODER_TENSOR_HPP_
