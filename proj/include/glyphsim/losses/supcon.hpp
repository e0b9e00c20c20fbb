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

#ifndef GLYPHSIM_LOSSES_SUPCON_HPP_
#define GLYPHSIM_LOSSES_SUPCON_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "glyphsim/encoder/tensor.hpp"

namespace glyphsim::losses {

inline constexpr double kUnitNormTolerance = 1e-4;

template <typename T>
struct SupConResult {
  T loss = 0;
  Mat<T> grad;                 // dL/dz, same shape as the embeddings
  std::vector<int> anchors;    // indices i that have at least one positive
  std::vector<T> per_anchor;   // l_i, parallel to anchors
};

/// Supervised contrastive loss over unit embeddings (one per row).
///
/// Anchors are the samples with at least one same-label partner. For anchor
/// i the contrast set is every other anchor and the positives are the
/// contrast-set members sharing its label:
///   l_i = -1/|P(i)| sum_{p in P(i)} log(exp(z_i.z_p / t) / sum_{a in A(i)} exp(z_i.z_a / t))
/// The loss is the mean of l_i over anchors.
template <typename T>
SupConResult<T> supcon_loss(const Mat<T>& z, std::span<const int> labels,
                            double temperature, bool with_grad = true) {
  const Eigen::Index n = z.rows();
  if (!(temperature > 0.0)) throw Error("temperature must be positive");
  if (n < 2) throw Error("supervised contrastive batch needs at least 2 samples");
  if (static_cast<Eigen::Index>(labels.size()) != n)
    throw Error("label count does not match embedding count");
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(static_cast<double>(z.row(i).norm()) - 1.0) > kUnitNormTolerance)
      throw Error("embedding " + std::to_string(i) + " is not unit-norm");

  SupConResult<T> r;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i && labels[i] == labels[j]) {
        r.anchors.push_back(static_cast<int>(i));
        break;
      }
  if (r.anchors.empty()) throw Error("no positive pairs in batch");

  const auto m = static_cast<Eigen::Index>(r.anchors.size());
  Mat<T> za(m, z.cols());
  for (Eigen::Index a = 0; a < m; ++a) za.row(a) = z.row(r.anchors[a]);
  const T inv_t = static_cast<T>(1.0 / temperature);
  Mat<T> logits = (za * za.transpose()) * inv_t;
  Mat<T> g = Mat<T>::Zero(m, m);  // dL/dlogit, before the 1/t factor

  double total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    T mx = -std::numeric_limits<T>::infinity();
    for (Eigen::Index a = 0; a < m; ++a)
      if (a != i) mx = std::max(mx, logits(i, a));
    T denom = 0;
    for (Eigen::Index a = 0; a < m; ++a)
      if (a != i) denom += std::exp(logits(i, a) - mx);
    const T lse = mx + std::log(denom);
    int positives = 0;
    T pos_sum = 0;
    for (Eigen::Index a = 0; a < m; ++a)
      if (a != i && labels[r.anchors[a]] == labels[r.anchors[i]]) {
        ++positives;
        pos_sum += logits(i, a);
      }
    const T li = lse - pos_sum / static_cast<T>(positives);
    r.per_anchor.push_back(li);
    total += static_cast<double>(li);
    if (with_grad) {
      for (Eigen::Index a = 0; a < m; ++a) {
        if (a == i) continue;
        const bool pos = labels[r.anchors[a]] == labels[r.anchors[i]];
        g(i, a) = std::exp(logits(i, a) - lse) -
                  (pos ? T(1) / static_cast<T>(positives) : T(0));
      }
    }
  }
  r.loss = static_cast<T>(total / static_cast<double>(m));
  if (with_grad) {
    g *= inv_t / static_cast<T>(m);
    const Mat<T> gsym = g + g.transpose();
    const Mat<T> dza = gsym * za;
    r.grad = Mat<T>::Zero(n, z.cols());
    for (Eigen::Index a = 0; a < m; ++a) r.grad.row(r.anchors[a]) = dza.row(a);
  }
  return r;
}

}  // namespace glyphsim::losses

#endif  // GLYPHSIM_LOSSES_SUPCON_HPP_
