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

#ifndef GLYPHSIM_LOSSES_BYOL_HPP_
#define GLYPHSIM_LOSSES_BYOL_HPP_

#include <cmath>

#include "glyphsim/encoder/tensor.hpp"

namespace glyphsim::losses {

/// D(p, z) = 2 - 2 cos(p, z), in [0, 4].
template <typename Derived1, typename Derived2>
auto cosine_prediction_distance(const Eigen::MatrixBase<Derived1>& p,
                                const Eigen::MatrixBase<Derived2>& z) {
  using T = typename Derived1::Scalar;
  const T np = p.norm(), nz = z.norm();
  if (!(np > T(0)) || !(nz > T(0)))
    throw Error("zero-norm vector in cosine prediction distance");
  return T(2) - T(2) * p.dot(z) / (np * nz);
}

/// dD(p, z)/dp.
template <typename T>
Vec<T> cosine_prediction_distance_grad(const Vec<T>& p, const Vec<T>& z) {
  const T np = p.norm(), nz = z.norm();
  if (!(np > T(0)) || !(nz > T(0)))
    throw Error("zero-norm vector in cosine prediction distance");
  const T c = p.dot(z) / (np * nz);
  return (T(-2) / np) * (z / nz - c * p / np);
}

template <typename T>
struct ByolResult {
  T loss = 0;
  Mat<T> dp1, dp2;
  // Gradients reaching the target projections. The target branch is under
  // stop-gradient, so these are always zero; they are exposed so callers and
  // tests can assert it.
  Mat<T> dz1, dz2;
};

/// Symmetrized loss (1/B) sum_i [D(p1_i, z2_i) + D(p2_i, z1_i)], rows are
/// samples. Range [0, 8].
template <typename T>
ByolResult<T> byol_loss(const Mat<T>& p1, const Mat<T>& p2, const Mat<T>& z1,
                        const Mat<T>& z2) {
  const Eigen::Index b = p1.rows();
  if (b < 1) throw Error("BYOL batch is empty");
  for (const Mat<T>* m : {&p2, &z1, &z2})
    if (m->rows() != b || m->cols() != p1.cols())
      throw Error("BYOL views have mismatched shapes");
  ByolResult<T> r;
  r.dp1.resize(b, p1.cols());
  r.dp2.resize(b, p1.cols());
  r.dz1 = Mat<T>::Zero(b, p1.cols());
  r.dz2 = Mat<T>::Zero(b, p1.cols());
  double total = 0.0;
  const T inv_b = T(1) / static_cast<T>(b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const Vec<T> a1 = p1.row(i).transpose(), a2 = p2.row(i).transpose();
    const Vec<T> t1 = z1.row(i).transpose(), t2 = z2.row(i).transpose();
    total += static_cast<double>(cosine_prediction_distance(a1, t2));
    total += static_cast<double>(cosine_prediction_distance(a2, t1));
    r.dp1.row(i) = inv_b * cosine_prediction_distance_grad(a1, t2).transpose();
    r.dp2.row(i) = inv_b * cosine_prediction_distance_grad(a2, t1).transpose();
  }
  r.loss = static_cast<T>(total / static_cast<double>(b));
  return r;
}

}  // namespace glyphsim::losses

#endif  // GLYPHSIM_LOSSES_BYOL_HPP_
