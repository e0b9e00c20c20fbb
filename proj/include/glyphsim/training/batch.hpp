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


#ifndef GLYPHSIM_TRAINING_BATCH_HPP_
#define GLYPHSIM_TRAINING_BATCH_HPP_

#include <Eigen/Eigenvalues>

#include <functional>
#include <span>
#include <vector>

#include "glyphsim/encoder/encoder.hpp"

namespace glyphsim::training {

/// Splits [0, n) into `threads` contiguous chunks, gives each chunk its own
/// zeroed accumulator (built by `make`) and returns the accumulators in
/// chunk order. The result depends on the thread count only through the
/// order of the final reduction, which callers perform sequentially.
template <typename Acc>
std::vector<Acc> chunked_accumulate(std::size_t n, int threads,
                                    const std::function<Acc()>& make,
                                    const std::function<void(std::size_t, Acc&)>& fn) {
  const std::size_t chunks =
      std::max<std::size_t>(1, std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads))));
  const std::size_t per = (n + chunks - 1) / chunks;
  std::vector<Acc> acc;
  acc.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) acc.push_back(make());
  parallel_for(chunks, static_cast<int>(chunks), [&](std::size_t c) {
    const std::size_t lo = c * per, hi = std::min(n, lo + per);
    for (std::size_t i = lo; i < hi; ++i) fn(i, acc[c]);
  });
  return acc;
}

/// Gradient of sum_i dz_i . z_i(params) over a batch. Each sample's forward
/// pass is recomputed with its activation cache and released after its
/// backward pass, so memory stays at one cache per worker.
inline ParamSet<float> backprop_embeddings(const encoder::EncoderParams<float>& params,
                                           std::span<const dataset::Raster* const> images,
                                           const Mat<float>& dz, int threads) {
  const encoder::Network<float> net(params.config);
  auto parts = chunked_accumulate<ParamSet<float>>(
      images.size(), threads, [&] { return params.tensors.zeros_like(); },
      [&](std::size_t i, ParamSet<float>& g) {
        const Vec<float> d = dz.row(static_cast<Eigen::Index>(i)).transpose();
        if (d.isZero(0.0f)) return;
        encoder::ForwardCache<float> cache;
        net.forward(params.tensors, *images[i], &cache);
        net.backward(params.tensors, cache, d, g);
      });
  ParamSet<float> total = std::move(parts.front());
  for (std::size_t c = 1; c < parts.size(); ++c) total.add_scaled(parts[c], 1.0f);
  return total;
}

/// Mean cosine similarity over all distinct pairs of rows (rows unit-norm).
inline double mean_pairwise_cosine(const Mat<float>& z) {
  const Eigen::Index n = z.rows();
  if (n < 2) throw Error("need at least two embeddings for pairwise cosine");
  const Eigen::MatrixXd zd = z.cast<double>();
  const Eigen::VectorXd s = zd.colwise().sum().transpose();
  const double all = s.squaredNorm();
  const double diag = zd.rowwise().squaredNorm().sum();
  return (all - diag) / static_cast<double>(n * (n - 1));
}

/// Singular values of the embedding covariance, descending.
inline Eigen::VectorXd covariance_spectrum(const Mat<float>& z) {
  if (z.rows() < 2) throw Error("need at least two embeddings for covariance");
  const Eigen::MatrixXd zd = z.cast<double>();
  const Eigen::MatrixXd centered = zd.rowwise() - zd.colwise().mean();
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(z.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = eig.eigenvalues().cwiseMax(0.0).reverse();
  return ev;
}

/// Number of covariance singular values at or above `rel` times the largest.
inline int significant_dimensions(const Mat<float>& z, double rel = 1e-3) {
  const Eigen::VectorXd sv = covariance_spectrum(z);
  if (sv.size() == 0 || !(sv[0] > 0.0)) return 0;
  int count = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] >= rel * sv[0]) ++count;
  return count;
}

}  // namespace glyphsim::training

#endif  // GLYPHSIM_TRAINING_BATCH_HPP_
