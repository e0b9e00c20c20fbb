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


#ifndef GLYPHSIM_EVALUATION_SPEARMAN_HPP_
#define GLYPHSIM_EVALUATION_SPEARMAN_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glyphsim/dataset/similarity_levels.hpp"

namespace glyphsim::evaluation {

/// 1-based ranks; tied values share the mean of the ranks they span.
inline std::vector<double> fractional_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double mean_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

struct SpearmanResult {
  double rho = 0.0;
  std::optional<double> p_value;
  std::size_t n = 0;
};

/// Pearson correlation of the fractional rank vectors. Positive rho means
/// larger distances go with larger levels. The optional p-value is the
/// two-sided large-sample normal approximation z = rho * sqrt(n - 1).
inline SpearmanResult spearman_rho(std::span<const double> distances,
                                   std::span<const double> levels, bool with_p_value = false) {
  if (distances.size() != levels.size()) throw Error("spearman inputs differ in length");
  if (distances.size() < 3) throw Error("spearman needs at least 3 pairs");
  const auto rx = fractional_ranks(distances);
  const auto ry = fractional_ranks(levels);
  const auto n = static_cast<double>(rx.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw Error("zero rank variance");
  SpearmanResult r;
  r.n = rx.size();
  r.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (with_p_value) r.p_value = std::erfc(std::abs(r.rho) * std::sqrt(n - 1.0) / std::sqrt(2.0));
  return r;
}

/// Distances and levels of all unordered script pairs i < j.
struct PairTable {
  std::vector<double> distances;
  std::vector<double> levels;
};

inline PairTable script_pairs(std::span<const std::string> ids, const Eigen::MatrixXd& dist,
                              const dataset::SimilarityLevelTable& gt) {
  PairTable t;
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      t.distances.push_back(dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      t.levels.push_back(gt.level(ids[i], ids[j]));
    }
  return t;
}

}  // namespace glyphsim::evaluation

#endif  // GLYPHSIM_EVALUATION_SPEARMAN_HPP_
