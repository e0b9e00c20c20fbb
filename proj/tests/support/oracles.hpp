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


#ifndef GLYPHSIM_TESTS_SUPPORT_ORACLES_HPP_
#define GLYPHSIM_TESTS_SUPPORT_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "glyphsim/encoder/tensor.hpp"
#include "glyphsim/rng.hpp"

// Reference implementations written straight from the formulas, with plain
// loops and no shared code with the library.
namespace glyphsim::testing {

using Rows = std::vector<std::vector<double>>;

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  long double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += static_cast<long double>(a[k]) * b[k];
  return static_cast<double>(s);
}

/// Per-anchor supervised contrastive terms, in anchor order.
///   I = { i | some j != i has y_j = y_i },  A(i) = I \ {i},
///   P(i) = { p in A(i) | y_p = y_i },
///   l_i = -1/|P(i)| sum_p log( exp(z_i.z_p/t) / sum_{a in A(i)} exp(z_i.z_a/t) ).
inline std::vector<double> supcon_oracle_terms(const Rows& z, const std::vector<int>& y, double t) {
  const std::size_t n = z.size();
  std::vector<std::size_t> anchors;
  for (std::size_t i = 0; i < n; ++i) {
    bool has = false;
    for (std::size_t j = 0; j < n; ++j) has = has || (j != i && y[j] == y[i]);
    if (has) anchors.push_back(i);
  }
  std::vector<double> terms;
  for (std::size_t i : anchors) {
    long double denom = 0;
    for (std::size_t a : anchors)
      if (a != i) denom += std::exp(static_cast<long double>(dot(z[i], z[a])) / t);
    long double sum = 0;
    int count = 0;
    for (std::size_t p : anchors) {
      if (p == i || y[p] != y[i]) continue;
      sum += std::log(std::exp(static_cast<long double>(dot(z[i], z[p])) / t) / denom);
      ++count;
    }
    terms.push_back(static_cast<double>(-sum / count));
  }
  return terms;
}

inline double supcon_oracle(const Rows& z, const std::vector<int>& y, double t) {
  const auto terms = supcon_oracle_terms(z, y, t);
  return std::accumulate(terms.begin(), terms.end(), 0.0) / static_cast<double>(terms.size());
}

inline std::vector<double> random_unit(Rng& rng, int d) {
  std::vector<double> v(static_cast<std::size_t>(d));
  double n2 = 0;
  for (auto& x : v) {
    x = rng.normal();
    n2 += x * x;
  }
  for (auto& x : v) x /= std::sqrt(n2);
  return v;
}

inline Mat<double> to_matrix(const Rows& rows) {
  Mat<double> m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  return m;
}

/// D(p, z) = 2 - 2 cos(p, z) from loops.
inline double cosine_distance_oracle(const std::vector<double>& p, const std::vector<double>& z) {
  return 2.0 - 2.0 * dot(p, z) / std::sqrt(dot(p, p) * dot(z, z));
}

/// Directed mean-of-nearest cosine distance (1 - cos) from loops.
inline double directed_distance_oracle(const Rows& a, const Rows& b) {
  double total = 0;
  for (const auto& x : a) {
    double best = 2.0;
    for (const auto& y : b) best = std::min(best, 1.0 - dot(x, y) / std::sqrt(dot(x, x) * dot(y, y)));
    total += best;
  }
  return total / static_cast<double>(a.size());
}

inline double script_distance_oracle(const Rows& a, const Rows& b) {
  return 0.5 * (directed_distance_oracle(a, b) + directed_distance_oracle(b, a));
}

/// Pearson correlation of two equal-length vectors.
inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

/// Average ranks (1-based) by pairwise counting: rank = 1 + #less + #equal-others / 2.
inline std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j == i) continue;
      less += v[j] < v[i];
      equal += v[j] == v[i];
    }
    r[i] = 1.0 + less + equal / 2.0;
  }
  return r;
}

/// NDCG@k of relevances listed in ranked order.
inline double ndcg_oracle(const std::vector<double>& ranked, int k) {
  auto dcg = [k](const std::vector<double>& rel) {
    double s = 0;
    for (int r = 1; r <= k && r <= static_cast<int>(rel.size()); ++r)
      s += rel[r - 1] / std::log2(r + 1.0);
    return s;
  };
  std::vector<double> ideal = ranked;
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = dcg(ideal);
  return idcg > 0 ? dcg(ranked) / idcg : 0.0;
}

}  // namespace glyphsim::testing

#endif  // GLYPHSIM_TESTS_SUPPORT_ORACLES_HPP_
