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


#ifndef GLYPHSIM_SIMILARITY_SIMILARITY_HPP_
#define GLYPHSIM_SIMILARITY_SIMILARITY_HPP_

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "glyphsim/encoder/tensor.hpp"

namespace glyphsim::similarity {

inline constexpr double kUnitTolerance = 1e-4;

/// A script as a set of glyph embeddings, one unit-norm row per glyph.
/// Rows are held in double so distances of hand-built fixtures are exact.
struct ScriptSet {
  std::string script_id;
  Mat<double> embeddings;

  Eigen::Index size() const { return embeddings.rows(); }
};

inline void validate(const ScriptSet& s) {
  if (s.embeddings.rows() == 0) throw Error("script " + s.script_id + " has no glyphs");
  for (Eigen::Index i = 0; i < s.embeddings.rows(); ++i)
    if (std::abs(static_cast<double>(s.embeddings.row(i).norm()) - 1.0) > kUnitTolerance)
      throw Error("script " + s.script_id + " glyph " + std::to_string(i) +
                  " is not unit-norm");
}

namespace detail {

template <typename A, typename B>
bool bitwise_equal(const A& a, const B& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (std::memcmp(&a.coeffRef(i), &b.coeffRef(i), sizeof(a.coeffRef(i))) != 0) return false;
  return true;
}

template <typename D>
void check_unit(const Eigen::MatrixBase<D>& z) {
  if (std::abs(static_cast<double>(z.norm()) - 1.0) > kUnitTolerance)
    throw Error("glyph embedding is not unit-norm");
}

}  // namespace detail

/// Cosine similarity of two unit embeddings.
template <typename D1, typename D2>
double glyph_similarity(const Eigen::MatrixBase<D1>& z1, const Eigen::MatrixBase<D2>& z2) {
  detail::check_unit(z1);
  detail::check_unit(z2);
  if (z1.size() != z2.size()) throw Error("embedding lengths differ");
  return z1.template cast<double>().dot(z2.template cast<double>());
}

/// 1 - cosine, clamped to [0, 2]; exactly 0 for identical vectors.
template <typename D1, typename D2>
double glyph_distance(const Eigen::MatrixBase<D1>& z1, const Eigen::MatrixBase<D2>& z2) {
  const double s = glyph_similarity(z1, z2);
  if (detail::bitwise_equal(z1.derived(), z2.derived())) return 0.0;
  return std::clamp(1.0 - s, 0.0, 2.0);
}

/// For every glyph of `a`, its distance to the nearest glyph of `b`.
inline Eigen::VectorXd nearest_distances(const ScriptSet& a, const ScriptSet& b) {
  validate(a);
  validate(b);
  if (a.embeddings.cols() != b.embeddings.cols())
    throw Error("scripts " + a.script_id + " and " + b.script_id +
                " have different embedding dimensions");
  const Eigen::MatrixXd dist =
      (1.0 - (a.embeddings * b.embeddings.transpose()).array()).matrix();
  Eigen::VectorXd out(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double best = 2.0;
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      double d = dist(i, j);
      if (d < 1e-5 && detail::bitwise_equal(a.embeddings.row(i), b.embeddings.row(j))) d = 0.0;
      best = std::min(best, std::clamp(d, 0.0, 2.0));
    }
    out[i] = best;
  }
  return out;
}

/// Mean over glyphs of `a` of the distance to the closest glyph of `b`.
inline double directed_script_distance(const ScriptSet& a, const ScriptSet& b) {
  return nearest_distances(a, b).mean();
}

/// Symmetrized directed distance.
inline double script_distance(const ScriptSet& a, const ScriptSet& b) {
  return 0.5 * (directed_script_distance(a, b) + directed_script_distance(b, a));
}

/// Square matrix of script distances in input order: zero diagonal, exactly
/// symmetric (each pair is computed once and mirrored).
inline Eigen::MatrixXd script_distance_matrix(std::span<const ScriptSet> scripts,
                                              int threads = 1) {
  if (scripts.size() < 2) throw Error("distance matrix needs at least 2 scripts");
  std::set<std::string> seen;
  for (const auto& s : scripts)
    if (!seen.insert(s.script_id).second) throw Error("duplicate script_id: " + s.script_id);
  const auto n = static_cast<Eigen::Index>(scripts.size());
  std::vector<std::pair<Eigen::Index, Eigen::Index>> cells;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) cells.emplace_back(i, j);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> values(cells.size());
  parallel_for(cells.size(), threads, [&](std::size_t c) {
    values[c] = script_distance(scripts[cells[c].first], scripts[cells[c].second]);
  });
  for (std::size_t c = 0; c < cells.size(); ++c) {
    m(cells[c].first, cells[c].second) = values[c];
    m(cells[c].second, cells[c].first) = values[c];
  }
  return m;
}

/// R = d(a, b) / mean(d(c, a), d(c, b)). Lower means the related pair a, b
/// sits closer together relative to the unrelated script c.
inline double separability_ratio(double d_ab, double d_ca, double d_cb) {
  const double denom = 0.5 * (d_ca + d_cb);
  if (!(denom > 0.0)) throw Error("unrelated script coincides with related pair");
  return d_ab / denom;
}

inline double separability_ratio(const ScriptSet& a, const ScriptSet& b, const ScriptSet& c) {
  if (a.script_id == b.script_id || a.script_id == c.script_id || b.script_id == c.script_id)
    throw Error("separability ratio needs three distinct scripts");
  return separability_ratio(script_distance(a, b), script_distance(c, a), script_distance(c, b));
}

enum class Granularity { kInstances, kCentroids };

inline Granularity parse_granularity(const std::string& s) {
  if (s == "instances") return Granularity::kInstances;
  if (s == "centroids") return Granularity::kCentroids;
  throw Error("unknown granularity: " + s + " (expected instances or centroids)");
}

inline std::string to_string(Granularity g) {
  return g == Granularity::kInstances ? "instances" : "centroids";
}

/// Groups embedding rows into one ScriptSet per script (sorted by id). In
/// centroid mode each character contributes the renormalized mean of its
/// instances.
inline std::vector<ScriptSet> group_scripts(const Mat<float>& embeddings,
                                            std::span<const std::string> script_ids,
                                            std::span<const int> class_ids,
                                            Granularity granularity = Granularity::kInstances) {
  if (static_cast<std::size_t>(embeddings.rows()) != script_ids.size() ||
      script_ids.size() != class_ids.size())
    throw Error("embedding rows and labels differ in length");
  std::map<std::string, std::map<int, std::vector<Eigen::Index>>> rows;
  for (std::size_t i = 0; i < script_ids.size(); ++i)
    rows[script_ids[i]][class_ids[i]].push_back(static_cast<Eigen::Index>(i));
  std::vector<ScriptSet> out;
  for (const auto& [script, classes] : rows) {
    ScriptSet s{script, {}};
    std::vector<Eigen::VectorXd> members;
    for (const auto& [cls, idx] : classes) {
      if (granularity == Granularity::kInstances) {
        for (auto i : idx) members.push_back(embeddings.row(i).transpose().cast<double>());
      } else {
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(embeddings.cols());
        for (auto i : idx) mean += embeddings.row(i).transpose().cast<double>();
        const double norm = mean.norm();
        if (!(norm > 0.0)) throw Error("class centroid is zero in script " + script);
        members.push_back(mean / norm);
      }
    }
    s.embeddings.resize(static_cast<Eigen::Index>(members.size()), embeddings.cols());
    for (std::size_t r = 0; r < members.size(); ++r)
      s.embeddings.row(static_cast<Eigen::Index>(r)) = members[r].transpose();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace glyphsim::similarity

#endif  // GLYPHSIM_SIMILARITY_SIMILARITY_HPP_
