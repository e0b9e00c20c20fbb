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


#ifndef GLYPHSIM_EVALUATION_RANKING_HPP_
#define GLYPHSIM_EVALUATION_RANKING_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "glyphsim/dataset/similarity_levels.hpp"

namespace glyphsim::evaluation {

inline constexpr const char* kRelevanceMapping = "rel = 4 - level";

/// Graded relevance of a similarity level: 1 -> 3, 2 -> 2, 3 -> 1, 4 -> 0.
inline int relevance_from_level(int level) {
  if (level < 1 || level > 4) throw Error("unknown similarity level " + std::to_string(level));
  return 4 - level;
}

struct NdcgResult {
  double ndcg = 0.0;
  /// Set when no candidate is relevant (ideal DCG is zero).
  bool flagged = false;
};

inline double dcg_at_k(std::span<const double> rel, int k) {
  double dcg = 0.0;
  for (int r = 0; r < k && r < static_cast<int>(rel.size()); ++r)
    dcg += rel[r] / std::log2(static_cast<double>(r) + 2.0);
  return dcg;
}

/// NDCG@k of relevances listed in ranked order; the ideal ordering is the
/// same multiset sorted descending.
inline NdcgResult ndcg_from_relevances(std::span<const double> ranked, int k) {
  if (k < 1) throw Error("k must be >= 1");
  if (k > static_cast<int>(ranked.size()))
    throw Error("k = " + std::to_string(k) + " exceeds ranking length " +
                std::to_string(ranked.size()));
  std::vector<double> ideal(ranked.begin(), ranked.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = dcg_at_k(ideal, k);
  if (!(idcg > 0.0)) return {0.0, true};
  return {dcg_at_k(ranked, k) / idcg, false};
}

inline NdcgResult ndcg_at_k(std::span<const std::string> ranked_script_ids,
                            const std::string& query,
                            const dataset::SimilarityLevelTable& gt, int k) {
  std::vector<double> rel;
  rel.reserve(ranked_script_ids.size());
  for (const auto& id : ranked_script_ids) {
    if (id == query) throw Error("query script " + query + " appears in its own ranking");
    rel.push_back(relevance_from_level(gt.level(query, id)));
  }
  return ndcg_from_relevances(rel, k);
}

struct ScriptRankingResult {
  std::vector<std::string> queries;
  std::vector<std::vector<std::string>> rankings;
  std::vector<double> ndcg;
  std::vector<bool> flagged;
  double mean = 0.0;
  int effective_k = 0;
};

/// Ranks the other scripts for every query by ascending distance (ties by
/// script id) and averages NDCG@k over queries. With fewer than k + 1
/// scripts, k is reduced to the number of candidates.
inline ScriptRankingResult script_ranking_eval(std::span<const std::string> ids,
                                               const Eigen::MatrixXd& dist,
                                               const dataset::SimilarityLevelTable& gt,
                                               int k = 10) {
  const auto n = static_cast<Eigen::Index>(ids.size());
  if (n < 2) throw Error("script ranking needs at least 2 scripts");
  if (dist.rows() != n || dist.cols() != n)
    throw Error("distance matrix does not match script list");
  ScriptRankingResult out;
  out.effective_k = std::min<int>(k, static_cast<int>(n) - 1);
  double sum = 0.0;
  for (Eigen::Index q = 0; q < n; ++q) {
    std::vector<Eigen::Index> others;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != q) others.push_back(j);
    std::sort(others.begin(), others.end(), [&](Eigen::Index a, Eigen::Index b) {
      if (dist(q, a) != dist(q, b)) return dist(q, a) < dist(q, b);
      return ids[a] < ids[b];
    });
    std::vector<std::string> ranked;
    for (auto j : others) ranked.push_back(ids[j]);
    const NdcgResult r = ndcg_at_k(ranked, ids[q], gt, out.effective_k);
    out.queries.push_back(ids[q]);
    out.rankings.push_back(std::move(ranked));
    out.ndcg.push_back(r.ndcg);
    out.flagged.push_back(r.flagged);
    sum += r.ndcg;
  }
  out.mean = sum / static_cast<double>(n);
  return out;
}

/// query,ndcg,flagged,ranking (ranking space-separated)
inline void write_ndcg_csv(const std::filesystem::path& path, const ScriptRankingResult& r) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "query,ndcg,flagged,ranking\n";
  out.precision(17);
  for (std::size_t i = 0; i < r.queries.size(); ++i) {
    out << r.queries[i] << ',' << r.ndcg[i] << ',' << (r.flagged[i] ? 1 : 0) << ',';
    for (std::size_t j = 0; j < r.rankings[i].size(); ++j)
      out << (j ? " " : "") << r.rankings[i][j];
    out << '\n';
  }
}

}  // namespace glyphsim::evaluation

#endif  // GLYPHSIM_EVALUATION_RANKING_HPP_
