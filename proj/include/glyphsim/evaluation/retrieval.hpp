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


#ifndef GLYPHSIM_EVALUATION_RETRIEVAL_HPP_
#define GLYPHSIM_EVALUATION_RETRIEVAL_HPP_

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "glyphsim/dataset/dataset.hpp"
#include "glyphsim/encoder/encoder.hpp"
#include "glyphsim/evaluation/episodes.hpp"

namespace glyphsim::evaluation {

/// Maps dataset glyph indices to embedding rows (one row per index, in the
/// order requested).
using Embedder = std::function<Mat<float>(std::span<const std::size_t>)>;

inline Embedder encoder_embedder(const encoder::EncoderParams<float>& params,
                                 const dataset::Dataset& ds, int threads = 1,
                                 Diagnostics* diag = nullptr) {
  return [&params, &ds, threads, diag](std::span<const std::size_t> idx) {
    std::vector<const dataset::Raster*> ptrs;
    ptrs.reserve(idx.size());
    for (auto i : idx) ptrs.push_back(&ds.glyphs.at(i).pixels);
    return encoder::embed_matrix(params, std::span<const dataset::Raster* const>(ptrs),
                                 threads, diag);
  };
}

/// Rows of a precomputed matrix whose row i belongs to glyph i.
inline Embedder table_embedder(const Mat<float>& table) {
  return [&table](std::span<const std::size_t> idx) {
    Mat<float> out(static_cast<Eigen::Index>(idx.size()), table.cols());
    for (std::size_t r = 0; r < idx.size(); ++r)
      out.row(static_cast<Eigen::Index>(r)) = table.row(static_cast<Eigen::Index>(idx[r]));
    return out;
  };
}

/// 1-based rank of the positive among the candidates, ordered by cosine
/// similarity to the query descending, ties by candidate index ascending.
inline int positive_rank(const Vec<float>& query, const Mat<float>& candidates,
                         int positive_index) {
  const Vec<float> sims = candidates * query;
  const float sp = sims[positive_index];
  int rank = 1;
  for (Eigen::Index c = 0; c < sims.size(); ++c) {
    if (c == positive_index) continue;
    if (sims[c] > sp || (sims[c] == sp && c < positive_index)) ++rank;
  }
  return rank;
}

/// Embeds every distinct glyph referenced by `episodes` once, then returns
/// the positive's rank in each episode.
inline std::vector<int> positive_ranks(const Embedder& embed,
                                       std::span<const Episode> episodes) {
  std::vector<std::size_t> needed;
  for (const auto& e : episodes) {
    needed.push_back(e.query);
    needed.insert(needed.end(), e.candidates.begin(), e.candidates.end());
  }
  std::sort(needed.begin(), needed.end());
  needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
  const Mat<float> emb = embed(needed);
  std::unordered_map<std::size_t, Eigen::Index> row;
  for (std::size_t r = 0; r < needed.size(); ++r)
    row[needed[r]] = static_cast<Eigen::Index>(r);

  std::vector<int> ranks;
  ranks.reserve(episodes.size());
  for (const auto& e : episodes) {
    Mat<float> cand(static_cast<Eigen::Index>(e.candidates.size()), emb.cols());
    for (std::size_t c = 0; c < e.candidates.size(); ++c)
      cand.row(static_cast<Eigen::Index>(c)) = emb.row(row.at(e.candidates[c]));
    ranks.push_back(positive_rank(emb.row(row.at(e.query)).transpose(), cand,
                                  e.positive_index));
  }
  return ranks;
}

/// Fraction of episodes whose positive rank is <= k.
inline double topk_accuracy(std::span<const int> ranks, int k) {
  if (ranks.empty()) throw Error("no episodes to score");
  if (k < 1) throw Error("k must be >= 1");
  const auto hits = std::count_if(ranks.begin(), ranks.end(), [k](int r) { return r <= k; });
  return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

inline double topk_accuracy(const Embedder& embed, std::span<const Episode> episodes,
                            int k) {
  for (const auto& e : episodes)
    if (k > static_cast<int>(e.candidates.size()))
      throw Error("k exceeds the number of candidates");
  const auto ranks = positive_ranks(embed, episodes);
  return topk_accuracy(ranks, k);
}

/// episode,query,positive_index,positive_rank
inline void write_episode_csv(const std::filesystem::path& path,
                              std::span<const Episode> episodes,
                              std::span<const int> ranks) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "episode,query,positive_index,positive_rank\n";
  for (std::size_t i = 0; i < episodes.size(); ++i)
    out << i << ',' << episodes[i].query << ',' << episodes[i].positive_index << ','
        << ranks[i] << '\n';
}

}  // namespace glyphsim::evaluation

#endif  // GLYPHSIM_EVALUATION_RETRIEVAL_HPP_
