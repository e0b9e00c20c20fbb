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


#ifndef GLYPHSIM_EVALUATION_EPISODES_HPP_
#define GLYPHSIM_EVALUATION_EPISODES_HPP_

#include <cstdint>
#include <vector>

#include "glyphsim/dataset/dataset.hpp"
#include "glyphsim/rng.hpp"

namespace glyphsim::evaluation {

struct EvalConfig {
  int n_way = 20;
  std::vector<int> k_values{1, 5};
  int episodes = 400;
  int ndcg_k = 10;
  std::uint64_t seed = 0;

  void validate() const {
    if (n_way < 2) throw Error("eval.n_way must be >= 2");
    if (episodes < 1) throw Error("eval.episodes must be >= 1");
    if (ndcg_k < 1) throw Error("eval.ndcg_k must be >= 1");
    for (int k : k_values)
      if (k < 1 || k > n_way) throw Error("eval.k_values must lie in [1, n_way]");
  }
};

/// N-way 1-shot retrieval trial. All members are indices into the source
/// dataset's glyph list.
struct Episode {
  std::size_t query = 0;
  std::vector<std::size_t> candidates;
  int positive_index = 0;
};

/// Picks the target class uniformly among classes with at least two genuine
/// instances, then N-1 further classes uniformly from the rest of the split.
/// The query and the positive are two distinct instances of the target; each
/// distractor is one random instance of its class. The positive's slot is
/// uniform in [0, N).
inline Episode sample_episode(const dataset::ClassIndex& index, int n_way, Rng& rng) {
  if (n_way < 2) throw Error("episode needs n_way >= 2");
  if (static_cast<std::size_t>(n_way) > index.size())
    throw Error("insufficient classes for " + std::to_string(n_way) +
                "-way episode: " + std::to_string(index.size()));
  std::vector<std::size_t> eligible;
  for (std::size_t c = 0; c < index.size(); ++c)
    if (index.members[c].size() >= 2) eligible.push_back(c);
  if (eligible.empty()) throw Error("no class has two instances for an episode");

  const std::size_t target = eligible[rng.below(eligible.size())];
  std::vector<std::size_t> others;
  others.reserve(index.size() - 1);
  for (std::size_t c = 0; c < index.size(); ++c)
    if (c != target) others.push_back(c);
  const auto picks = rng.sample_without_replacement(others.size(), n_way - 1);

  Episode e;
  const auto& tm = index.members[target];
  const auto two = rng.sample_without_replacement(tm.size(), 2);
  e.query = tm[two[0]];
  e.positive_index = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_way)));
  std::size_t next_other = 0;
  for (int slot = 0; slot < n_way; ++slot) {
    if (slot == e.positive_index) {
      e.candidates.push_back(tm[two[1]]);
    } else {
      const auto& m = index.members[others[picks[next_other++]]];
      e.candidates.push_back(m[rng.below(m.size())]);
    }
  }
  return e;
}

/// `count` episodes over the genuine (non-augmented) glyphs of `ds`, drawn
/// from one stream seeded by `seed`.
inline std::vector<Episode> sample_episodes(const dataset::Dataset& ds, int n_way,
                                            int count, std::uint64_t seed) {
  const dataset::ClassIndex index = dataset::build_class_index(ds, /*originals_only=*/true);
  Rng rng(seed);
  std::vector<Episode> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(sample_episode(index, n_way, rng));
  return out;
}

}  // namespace glyphsim::evaluation

#endif  // GLYPHSIM_EVALUATION_EPISODES_HPP_
