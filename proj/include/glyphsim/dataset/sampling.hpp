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

#ifndef GLYPHSIM_DATASET_SAMPLING_HPP_
#define GLYPHSIM_DATASET_SAMPLING_HPP_

#include <span>
#include <utility>
#include <vector>

#include "glyphsim/dataset/augment.hpp"
#include "glyphsim/dataset/dataset.hpp"
#include "glyphsim/rng.hpp"

namespace glyphsim::dataset {

struct SupervisedBatch {
  std::vector<std::size_t> glyph_indices;  // into the source Dataset
  std::vector<int> labels;                 // class_ids, parallel
};

/// Fills `batch_size` slots from the given classes (positions in `index`),
/// spreading the quota as evenly as possible. Members are drawn without
/// replacement and repeat only when a class has fewer than its quota.
inline SupervisedBatch supervised_batch_for_classes(
    const ClassIndex& index, std::span<const std::size_t> classes,
    int batch_size, Rng& rng) {
  if (classes.empty()) throw Error("no classes for supervised batch");
  const std::size_t n_classes = classes.size();
  const std::size_t base = batch_size / n_classes;
  const std::size_t extra = batch_size % n_classes;
  SupervisedBatch batch;
  batch.glyph_indices.reserve(batch_size);
  batch.labels.reserve(batch_size);
  for (std::size_t j = 0; j < n_classes; ++j) {
    const std::size_t c = classes[j];
    const std::size_t quota = base + (j < extra ? 1 : 0);
    std::vector<std::size_t> members = index.members[c];
    rng.shuffle(members);
    for (std::size_t k = 0; k < quota; ++k) {
      batch.glyph_indices.push_back(members[k % members.size()]);
      batch.labels.push_back(index.class_ids[c]);
    }
  }
  return batch;
}

/// Draws `batch_size` glyphs so that every selected class contributes at
/// least two, which guarantees each anchor has a positive. Classes are
/// chosen uniformly without replacement; a class is asked for
/// `per_class` instances (more when there are too few classes) and repeats
/// members only if it has fewer than its quota.
inline SupervisedBatch sample_supervised_batch(const ClassIndex& index,
                                               int batch_size, Rng& rng,
                                               int per_class = 2) {
  if (batch_size < 4) throw Error("batch_size must be >= 4");
  if (per_class < 2) throw Error("per_class must be >= 2");
  std::vector<std::size_t> eligible;
  for (std::size_t c = 0; c < index.size(); ++c)
    if (index.members[c].size() >= 2) eligible.push_back(c);
  if (eligible.size() < 2)
    throw Error("need at least 2 classes with >= 2 instances, found " +
                std::to_string(eligible.size()));

  const std::size_t n_classes =
      std::min(eligible.size(),
               static_cast<std::size_t>(std::max(2, batch_size / per_class)));
  const auto picks = rng.sample_without_replacement(eligible.size(), n_classes);
  std::vector<std::size_t> classes;
  classes.reserve(n_classes);
  for (auto p : picks) classes.push_back(eligible[p]);
  return supervised_batch_for_classes(index, classes, batch_size, rng);
}

inline SupervisedBatch sample_supervised_batch(const Dataset& ds,
                                               int batch_size, Rng& rng,
                                               int per_class = 2) {
  return sample_supervised_batch(build_class_index(ds), batch_size, rng,
                                 per_class);
}

using ViewPair = std::pair<GlyphImage, GlyphImage>;

/// One pair of distinct genuine instances per listed class (positions in
/// `index`), each view independently augmented. Classes with fewer than two
/// instances are skipped with a warning.
inline std::vector<ViewPair> make_class_pairs(
    const Dataset& ds, const ClassIndex& index,
    std::span<const std::size_t> classes, const AugmentationParams& params,
    Rng& rng, int threads = 1, Diagnostics* diag = nullptr) {
  struct Plan {
    std::size_t a, b;
    std::uint64_t seed_a, seed_b;
  };
  std::vector<Plan> plans;
  for (std::size_t c : classes) {
    const auto& members = index.members[c];
    if (members.size() < 2) {
      warn(diag, "class " + std::to_string(index.class_ids[c]) +
                     " has a single instance; excluded from pair sampling");
      continue;
    }
    const auto two = rng.sample_without_replacement(members.size(), 2);
    Plan p{members[two[0]], members[two[1]], 0, 0};
    p.seed_a = rng.next();
    p.seed_b = rng.next();
    plans.push_back(p);
  }
  std::vector<ViewPair> pairs(plans.size());
  parallel_for(plans.size(), threads, [&](std::size_t i) {
    Rng ra(plans[i].seed_a), rb(plans[i].seed_b);
    pairs[i].first = apply_affine_augmentation(ds.glyphs[plans[i].a], params, ra, diag);
    pairs[i].second = apply_affine_augmentation(ds.glyphs[plans[i].b], params, rb, diag);
  });
  return pairs;
}

/// Samples `class_count` classes uniformly (capped at the number of classes
/// with at least two genuine instances) and returns one augmented pair each.
inline std::vector<ViewPair> sample_class_pairs(
    const Dataset& ds, int class_count, Rng& rng,
    const AugmentationParams& params = {}, Diagnostics* diag = nullptr,
    int threads = 1) {
  if (class_count <= 0) return {};
  const ClassIndex index = build_class_index(ds, /*originals_only=*/true);
  std::vector<std::size_t> eligible;
  for (std::size_t c = 0; c < index.size(); ++c) {
    if (index.members[c].size() >= 2)
      eligible.push_back(c);
    else
      warn(diag, "class " + std::to_string(index.class_ids[c]) +
                     " has a single instance; excluded from pair sampling");
  }
  const auto picks = rng.sample_without_replacement(
      eligible.size(), static_cast<std::size_t>(class_count));
  std::vector<std::size_t> chosen;
  chosen.reserve(picks.size());
  for (auto p : picks) chosen.push_back(eligible[p]);
  return make_class_pairs(ds, index, chosen, params, rng, threads, diag);
}

}  // namespace glyphsim::dataset

#endif  // GLYPHSIM_DATASET_SAMPLING_HPP_
