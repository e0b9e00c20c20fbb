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


#ifndef GLYPHSIM_TRAINING_STAGE1_HPP_
#define GLYPHSIM_TRAINING_STAGE1_HPP_

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "glyphsim/dataset/sampling.hpp"
#include "glyphsim/encoder/encoder.hpp"
#include "glyphsim/evaluation/retrieval.hpp"
#include "glyphsim/losses/supcon.hpp"
#include "glyphsim/training/batch.hpp"
#include "glyphsim/training/config.hpp"
#include "glyphsim/training/log.hpp"
#include "glyphsim/training/optimizer.hpp"
#include "glyphsim/training/schedule.hpp"

namespace glyphsim::training {

struct Stage1Result {
  encoder::EncoderParams<float> teacher;
  TrainingLog log;
  std::vector<int> validation_class_ids;
  std::optional<double> final_validation_top1;
  std::int64_t steps = 0;
};

using StepCallback = std::function<void(const StepRecord&)>;

/// Holds out `fraction` of the classes (at least one when fraction > 0),
/// chosen by a stream derived from `seed`. Returns the held-out class ids.
inline std::set<int> holdout_classes(const dataset::Dataset& ds, double fraction,
                                     std::uint64_t seed) {
  const dataset::ClassIndex index = dataset::build_class_index(ds);
  std::set<int> out;
  if (fraction <= 0.0) return out;
  const auto n = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(index.size()))));
  Rng rng(derive_seed_str(seed, "holdout"));
  for (auto p : rng.sample_without_replacement(index.size(), n)) out.insert(index.class_ids[p]);
  return out;
}

/// Supervised contrastive training of a fresh encoder. Each epoch visits
/// every training class once: classes are shuffled and consumed in groups
/// of batch_size / 2, each group filling one batch.
inline Stage1Result train_stage1(const Stage1Config& cfg, const dataset::Dataset& ds,
                                 const encoder::EncoderConfig& enc_cfg, int threads = 1,
                                 Diagnostics* diag = nullptr,
                                 const StepCallback& on_step = {}) {
  cfg.validate(diag);
  enc_cfg.validate();
  if (ds.empty()) throw Error("stage 1 dataset is empty");
  const auto t0 = std::chrono::steady_clock::now();

  Stage1Result result;
  const std::set<int> held_out = holdout_classes(ds, cfg.validation_fraction, cfg.seed);
  result.validation_class_ids.assign(held_out.begin(), held_out.end());
  std::set<int> train_ids;
  for (const auto& g : ds.glyphs)
    if (!held_out.contains(g.class_id)) train_ids.insert(g.class_id);
  const dataset::Dataset train = dataset::filter_classes(ds, train_ids);
  const dataset::Dataset val = dataset::filter_classes(ds, held_out);

  const dataset::ClassIndex index = dataset::build_class_index(train);
  std::vector<std::size_t> eligible;
  for (std::size_t c = 0; c < index.size(); ++c)
    if (index.members[c].size() >= 2) eligible.push_back(c);
  if (eligible.size() < 2)
    throw Error("stage 1 needs at least 2 training classes with >= 2 instances");

  std::vector<evaluation::Episode> episodes;
  if (!held_out.empty()) {
    const int way = std::min<int>(cfg.validation_way, static_cast<int>(held_out.size()));
    if (way < 2) {
      warn(diag, "fewer than 2 held-out classes; validation disabled");
    } else {
      if (way < cfg.validation_way)
        warn(diag, "validation uses " + std::to_string(way) + "-way episodes (only " +
                       std::to_string(held_out.size()) + " held-out classes)");
      try {
        episodes = evaluation::sample_episodes(val, way, cfg.validation_episodes,
                                               derive_seed_str(cfg.seed, "validation"));
      } catch (const Error& e) {
        warn(diag, std::string("validation disabled: ") + e.what());
      }
    }
  }

  const std::size_t group = static_cast<std::size_t>(std::max(2, cfg.batch_size / 2));
  const std::int64_t steps_per_epoch =
      static_cast<std::int64_t>((eligible.size() + group - 1) / group);
  const std::int64_t total_steps = steps_per_epoch * cfg.epochs;
  const std::int64_t warmup_steps =
      std::min<std::int64_t>(steps_per_epoch * cfg.warmup_epochs, total_steps - 1);

  encoder::EncoderParams<float> params = encoder::init_encoder<float>(enc_cfg);
  params.role = encoder::Role::kTeacher;
  AdamW<float> opt(params.tensors);
  Rng rng(derive_seed_str(cfg.seed, "batches"));

  std::int64_t step = 0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::vector<std::size_t> order = eligible;
    rng.shuffle(order);
    for (std::int64_t s = 0; s < steps_per_epoch; ++s) {
      const std::size_t lo = static_cast<std::size_t>(s) * group;
      std::vector<std::size_t> classes(order.begin() + lo,
                                       order.begin() + std::min(order.size(), lo + group));
      // A trailing single class has no negatives; borrow one from the front.
      if (classes.size() < 2) classes.push_back(order.front() == classes.front() ? order[1] : order.front());
      const auto batch = dataset::supervised_batch_for_classes(index, classes, cfg.batch_size, rng);

      std::vector<const dataset::Raster*> images;
      images.reserve(batch.glyph_indices.size());
      for (auto i : batch.glyph_indices) images.push_back(&train.glyphs[i].pixels);
      const std::span<const dataset::Raster* const> view(images);

      const double lr = lr_schedule(step, warmup_steps, total_steps, cfg.base_lr);
      const Mat<float> z = encoder::embed_matrix(params, view, threads, diag);
      const auto sup = losses::supcon_loss<float>(z, batch.labels, cfg.temperature);
      if (!std::isfinite(sup.loss))
        throw Error("stage 1 diverged: non-finite loss at step " + std::to_string(step + 1));
      ParamSet<float> grads = backprop_embeddings(params, view, sup.grad, threads);
      const double norm = clip_global_norm<float>({&grads}, cfg.grad_clip);
      opt.step(params.tensors, grads, lr, cfg.weight_decay);
      ++step;

      StepRecord rec;
      rec.step = step;
      rec.epoch = epoch;
      rec.lr = lr;
      rec.loss = sup.loss;
      rec.grad_norm = norm;
      rec.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      result.log.append(rec);
      if (on_step) on_step(rec);
    }
    if (!episodes.empty() && (epoch % cfg.validate_every == 0 || epoch == cfg.epochs)) {
      const double top1 = evaluation::topk_accuracy(
          evaluation::encoder_embedder(params, val, threads, diag), episodes, 1);
      result.log.append(ValidationRecord{epoch, step, "val_top1", top1});
      result.final_validation_top1 = top1;
    }
  }
  result.teacher = std::move(params);
  result.steps = step;
  return result;
}

}  // namespace glyphsim::training

#endif  // GLYPHSIM_TRAINING_STAGE1_HPP_
