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


#ifndef GLYPHSIM_TRAINING_STAGE2_HPP_
#define GLYPHSIM_TRAINING_STAGE2_HPP_

#include <chrono>
#include <cmath>
#include <optional>
#include <vector>

#include "glyphsim/dataset/sampling.hpp"
#include "glyphsim/encoder/ema.hpp"
#include "glyphsim/encoder/encoder.hpp"
#include "glyphsim/encoder/predictor.hpp"
#include "glyphsim/losses/byol.hpp"
#include "glyphsim/training/batch.hpp"
#include "glyphsim/training/config.hpp"
#include "glyphsim/training/log.hpp"
#include "glyphsim/training/optimizer.hpp"
#include "glyphsim/training/schedule.hpp"
#include "glyphsim/training/stage1.hpp"

namespace glyphsim::training {

struct Stage2Result {
  encoder::EncoderParams<float> student;
  encoder::EncoderParams<float> target;
  encoder::PredictorParams<float> predictor;
  TrainingLog log;
  std::int64_t steps = 0;
  /// Largest gradient magnitude that reached the target projections. The
  /// target branch is under stop-gradient, so this stays exactly zero.
  double target_gradient_max = 0.0;
  std::vector<std::size_t> probe_indices;
  std::optional<double> initial_probe_cosine;
  std::optional<double> final_probe_cosine;
  double max_probe_cosine = -1.0;
  /// Covariance singular values of the final student / target probe
  /// embeddings that are >= 1e-3 of the largest.
  int student_significant_dims = 0;
  int target_significant_dims = 0;
};

/// Fixed probe glyphs: up to `size` genuine instances chosen by `seed`.
inline std::vector<std::size_t> choose_probe(const dataset::Dataset& ds, int size,
                                             std::uint64_t seed) {
  std::vector<std::size_t> originals;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (!ds.glyphs[i].is_augmented()) originals.push_back(i);
  Rng rng(derive_seed_str(seed, "probe"));
  std::vector<std::size_t> out;
  for (auto p : rng.sample_without_replacement(originals.size(), static_cast<std::size_t>(size)))
    out.push_back(originals[p]);
  std::sort(out.begin(), out.end());
  return out;
}

inline Mat<float> embed_indices(const encoder::EncoderParams<float>& params,
                                const dataset::Dataset& ds,
                                std::span<const std::size_t> indices, int threads,
                                Diagnostics* diag) {
  std::vector<const dataset::Raster*> ptrs;
  ptrs.reserve(indices.size());
  for (auto i : indices) ptrs.push_back(&ds.glyphs[i].pixels);
  return encoder::embed_matrix(params, std::span<const dataset::Raster* const>(ptrs),
                               threads, diag);
}

/// Self-distillation: the student and predictor learn to predict the EMA
/// target's embedding of another view of the same class; the target
/// follows the student by exponential moving average. Each epoch draws one
/// pair of genuine instances per class.
///
/// With InitMode::kTeacher both networks start from `teacher`; with
/// kRandom both start from one fresh initialization.
inline Stage2Result train_stage2(const Stage2Config& cfg, const dataset::Dataset& ds,
                                 const encoder::EncoderConfig& enc_cfg,
                                 const std::optional<encoder::EncoderParams<float>>& teacher,
                                 int threads = 1, Diagnostics* diag = nullptr,
                                 const StepCallback& on_step = {}) {
  cfg.validate(diag);
  enc_cfg.validate();
  if (ds.empty()) throw Error("stage 2 dataset is empty");
  const auto t0 = std::chrono::steady_clock::now();

  Stage2Result r;
  if (cfg.init_mode == InitMode::kTeacher) {
    if (!teacher) throw Error("stage 2 teacher initialization requested without a teacher");
    if (teacher->config.architecture != enc_cfg.architecture ||
        teacher->config.embedding_dim != enc_cfg.embedding_dim)
      throw Error("teacher checkpoint (" + teacher->config.architecture + ", d=" +
                  std::to_string(teacher->config.embedding_dim) +
                  ") does not match encoder config (" + enc_cfg.architecture +
                  ", d=" + std::to_string(enc_cfg.embedding_dim) + ")");
    r.student = *teacher;
  } else {
    encoder::EncoderConfig fresh = enc_cfg;
    fresh.seed = derive_seed_str(cfg.seed, "student-init");
    r.student = encoder::init_encoder<float>(fresh);
    r.student.config.seed = enc_cfg.seed;
  }
  r.student.role = encoder::Role::kStudent;
  r.target = r.student;
  r.target.role = encoder::Role::kTarget;
  r.predictor = encoder::init_predictor<float>(enc_cfg.embedding_dim, cfg.predictor_hidden,
                                               derive_seed_str(cfg.seed, "predictor"));

  const dataset::ClassIndex index = dataset::build_class_index(ds, /*originals_only=*/true);
  std::vector<std::size_t> eligible;
  for (std::size_t c = 0; c < index.size(); ++c) {
    if (index.members[c].size() >= 2)
      eligible.push_back(c);
    else
      warn(diag, "class " + std::to_string(index.class_ids[c]) +
                     " has a single instance; excluded from pair sampling");
  }
  if (eligible.empty() && cfg.epochs > 0)
    throw Error("stage 2 needs at least one class with two instances");

  r.probe_indices = choose_probe(ds, cfg.probe_size, cfg.seed);
  const bool probing = r.probe_indices.size() >= 2;
  auto probe = [&](const encoder::EncoderParams<float>& p) {
    return mean_pairwise_cosine(embed_indices(p, ds, r.probe_indices, threads, diag));
  };
  if (probing) {
    r.initial_probe_cosine = probe(r.student);
    r.max_probe_cosine = *r.initial_probe_cosine;
    r.log.append(ValidationRecord{0, 0, "probe_cosine", *r.initial_probe_cosine});
  }

  const std::size_t bsz = static_cast<std::size_t>(cfg.batch_size);
  const std::int64_t steps_per_epoch =
      static_cast<std::int64_t>((eligible.size() + bsz - 1) / bsz);
  const std::int64_t total_steps = steps_per_epoch * cfg.epochs;
  const std::int64_t warmup_steps =
      std::min<std::int64_t>(steps_per_epoch * cfg.warmup_epochs, std::max<std::int64_t>(0, total_steps - 1));

  AdamW<float> opt_student(r.student.tensors);
  AdamW<float> opt_predictor(r.predictor.tensors);
  const encoder::Network<float> net(enc_cfg);
  Rng rng(derive_seed_str(cfg.seed, "pairs"));

  struct Acc {
    ParamSet<float> enc, pred;
    double loss = 0.0;
    double target_grad = 0.0;
  };

  std::int64_t step = 0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::vector<std::size_t> order = eligible;
    rng.shuffle(order);
    for (std::int64_t s = 0; s < steps_per_epoch; ++s) {
      const std::size_t lo = static_cast<std::size_t>(s) * bsz;
      const std::vector<std::size_t> classes(order.begin() + lo,
                                             order.begin() + std::min(order.size(), lo + bsz));
      const auto pairs =
          dataset::make_class_pairs(ds, index, classes, cfg.augmentation, rng, threads, diag);
      const float inv_b = 1.0f / static_cast<float>(pairs.size());

      auto parts = chunked_accumulate<Acc>(
          pairs.size(), threads,
          [&] { return Acc{r.student.tensors.zeros_like(), r.predictor.tensors.zeros_like()}; },
          [&](std::size_t i, Acc& acc) {
            const auto& [v1, v2] = pairs[i];
            Mat<float> zt1(1, net.embedding_dim()), zt2(1, net.embedding_dim());
            zt1.row(0) = net.forward(r.target.tensors, v1.pixels).transpose();
            zt2.row(0) = net.forward(r.target.tensors, v2.pixels).transpose();
            encoder::ForwardCache<float> c1, c2;
            encoder::PredictorCache<float> q1, q2;
            const Vec<float> zs1 = net.forward(r.student.tensors, v1.pixels, &c1);
            const Vec<float> zs2 = net.forward(r.student.tensors, v2.pixels, &c2);
            Mat<float> p1(1, net.embedding_dim()), p2(1, net.embedding_dim());
            p1.row(0) = encoder::predictor_forward(r.predictor, zs1, &q1).transpose();
            p2.row(0) = encoder::predictor_forward(r.predictor, zs2, &q2).transpose();
            const auto byol = losses::byol_loss<float>(p1, p2, zt1, zt2);
            acc.loss += byol.loss;
            acc.target_grad = std::max<double>(
                acc.target_grad,
                std::max(byol.dz1.cwiseAbs().maxCoeff(), byol.dz2.cwiseAbs().maxCoeff()));
            const Vec<float> dp1 = inv_b * byol.dp1.row(0).transpose();
            const Vec<float> dp2 = inv_b * byol.dp2.row(0).transpose();
            const Vec<float> dz1 = encoder::predictor_backward(r.predictor, q1, dp1, acc.pred);
            const Vec<float> dz2 = encoder::predictor_backward(r.predictor, q2, dp2, acc.pred);
            net.backward(r.student.tensors, c1, dz1, acc.enc);
            net.backward(r.student.tensors, c2, dz2, acc.enc);
          });
      Acc total = std::move(parts.front());
      for (std::size_t c = 1; c < parts.size(); ++c) {
        total.enc.add_scaled(parts[c].enc, 1.0f);
        total.pred.add_scaled(parts[c].pred, 1.0f);
        total.loss += parts[c].loss;
        total.target_grad = std::max(total.target_grad, parts[c].target_grad);
      }
      const double loss = total.loss / static_cast<double>(pairs.size());
      if (!std::isfinite(loss))
        throw Error("stage 2 diverged: non-finite loss at step " + std::to_string(step + 1));
      r.target_gradient_max = std::max(r.target_gradient_max, total.target_grad);

      const double lr = lr_schedule(step, warmup_steps, total_steps, cfg.base_lr);
      const double norm = clip_global_norm<float>({&total.enc, &total.pred}, cfg.grad_clip);
      opt_student.step(r.student.tensors, total.enc, lr, cfg.weight_decay);
      opt_predictor.step(r.predictor.tensors, total.pred, lr * cfg.predictor_lr_multiplier,
                         cfg.weight_decay);
      encoder::ema_update(r.target.tensors, r.student.tensors, cfg.ema_decay);
      ++step;

      StepRecord rec;
      rec.step = step;
      rec.epoch = epoch;
      rec.lr = lr;
      rec.loss = loss;
      rec.kappa = cfg.ema_decay;
      rec.grad_norm = norm;
      const bool end_of_epoch = s + 1 == steps_per_epoch;
      const bool probe_now = cfg.probe_every_steps > 0 ? step % cfg.probe_every_steps == 0
                                                       : end_of_epoch;
      if (probing && probe_now) {
        rec.probe_cosine = probe(r.student);
        r.max_probe_cosine = std::max(r.max_probe_cosine, *rec.probe_cosine);
        if (*rec.probe_cosine >= 0.99)
          warn(diag, "possible collapse: probe mean cosine " +
                         std::to_string(*rec.probe_cosine) + " at step " +
                         std::to_string(step));
      }
      rec.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      r.log.append(rec);
      if (on_step) on_step(rec);
    }
  }
  r.steps = step;
  if (probing) {
    const Mat<float> zs = embed_indices(r.student, ds, r.probe_indices, threads, diag);
    const Mat<float> zt = embed_indices(r.target, ds, r.probe_indices, threads, diag);
    r.final_probe_cosine = mean_pairwise_cosine(zs);
    r.max_probe_cosine = std::max(r.max_probe_cosine, *r.final_probe_cosine);
    r.student_significant_dims = significant_dimensions(zs);
    r.target_significant_dims = significant_dimensions(zt);
  }
  return r;
}

}  // namespace glyphsim::training

#endif  // GLYPHSIM_TRAINING_STAGE2_HPP_
