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

#ifndef GLYPHSIM_ENCODER_ENCODER_HPP_
#define GLYPHSIM_ENCODER_ENCODER_HPP_

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "glyphsim/dataset/glyph_image.hpp"
#include "glyphsim/encoder/layers.hpp"
#include "glyphsim/encoder/tensor.hpp"
#include "glyphsim/rng.hpp"

namespace glyphsim::encoder {

using dataset::GlyphImage;
using dataset::kCanvas;
using dataset::kPixels;
using dataset::Raster;

struct ConvLayerSpec {
  int in_channels;
  int out_channels;
  int stride;
};

/// A plain conv stack: every conv is 3x3 / pad 1 followed by GroupNorm and
/// ReLU; then global average pooling and a linear head to the embedding.
struct ArchitectureSpec {
  std::string name;
  std::vector<ConvLayerSpec> convs;
  int norm_groups = 8;

  int feature_channels() const { return convs.back().out_channels; }
};

inline constexpr const char* kNormalization = "group_norm";
inline constexpr const char* kActivation = "relu";

/// Known architectures.
///  simple_cnn  - four blocks of two convs (64, 128, 256, 256 channels),
///                first conv of blocks 2-4 has stride 2. ~2.36M parameters
///                at d = 128.
///  compact_cnn - four single-conv blocks (32, 64, 128, 128), stride 2
///                everywhere. ~0.3M parameters; for CPU-scale experiments.
inline ArchitectureSpec architecture(const std::string& name) {
  if (name == "simple_cnn") {
    return {name,
            {{1, 64, 1},
             {64, 64, 1},
             {64, 128, 2},
             {128, 128, 1},
             {128, 256, 2},
             {256, 256, 1},
             {256, 256, 2},
             {256, 256, 1}},
            8};
  }
  if (name == "compact_cnn") {
    return {name, {{1, 32, 2}, {32, 64, 2}, {64, 128, 2}, {128, 128, 2}}, 8};
  }
  throw Error("unknown architecture: " + name);
}

struct EncoderConfig {
  std::string architecture = "simple_cnn";
  int embedding_dim = 128;
  std::uint64_t seed = 0;

  void validate() const {
    if (embedding_dim <= 0) throw Error("embedding_dim must be positive");
    (void)encoder::architecture(architecture);
  }
};

enum class Role { kTeacher, kStudent, kTarget };

inline std::string to_string(Role r) {
  switch (r) {
    case Role::kTeacher:
      return "teacher";
    case Role::kStudent:
      return "student";
    case Role::kTarget:
      return "target";
  }
  return "?";
}

inline Role parse_role(const std::string& s) {
  if (s == "teacher") return Role::kTeacher;
  if (s == "student") return Role::kStudent;
  if (s == "target") return Role::kTarget;
  throw Error("unknown role: " + s);
}

template <typename T>
struct EncoderParams {
  EncoderConfig config;
  Role role = Role::kTeacher;
  ParamSet<T> tensors;

  template <typename U>
  EncoderParams<U> cast() const {
    return {config, role, tensors.template cast<U>()};
  }
};

inline std::string conv_weight(std::size_t i) { return "conv" + std::to_string(i) + ".weight"; }
inline std::string norm_weight(std::size_t i) { return "norm" + std::to_string(i) + ".weight"; }
inline std::string norm_bias(std::size_t i) { return "norm" + std::to_string(i) + ".bias"; }

/// Builds the tensor layout of `cfg` with all values zero.
template <typename T>
ParamSet<T> encoder_layout(const EncoderConfig& cfg) {
  const ArchitectureSpec arch = architecture(cfg.architecture);
  ParamSet<T> p;
  for (std::size_t i = 0; i < arch.convs.size(); ++i) {
    const auto& c = arch.convs[i];
    p.add(conv_weight(i), {c.out_channels, c.in_channels, 3, 3});
    p.add(norm_weight(i), {c.out_channels});
    p.add(norm_bias(i), {c.out_channels});
  }
  p.add("head.weight", {cfg.embedding_dim, arch.feature_channels()});
  p.add("head.bias", {cfg.embedding_dim});
  return p;
}

/// Deterministic He-normal initialization; each tensor draws from a stream
/// keyed by (seed, tensor name).
template <typename T = float>
EncoderParams<T> init_encoder(const EncoderConfig& cfg) {
  cfg.validate();
  EncoderParams<T> params{cfg, Role::kTeacher, encoder_layout<T>(cfg)};
  for (auto& t : params.tensors) {
    Rng rng(derive_seed_str(cfg.seed, t.name));
    if (t.name.ends_with(".bias")) {
      t.values.setZero();
    } else if (t.name.starts_with("norm")) {
      t.values.setOnes();
    } else {
      const int fan_in = static_cast<int>(t.numel() / t.shape[0]);
      const double stddev = t.name.starts_with("conv") ? std::sqrt(2.0 / fan_in)
                                                       : 1.0 / std::sqrt(fan_in);
      for (auto& v : t.values) v = static_cast<T>(stddev * rng.normal());
    }
  }
  return params;
}

/// Activations retained by a forward pass for the backward pass.
template <typename T>
struct ForwardCache {
  std::vector<Mat<T>> activations;  // [0] input, [i + 1] output of conv i
  std::vector<Mat<T>> xhat;
  std::vector<Vec<T>> inv_std;
  Vec<T> pooled;
  Vec<T> features;  // pre-normalization head output
  T feature_norm = 0;
  bool degenerate = false;
};

template <typename T>
Mat<T> raster_to_input(const Raster& r) {
  Mat<T> x(1, kPixels);
  for (int i = 0; i < kPixels; ++i) x(0, i) = r.get(i) ? T(1) : T(0);
  return x;
}

/// Forward and backward passes of one architecture over a ParamSet.
template <typename T>
class Network {
 public:
  explicit Network(const EncoderConfig& cfg)
      : arch_(architecture(cfg.architecture)), dim_(cfg.embedding_dim) {}

  const ArchitectureSpec& arch() const { return arch_; }
  int embedding_dim() const { return dim_; }

  /// Returns the unit-norm embedding. A zero feature vector maps to the
  /// first basis vector and sets `cache->degenerate` (or *degenerate).
  Vec<T> forward(const ParamSet<T>& p, const Raster& image,
                 ForwardCache<T>* cache = nullptr,
                 bool* degenerate = nullptr) const {
    Mat<T> x = raster_to_input<T>(image);
    int h = kCanvas, w = kCanvas;
    Mat<T> col;
    if (cache) {
      cache->activations.assign(1, x);
      cache->xhat.clear();
      cache->inv_std.clear();
    }
    for (std::size_t i = 0; i < arch_.convs.size(); ++i) {
      const auto& spec = arch_.convs[i];
      const layers::ConvGeometry g{spec.in_channels, spec.out_channels, h, w,
                                   spec.stride};
      Mat<T> y = layers::conv_forward(x, p.get(conv_weight(i)).values, g, col);
      Vec<T> inv = layers::group_norm_normalize(y, arch_.norm_groups);
      if (cache) {
        cache->xhat.push_back(y);
        cache->inv_std.push_back(std::move(inv));
      }
      const Vec<T>& gamma = p.get(norm_weight(i)).values;
      const Vec<T>& beta = p.get(norm_bias(i)).values;
      y = ((y.array().colwise() * gamma.array()).colwise() + beta.array())
              .cwiseMax(T(0))
              .matrix();
      h = g.out_height();
      w = g.out_width();
      x = std::move(y);
      if (cache) cache->activations.push_back(x);
    }
    Vec<T> pooled = x.rowwise().mean();
    const auto& hw = p.get("head.weight");
    layers::ConstMatMap<T> head(hw.values.data(), dim_, arch_.feature_channels());
    Vec<T> features = head * pooled + p.get("head.bias").values;
    const T norm = features.norm();
    const bool zero = !(norm > T(1e-12));
    Vec<T> z;
    if (zero) {
      z = Vec<T>::Zero(dim_);
      z[0] = T(1);
    } else {
      z = features / norm;
    }
    if (degenerate) *degenerate = zero;
    if (cache) {
      cache->pooled = std::move(pooled);
      cache->features = std::move(features);
      cache->feature_norm = norm;
      cache->degenerate = zero;
    }
    return z;
  }

  /// Accumulates dL/dparams into `grads` given dL/dz for the sample cached
  /// by the matching forward call.
  void backward(const ParamSet<T>& p, const ForwardCache<T>& cache,
                const Vec<T>& dz, ParamSet<T>& grads) const {
    if (cache.degenerate) return;
    const Vec<T> z = cache.features / cache.feature_norm;
    const Vec<T> dfeat = (dz - z * z.dot(dz)) / cache.feature_norm;
    const int feat_c = arch_.feature_channels();
    {
      layers::MatMap<T> dhead(grads.get("head.weight").values.data(), dim_, feat_c);
      dhead.noalias() += dfeat * cache.pooled.transpose();
      grads.get("head.bias").values += dfeat;
    }
    const auto& hw = p.get("head.weight");
    layers::ConstMatMap<T> head(hw.values.data(), dim_, feat_c);
    const Vec<T> dpooled = head.transpose() * dfeat;

    const Mat<T>& last = cache.activations.back();
    Mat<T> dx = dpooled.replicate(1, last.cols()) / static_cast<T>(last.cols());

    std::vector<std::pair<int, int>> dims;  // input (h, w) per conv
    {
      int h = kCanvas, w = kCanvas;
      for (const auto& spec : arch_.convs) {
        dims.emplace_back(h, w);
        h = (h - 1) / spec.stride + 1;
        w = (w - 1) / spec.stride + 1;
      }
    }
    Mat<T> col;
    for (int i = static_cast<int>(arch_.convs.size()) - 1; i >= 0; --i) {
      const auto& spec = arch_.convs[i];
      const Mat<T>& out = cache.activations[i + 1];
      const Mat<T>& xhat = cache.xhat[i];
      Mat<T> dpre = (out.array() > T(0)).select(dx.array(), T(0)).matrix();
      grads.get(norm_weight(i)).values +=
          (dpre.array() * xhat.array()).rowwise().sum().matrix();
      grads.get(norm_bias(i)).values += dpre.rowwise().sum();
      const Vec<T>& gamma = p.get(norm_weight(i)).values;
      dpre = (dpre.array().colwise() * gamma.array()).matrix();
      layers::group_norm_backward(dpre, xhat, cache.inv_std[i], arch_.norm_groups);
      const layers::ConvGeometry g{spec.in_channels, spec.out_channels,
                                   dims[i].first, dims[i].second, spec.stride};
      Mat<T> din;
      layers::conv_backward(cache.activations[i], dpre, p.get(conv_weight(i)).values,
                            g, grads.get(conv_weight(i)).values,
                            i > 0 ? &din : nullptr, col);
      dx = std::move(din);
    }
  }

 private:
  ArchitectureSpec arch_;
  int dim_;
};

/// Unit-norm embeddings of `images`, one row each. Pure: identical images
/// give identical rows, and the result does not depend on `threads`.
template <typename T>
Mat<T> embed_matrix(const EncoderParams<T>& params,
                    std::span<const Raster* const> images, int threads = 1,
                    Diagnostics* diag = nullptr) {
  const Network<T> net(params.config);
  Mat<T> out(static_cast<Eigen::Index>(images.size()), net.embedding_dim());
  std::vector<char> degenerate(images.size(), 0);
  parallel_for(images.size(), threads, [&](std::size_t i) {
    bool deg = false;
    out.row(static_cast<Eigen::Index>(i)) =
        net.forward(params.tensors, *images[i], nullptr, &deg).transpose();
    degenerate[i] = deg;
  });
  for (std::size_t i = 0; i < images.size(); ++i)
    if (degenerate[i])
      warn(diag, "zero feature vector for input " + std::to_string(i) +
                     "; substituted first basis vector");
  return out;
}

template <typename T>
Mat<T> embed_matrix(const EncoderParams<T>& params,
                    std::span<const GlyphImage> images, int threads = 1,
                    Diagnostics* diag = nullptr) {
  std::vector<const Raster*> ptrs;
  ptrs.reserve(images.size());
  for (const auto& g : images) ptrs.push_back(&g.pixels);
  return embed_matrix(params, std::span<const Raster* const>(ptrs), threads, diag);
}

/// One Embedding per image.
template <typename T>
std::vector<Vec<T>> embed(const EncoderParams<T>& params,
                          std::span<const GlyphImage> images, int threads = 1,
                          Diagnostics* diag = nullptr) {
  const Mat<T> m = embed_matrix(params, images, threads, diag);
  std::vector<Vec<T>> out(images.size());
  for (std::size_t i = 0; i < images.size(); ++i)
    out[i] = m.row(static_cast<Eigen::Index>(i)).transpose();
  return out;
}

}  // namespace glyphsim::encoder

#endif  // GLYPHSIM_ENCODER_ENCODER_HPP_
