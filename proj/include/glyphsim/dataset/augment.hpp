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

#ifndef GLYPHSIM_DATASET_AUGMENT_HPP_
#define GLYPHSIM_DATASET_AUGMENT_HPP_

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "glyphsim/dataset/dataset.hpp"
#include "glyphsim/rng.hpp"

namespace glyphsim::dataset {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Random affine perturbation settings. Each of rotation, shear, zoom and
/// translation is applied independently with its own probability.
struct AugmentationParams {
  Range rotation_degrees{-10.0, 10.0};
  /// Horizontal shear factor: x' = x + shear * y.
  Range shear{-0.3, 0.3};
  Range zoom{0.8, 1.2};
  /// Pixels, drawn independently for x and y.
  Range translation{-2.0, 2.0};
  double rotation_probability = 0.5;
  double shear_probability = 0.5;
  double zoom_probability = 0.5;
  double translation_probability = 0.5;
  int augmentations_per_instance = 8;
  /// Optional photometric step (3x3 cross dilation). Off by default.
  double dilation_probability = 0.0;

  /// Sets all four geometric probabilities at once.
  AugmentationParams& with_probability(double p) {
    rotation_probability = shear_probability = zoom_probability =
        translation_probability = p;
    return *this;
  }

  void validate() const {
    for (double p : {rotation_probability, shear_probability, zoom_probability,
                     translation_probability, dilation_probability})
      if (!(p >= 0.0 && p <= 1.0))
        throw Error("augmentation probability must be in [0, 1]");
    for (const Range& r : {rotation_degrees, shear, zoom, translation})
      if (!(r.lo <= r.hi)) throw Error("augmentation range with lo > hi");
    if (zoom.lo <= 0.0) throw Error("zoom factor must be positive");
    if (augmentations_per_instance < 0)
      throw Error("augmentations_per_instance must be >= 0");
  }
};

/// One concrete draw of the affine parameters.
struct AffineDraw {
  double rotation_degrees = 0.0;
  double shear = 0.0;
  double zoom = 1.0;
  double tx = 0.0;
  double ty = 0.0;
  bool dilate = false;
};

/// Forward map on centre-relative coordinates (x right, y down), composed as
/// rotation, then shear, then zoom, then translation. Positive angles rotate
/// counter-clockwise as displayed.
struct AffineMap {
  std::array<double, 4> m{1, 0, 0, 1};  // row-major 2x2
  double tx = 0.0, ty = 0.0;

  static AffineMap from(const AffineDraw& d) {
    const double a = d.rotation_degrees * std::numbers::pi / 180.0;
    const double c = std::cos(a), s = std::sin(a);
    // R = [[c, s], [-s, c]]; S = [[1, k], [0, 1]]; Z = z * I.
    const double k = d.shear, z = d.zoom;
    AffineMap map;
    map.m = {z * (c - k * s), z * (s + k * c), z * (-s), z * c};
    map.tx = d.tx;
    map.ty = d.ty;
    return map;
  }
};

/// Nearest-neighbour inverse warp with zero background.
inline Raster warp(const Raster& src, const AffineMap& map) {
  const double det = map.m[0] * map.m[3] - map.m[1] * map.m[2];
  if (std::abs(det) < 1e-12) throw Error("singular affine map");
  const double i00 = map.m[3] / det, i01 = -map.m[1] / det;
  const double i10 = -map.m[2] / det, i11 = map.m[0] / det;
  constexpr double c = (kCanvas - 1) / 2.0;
  Raster out;
  for (int y = 0; y < kCanvas; ++y) {
    for (int x = 0; x < kCanvas; ++x) {
      const double u = x - c - map.tx, v = y - c - map.ty;
      const double sx = i00 * u + i01 * v + c;
      const double sy = i10 * u + i11 * v + c;
      const int ix = static_cast<int>(std::floor(sx + 0.5));
      const int iy = static_cast<int>(std::floor(sy + 0.5));
      if (ix >= 0 && ix < kCanvas && iy >= 0 && iy < kCanvas && src.at(iy, ix))
        out.set(y, x, true);
    }
  }
  return out;
}

/// 3x3 cross dilation.
inline Raster dilate(const Raster& src) {
  Raster out;
  for (int y = 0; y < kCanvas; ++y)
    for (int x = 0; x < kCanvas; ++x) {
      bool ink = src.at(y, x);
      if (!ink && y > 0) ink = src.at(y - 1, x);
      if (!ink && y + 1 < kCanvas) ink = src.at(y + 1, x);
      if (!ink && x > 0) ink = src.at(y, x - 1);
      if (!ink && x + 1 < kCanvas) ink = src.at(y, x + 1);
      out.set(y, x, ink);
    }
  return out;
}

inline AffineDraw draw_affine(const AugmentationParams& p, Rng& rng) {
  AffineDraw d;
  if (rng.bernoulli(p.rotation_probability))
    d.rotation_degrees = rng.uniform(p.rotation_degrees.lo, p.rotation_degrees.hi);
  if (rng.bernoulli(p.shear_probability))
    d.shear = rng.uniform(p.shear.lo, p.shear.hi);
  if (rng.bernoulli(p.zoom_probability))
    d.zoom = rng.uniform(p.zoom.lo, p.zoom.hi);
  if (rng.bernoulli(p.translation_probability)) {
    d.tx = rng.uniform(p.translation.lo, p.translation.hi);
    d.ty = rng.uniform(p.translation.lo, p.translation.hi);
  }
  if (p.dilation_probability > 0.0) d.dilate = rng.bernoulli(p.dilation_probability);
  return d;
}

inline constexpr int kAugmentationRetries = 5;

/// Applies one random affine perturbation. Labels are preserved. If a draw
/// leaves no ink, redraws up to five times, then returns the input unchanged
/// and records a warning.
inline GlyphImage apply_affine_augmentation(const GlyphImage& img,
                                            const AugmentationParams& params,
                                            Rng& rng,
                                            Diagnostics* diag = nullptr) {
  params.validate();
  for (int attempt = 0; attempt <= kAugmentationRetries; ++attempt) {
    const AffineDraw draw = draw_affine(params, rng);
    Raster warped = warp(img.pixels, AffineMap::from(draw));
    if (draw.dilate) warped = dilate(warped);
    if (warped.ink_count() > 0) {
      GlyphImage out = img;
      out.pixels = warped;
      return out;
    }
  }
  warn(diag, "augmentation of " + img.script_id + "/" + img.character + "#" +
                 std::to_string(img.instance_id) +
                 " produced no ink after retries; returning input unchanged");
  return img;
}

/// All originals plus `augmentations_per_instance` perturbed copies of each,
/// in the order original, copy 1..k. Each glyph draws from its own stream
/// derived from (seed, class_id, instance_id, copy index), so the result does
/// not depend on `threads`.
inline Dataset generate_augmented_set(const Dataset& ds,
                                      const AugmentationParams& params,
                                      std::uint64_t seed, int threads = 1,
                                      Diagnostics* diag = nullptr) {
  params.validate();
  Dataset out;
  out.split = ds.split;
  if (ds.empty()) return out;

  std::map<int, int> next_instance;
  for (const auto& g : ds.glyphs)
    next_instance[g.class_id] = std::max(next_instance[g.class_id], g.instance_id + 1);

  const int k = params.augmentations_per_instance;
  const std::size_t stride = static_cast<std::size_t>(k) + 1;
  out.glyphs.resize(ds.size() * stride);
  std::vector<int> first_new(ds.size());
  {
    std::map<int, int> cursor = next_instance;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      first_new[i] = cursor[ds.glyphs[i].class_id];
      cursor[ds.glyphs[i].class_id] += k;
    }
  }
  parallel_for(ds.size(), threads, [&](std::size_t i) {
    const GlyphImage& src = ds.glyphs[i];
    GlyphImage& orig = out.glyphs[i * stride];
    orig = src;
    if (orig.source_instance < 0) orig.source_instance = src.instance_id;
    for (int a = 1; a <= k; ++a) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(src.class_id),
                          static_cast<std::uint64_t>(src.instance_id),
                          static_cast<std::uint64_t>(a)));
      GlyphImage aug = apply_affine_augmentation(src, params, rng, diag);
      aug.source_instance = orig.source_instance;
      aug.augmentation_index = a;
      aug.instance_id = first_new[i] + (a - 1);
      out.glyphs[i * stride + a] = std::move(aug);
    }
  });
  refresh_summary(out);
  return out;
}

}  // namespace glyphsim::dataset

#endif  // GLYPHSIM_DATASET_AUGMENT_HPP_
