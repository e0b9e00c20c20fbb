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

#ifndef GLYPHSIM_DATASET_GLYPH_IMAGE_HPP_
#define GLYPHSIM_DATASET_GLYPH_IMAGE_HPP_

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "glyphsim/core.hpp"

namespace glyphsim::dataset {

inline constexpr int kCanvas = 105;
inline constexpr int kPixels = kCanvas * kCanvas;

/// Bit-packed 105x105 binary raster. ink = 1, background = 0.
class Raster {
 public:
  static constexpr int kWords = (kPixels + 63) / 64;

  Raster() { words_.fill(0); }

  bool at(int row, int col) const { return get(row * kCanvas + col); }
  void set(int row, int col, bool ink) { set(row * kCanvas + col, ink); }

  bool get(int index) const {
    return (words_[index >> 6] >> (index & 63)) & 1u;
  }
  void set(int index, bool ink) {
    const std::uint64_t mask = std::uint64_t{1} << (index & 63);
    if (ink)
      words_[index >> 6] |= mask;
    else
      words_[index >> 6] &= ~mask;
  }

  int ink_count() const {
    int n = 0;
    for (auto w : words_) n += std::popcount(w);
    return n;
  }

  bool operator==(const Raster&) const = default;

  /// Row-major 0/1 bytes.
  std::vector<std::uint8_t> to_bytes() const {
    std::vector<std::uint8_t> out(kPixels);
    for (int i = 0; i < kPixels; ++i) out[i] = get(i) ? 1 : 0;
    return out;
  }

  /// Binarizes normalized grayscale coverage: ink where value >= threshold.
  static Raster from_ink_coverage(std::span<const float> coverage,
                                  float threshold = 0.5f) {
    if (coverage.size() != static_cast<std::size_t>(kPixels))
      throw Error("raster must be 105x105");
    Raster r;
    for (int i = 0; i < kPixels; ++i) r.set(i, coverage[i] >= threshold);
    return r;
  }

  std::span<const std::uint64_t, kWords> words() const { return words_; }

 private:
  std::array<std::uint64_t, kWords> words_;
};

/// Inclusive ink bounding box; empty when the raster has no ink.
struct BoundingBox {
  int top = 0, left = 0, bottom = -1, right = -1;
  bool empty() const { return bottom < top || right < left; }
  int height() const { return empty() ? 0 : bottom - top + 1; }
  int width() const { return empty() ? 0 : right - left + 1; }
  double center_row() const { return 0.5 * (top + bottom); }
  double center_col() const { return 0.5 * (left + right); }
};

inline BoundingBox ink_bounds(const Raster& r) {
  BoundingBox box{kCanvas, kCanvas, -1, -1};
  for (int y = 0; y < kCanvas; ++y)
    for (int x = 0; x < kCanvas; ++x)
      if (r.at(y, x)) {
        box.top = std::min(box.top, y);
        box.bottom = std::max(box.bottom, y);
        box.left = std::min(box.left, x);
        box.right = std::max(box.right, x);
      }
  if (box.bottom < 0) return BoundingBox{};
  return box;
}

struct GlyphImage {
  Raster pixels;
  int class_id = -1;
  std::string script_id;
  int instance_id = 0;
  /// Character directory name (Omniglot) or "U+XXXX" (rendered Unicode).
  std::string character;
  /// Provenance for augmented copies: source instance and 1-based index.
  /// Originals carry source_instance = instance_id and augmentation_index 0.
  int source_instance = -1;
  int augmentation_index = 0;

  bool is_augmented() const { return augmentation_index > 0; }
};

/// Throws unless the glyph has at least one ink pixel.
inline void validate(const GlyphImage& g) {
  if (g.pixels.ink_count() == 0)
    throw Error("glyph " + g.script_id + "/" + g.character + "#" +
                std::to_string(g.instance_id) + " has no ink pixels");
}

}  // namespace glyphsim::dataset

#endif  // GLYPHSIM_DATASET_GLYPH_IMAGE_HPP_
