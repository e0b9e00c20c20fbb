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

#ifndef GLYPHSIM_DATASET_PNG_IO_HPP_
#define GLYPHSIM_DATASET_PNG_IO_HPP_

#include <png.h>

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "glyphsim/dataset/glyph_image.hpp"

namespace glyphsim::dataset {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, 0 = black, 255 = white
};

inline GrayImage read_gray_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str()))
    throw Error("unreadable image " + path.string() + ": " + image.message);
  image.format = PNG_FORMAT_GRAY;
  GrayImage out;
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw Error("unreadable image " + path.string() + ": " + msg);
  }
  return out;
}

inline void write_gray_png(const std::filesystem::path& path,
                           const GrayImage& img) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0,
                               img.pixels.data(), 0, nullptr))
    throw Error("cannot write " + path.string() + ": " + image.message);
}

/// Loads a 105x105 glyph. Dark pixels (normalized gray < 0.5) are ink, as in
/// Omniglot's black-on-white scans.
inline Raster read_glyph_png(const std::filesystem::path& path) {
  const GrayImage g = read_gray_png(path);
  if (g.width != kCanvas || g.height != kCanvas)
    throw Error("unreadable image " + path.string() + ": expected 105x105, got " +
                std::to_string(g.width) + "x" + std::to_string(g.height));
  std::vector<float> coverage(kPixels);
  for (int i = 0; i < kPixels; ++i)
    coverage[i] = 1.0f - static_cast<float>(g.pixels[i]) / 255.0f;
  return Raster::from_ink_coverage(coverage, 0.5f);
}

/// Writes ink as black (0) on white (255), 8-bit grayscale.
inline void write_glyph_png(const std::filesystem::path& path,
                            const Raster& r) {
  GrayImage g{kCanvas, kCanvas, std::vector<std::uint8_t>(kPixels)};
  for (int i = 0; i < kPixels; ++i) g.pixels[i] = r.get(i) ? 0 : 255;
  write_gray_png(path, g);
}

}  // namespace glyphsim::dataset

#endif  // GLYPHSIM_DATASET_PNG_IO_HPP_
