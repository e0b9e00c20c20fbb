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

#ifndef GLYPHSIM_DATASET_UNICODE_HPP_
#define GLYPHSIM_DATASET_UNICODE_HPP_

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#ifndef GLYPHSIM_STB_TRUETYPE_INCLUDED
#define GLYPHSIM_STB_TRUETYPE_INCLUDED
#define STBTT_STATIC
#define STB_TRUETYPE_IMPLEMENTATION
#include "stb/stb_truetype.h"
#endif

#include "glyphsim/dataset/dataset.hpp"

namespace glyphsim::dataset {

inline std::string codepoint_label(char32_t cp) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "U+%04X", static_cast<unsigned>(cp));
  return buf;
}

/// A TrueType/OpenType font held in memory.
class Font {
 public:
  explicit Font(const std::filesystem::path& path) : path_(path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("font unreadable: " + path.string());
    bytes_.assign(std::istreambuf_iterator<char>(in), {});
    const int offset = stbtt_GetFontOffsetForIndex(
        reinterpret_cast<const unsigned char*>(bytes_.data()), 0);
    if (bytes_.size() < 12 || offset < 0 ||
        !stbtt_InitFont(&info_,
                        reinterpret_cast<const unsigned char*>(bytes_.data()),
                        offset))
      throw Error("font unreadable: " + path.string());
  }
  Font(const Font&) = delete;
  Font& operator=(const Font&) = delete;

  const stbtt_fontinfo* info() const { return &info_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::vector<char> bytes_;
  stbtt_fontinfo info_{};
};

struct Omission {
  std::string script_id;
  char32_t codepoint = 0;
  std::string reason;
};

/// Either a rendered raster or the reason the codepoint was skipped.
struct RenderResult {
  std::optional<Raster> raster;
  std::string omission_reason;
  double font_pixel_scale = 0.0;
};

inline constexpr double kUnicodeFitFraction = 0.9;

/// Rasterizes `cp` so its ink bounding box spans at most 90% of the canvas on
/// the larger axis, then centres that box and binarizes at 0.5 coverage.
inline RenderResult render_unicode_glyph(char32_t cp, const Font& font,
                                         int canvas = kCanvas) {
  if (canvas != kCanvas) throw Error("canvas must be 105");
  RenderResult result;
  const stbtt_fontinfo* info = font.info();
  const int glyph = stbtt_FindGlyphIndex(info, static_cast<int>(cp));
  if (glyph == 0) {
    result.omission_reason = "missing glyph";
    return result;
  }
  int x0, y0, x1, y1;
  if (stbtt_IsGlyphEmpty(info, glyph) ||
      !stbtt_GetGlyphBox(info, glyph, &x0, &y0, &x1, &y1) || x1 <= x0 ||
      y1 <= y0) {
    result.omission_reason = "blank glyph";
    return result;
  }
  const int limit = static_cast<int>(std::floor(kUnicodeFitFraction * canvas));
  double scale = kUnicodeFitFraction * canvas / std::max(x1 - x0, y1 - y0);

  for (int attempt = 0; attempt < 64; ++attempt, scale *= 0.99) {
    const float s = static_cast<float>(scale);
    int bx0, by0, bx1, by1;
    stbtt_GetGlyphBitmapBox(info, glyph, s, s, &bx0, &by0, &bx1, &by1);
    const int bw = bx1 - bx0, bh = by1 - by0;
    if (bw <= 0 || bh <= 0) {
      result.omission_reason = "blank glyph";
      return result;
    }
    std::vector<unsigned char> bitmap(static_cast<std::size_t>(bw) * bh, 0);
    stbtt_MakeGlyphBitmap(info, bitmap.data(), bw, bh, bw, s, s, glyph);

    int top = bh, bottom = -1, left = bw, right = -1;
    for (int y = 0; y < bh; ++y)
      for (int x = 0; x < bw; ++x)
        if (bitmap[y * bw + x] >= 128) {
          top = std::min(top, y);
          bottom = std::max(bottom, y);
          left = std::min(left, x);
          right = std::max(right, x);
        }
    if (bottom < 0) {
      result.omission_reason = "blank glyph";
      return result;
    }
    const int ih = bottom - top + 1, iw = right - left + 1;
    if (std::max(ih, iw) > limit) continue;

    const int off_y = (canvas - ih) / 2 - top;
    const int off_x = (canvas - iw) / 2 - left;
    Raster r;
    for (int y = top; y <= bottom; ++y)
      for (int x = left; x <= right; ++x)
        if (bitmap[y * bw + x] >= 128) r.set(y + off_y, x + off_x, true);
    result.raster = r;
    result.font_pixel_scale = scale;
    return result;
  }
  throw Error("could not fit " + codepoint_label(cp) + " in the canvas");
}

inline RenderResult render_unicode_glyph(char32_t cp,
                                         const std::filesystem::path& font,
                                         int canvas = kCanvas) {
  return render_unicode_glyph(cp, Font(font), canvas);
}

// ---------------------------------------------------------------------------
// Ranges file: <script>\t<hexStart>-<hexEnd>[,<hexStart>-<hexEnd>...]\t<font>

struct CodepointInterval {
  char32_t first = 0;
  char32_t last = 0;
};

struct ScriptRange {
  std::string script_id;
  std::vector<CodepointInterval> intervals;
  std::string font_file;
};

namespace detail {
inline char32_t parse_hex_codepoint(std::string s) {
  s = trim(s);
  if (s.size() > 2 && (s[0] == 'U' || s[0] == 'u') && s[1] == '+')
    s = s.substr(2);
  if (s.empty()) throw Error("empty codepoint");
  std::size_t used = 0;
  const unsigned long v = std::stoul(s, &used, 16);
  if (used != s.size() || v > 0x10FFFF) throw Error("bad codepoint: " + s);
  return static_cast<char32_t>(v);
}
}  // namespace detail

inline std::vector<ScriptRange> parse_ranges(std::istream& in) {
  std::vector<ScriptRange> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto f = split(t, '\t');
    if (f.size() != 3)
      throw Error("ranges line " + std::to_string(lineno) +
                  ": expected <script>\\t<ranges>\\t<font>");
    ScriptRange sr{trim(f[0]), {}, trim(f[2])};
    try {
      for (const auto& part : split(f[1], ',')) {
        const auto ends = split(part, '-');
        if (ends.size() == 1) {
          const char32_t cp = detail::parse_hex_codepoint(ends[0]);
          sr.intervals.push_back({cp, cp});
        } else if (ends.size() == 2) {
          CodepointInterval iv{detail::parse_hex_codepoint(ends[0]),
                               detail::parse_hex_codepoint(ends[1])};
          if (iv.last < iv.first) throw Error("reversed interval");
          sr.intervals.push_back(iv);
        } else {
          throw Error("bad interval '" + part + "'");
        }
      }
    } catch (const std::exception& e) {
      throw Error("ranges line " + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(std::move(sr));
  }
  return out;
}

inline std::vector<ScriptRange> read_ranges(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("cannot open ranges file " + p.string());
  return parse_ranges(in);
}

struct UnicodeBuild {
  Dataset dataset;
  std::vector<Omission> omissions;
};

/// Renders every codepoint of every script. Each codepoint becomes its own
/// class with a single instance; class_ids follow file order.
inline UnicodeBuild build_unicode_dataset(
    const std::vector<ScriptRange>& ranges,
    const std::filesystem::path& fonts_dir) {
  UnicodeBuild build;
  build.dataset.split = Split::kEvaluation;
  std::map<std::string, std::unique_ptr<Font>> fonts;
  int class_id = 0;
  for (const auto& sr : ranges) {
    auto& font = fonts[sr.font_file];
    if (!font) font = std::make_unique<Font>(fonts_dir / sr.font_file);
    std::size_t rendered = 0;
    for (const auto& iv : sr.intervals) {
      for (char32_t cp = iv.first; cp <= iv.last; ++cp) {
        RenderResult r = render_unicode_glyph(cp, *font);
        if (!r.raster) {
          build.omissions.push_back({sr.script_id, cp, r.omission_reason});
          continue;
        }
        GlyphImage g;
        g.pixels = *r.raster;
        g.class_id = class_id++;
        g.script_id = sr.script_id;
        g.character = codepoint_label(cp);
        g.instance_id = 0;
        g.source_instance = 0;
        build.dataset.glyphs.push_back(std::move(g));
        ++rendered;
      }
    }
    if (rendered == 0)
      throw Error("script has no renderable codepoints: " + sr.script_id);
  }
  refresh_summary(build.dataset);
  return build;
}

inline void write_omissions(const std::filesystem::path& path,
                            const std::vector<Omission>& omissions) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << "script_id\tcodepoint\treason\n";
  for (const auto& o : omissions)
    out << o.script_id << '\t' << codepoint_label(o.codepoint) << '\t'
        << o.reason << '\n';
}

/// File-level entry point: renders, writes the dataset directory and
/// `omissions.tsv` under `out_dir`.
inline UnicodeBuild build_unicode_dataset(
    const std::filesystem::path& ranges_file,
    const std::filesystem::path& fonts_dir,
    const std::filesystem::path& out_dir) {
  UnicodeBuild build = build_unicode_dataset(read_ranges(ranges_file), fonts_dir);
  save_dataset_dir(build.dataset, out_dir);
  write_omissions(out_dir / "omissions.tsv", build.omissions);
  return build;
}

}  // namespace glyphsim::dataset

#endif  // GLYPHSIM_DATASET_UNICODE_HPP_
