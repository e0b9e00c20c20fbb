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


#ifndef GLYPHSIM_TESTS_SUPPORT_SYNTHETIC_CORPUS_HPP_
#define GLYPHSIM_TESTS_SUPPORT_SYNTHETIC_CORPUS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "glyphsim/dataset/dataset.hpp"
#include "glyphsim/dataset/png_io.hpp"
#include "glyphsim/rng.hpp"

// Procedural stand-in for a handwritten character corpus. Each script owns
// a small vocabulary of stroke primitives (cubic curves); a character is a
// few primitives placed on the canvas; an instance redraws the character
// with jittered control points, so instances of a character resemble each
// other more than they resemble other characters. Scripts in one family
// share a perturbed copy of the same vocabulary.
namespace glyphsim::testing {

struct Point {
  double x, y;
};

using Stroke = std::array<Point, 4>;  // cubic Bezier control points

struct SyntheticSpec {
  int families = 3;
  int scripts_per_family = 2;
  int characters_per_script = 8;
  int instances = 6;
  int primitives_per_script = 5;
  double instance_jitter = 2.5;  // pixels, per control point
  double family_spread = 0.12;   // relative perturbation between siblings
  std::uint64_t seed = 1;
};

struct SyntheticScript {
  std::string name;
  int family = 0;
  std::vector<Stroke> primitives;  // unit-box coordinates
  std::vector<std::vector<Stroke>> characters;  // pixel coordinates
};

inline std::string script_name(int family, int member) {
  return "Script_" + std::string(1, static_cast<char>('A' + family)) + std::to_string(member);
}

inline std::vector<SyntheticScript> make_scripts(const SyntheticSpec& spec) {
  Rng rng(spec.seed);
  std::vector<SyntheticScript> scripts;
  for (int f = 0; f < spec.families; ++f) {
    std::vector<Stroke> base(spec.primitives_per_script);
    for (auto& s : base)
      for (auto& p : s) p = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    for (int m = 0; m < spec.scripts_per_family; ++m) {
      SyntheticScript sc;
      sc.name = script_name(f, m);
      sc.family = f;
      sc.primitives = base;
      for (auto& s : sc.primitives)
        for (auto& p : s) {
          p.x += spec.family_spread * rng.normal();
          p.y += spec.family_spread * rng.normal();
        }
      for (int c = 0; c < spec.characters_per_script; ++c) {
        std::vector<Stroke> ch;
        const int n = 2 + static_cast<int>(rng.below(2));
        for (int k = 0; k < n; ++k) {
          const Stroke& prim = sc.primitives[rng.below(sc.primitives.size())];
          const double scale = rng.uniform(18, 30);
          const double angle = rng.uniform(-std::numbers::pi, std::numbers::pi);
          const double cx = rng.uniform(35, 70), cy = rng.uniform(35, 70);
          const double ca = std::cos(angle), sa = std::sin(angle);
          Stroke placed;
          for (int i = 0; i < 4; ++i) {
            const double x = prim[i].x * scale, y = prim[i].y * scale;
            placed[i] = {cx + ca * x - sa * y, cy + sa * x + ca * y};
          }
          ch.push_back(placed);
        }
        sc.characters.push_back(std::move(ch));
      }
      scripts.push_back(std::move(sc));
    }
  }
  return scripts;
}

inline void stamp(dataset::Raster& r, double x, double y, double radius) {
  const int x0 = static_cast<int>(std::floor(x - radius)), x1 = static_cast<int>(std::ceil(x + radius));
  const int y0 = static_cast<int>(std::floor(y - radius)), y1 = static_cast<int>(std::ceil(y + radius));
  for (int yy = std::max(0, y0); yy <= std::min(dataset::kCanvas - 1, y1); ++yy)
    for (int xx = std::max(0, x0); xx <= std::min(dataset::kCanvas - 1, x1); ++xx)
      if ((xx - x) * (xx - x) + (yy - y) * (yy - y) <= radius * radius) r.set(yy, xx, true);
}

/// One handwritten-like instance of a character.
inline dataset::Raster draw_instance(const std::vector<Stroke>& character, double jitter, Rng& rng) {
  dataset::Raster r;
  const double dx = rng.uniform(-3, 3), dy = rng.uniform(-3, 3);
  const double radius = rng.uniform(1.6, 2.6);
  for (const auto& s : character) {
    Stroke j = s;
    for (auto& p : j) {
      p.x += dx + jitter * rng.normal();
      p.y += dy + jitter * rng.normal();
    }
    for (int t = 0; t <= 80; ++t) {
      const double u = t / 80.0, v = 1 - u;
      const double x = v * v * v * j[0].x + 3 * v * v * u * j[1].x + 3 * v * u * u * j[2].x + u * u * u * j[3].x;
      const double y = v * v * v * j[0].y + 3 * v * v * u * j[1].y + 3 * v * u * u * j[2].y + u * u * u * j[3].y;
      stamp(r, x, y, radius);
    }
  }
  if (r.ink_count() == 0) stamp(r, 52, 52, 3);
  return r;
}

/// In-memory dataset. Class ids follow (script, character) order.
inline dataset::Dataset make_dataset(const SyntheticSpec& spec,
                                     dataset::Split split = dataset::Split::kEvaluation) {
  const auto scripts = make_scripts(spec);
  Rng rng(derive_seed(spec.seed, 7));
  dataset::Dataset ds;
  ds.split = split;
  int cls = 0;
  for (const auto& sc : scripts) {
    for (std::size_t c = 0; c < sc.characters.size(); ++c, ++cls) {
      for (int i = 0; i < spec.instances; ++i) {
        dataset::GlyphImage g;
        g.pixels = draw_instance(sc.characters[c], spec.instance_jitter, rng);
        g.class_id = cls;
        g.script_id = sc.name;
        char buf[32];
        std::snprintf(buf, sizeof buf, "character%02zu", c + 1);
        g.character = buf;
        g.instance_id = i;
        g.source_instance = i;
        ds.glyphs.push_back(std::move(g));
      }
    }
  }
  dataset::refresh_summary(ds);
  return ds;
}

/// Writes <root>/<script>/<characterNN>/<id>_<NN>.png like the public
/// corpus and returns the script names.
inline std::vector<std::string> write_omniglot_tree(const std::filesystem::path& root,
                                                    const SyntheticSpec& spec) {
  const dataset::Dataset ds = make_dataset(spec);
  for (const auto& g : ds.glyphs) {
    char name[32];
    std::snprintf(name, sizeof name, "%04d_%02d.png", g.class_id + 1, g.instance_id + 1);
    const auto dir = root / g.script_id / g.character;
    std::filesystem::create_directories(dir);
    dataset::write_glyph_png(dir / name, g.pixels);
  }
  return ds.script_ids;
}

}  // namespace glyphsim::testing

#endif  // GLYPHSIM_TESTS_SUPPORT_SYNTHETIC_CORPUS_HPP_
