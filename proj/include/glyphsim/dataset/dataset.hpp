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

#ifndef GLYPHSIM_DATASET_DATASET_HPP_
#define GLYPHSIM_DATASET_DATASET_HPP_

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "glyphsim/dataset/glyph_image.hpp"
#include "glyphsim/dataset/png_io.hpp"

namespace glyphsim::dataset {

enum class Split { kSupervisedInvented, kUnsupervisedHistorical, kEvaluation };

inline std::string to_string(Split s) {
  switch (s) {
    case Split::kSupervisedInvented:
      return "supervised_invented";
    case Split::kUnsupervisedHistorical:
      return "unsupervised_historical";
    case Split::kEvaluation:
      return "evaluation";
  }
  return "?";
}

inline std::optional<Split> parse_split(std::string_view s) {
  if (s == "supervised_invented") return Split::kSupervisedInvented;
  if (s == "unsupervised_historical") return Split::kUnsupervisedHistorical;
  if (s == "evaluation") return Split::kEvaluation;
  return std::nullopt;
}

struct Dataset {
  std::vector<GlyphImage> glyphs;
  Split split = Split::kEvaluation;
  /// Number of distinct class_ids present in `glyphs`.
  int class_count = 0;
  /// Sorted, unique.
  std::vector<std::string> script_ids;

  bool empty() const { return glyphs.empty(); }
  std::size_t size() const { return glyphs.size(); }
};

/// Recomputes class_count and script_ids from the glyph list and checks that
/// every class_id maps to exactly one script_id.
inline void refresh_summary(Dataset& ds) {
  std::map<int, std::string> owner;
  std::set<std::string> scripts;
  for (const auto& g : ds.glyphs) {
    auto [it, inserted] = owner.emplace(g.class_id, g.script_id);
    if (!inserted && it->second != g.script_id)
      throw Error("class " + std::to_string(g.class_id) +
                  " maps to two scripts: " + it->second + ", " + g.script_id);
    scripts.insert(g.script_id);
  }
  ds.class_count = static_cast<int>(owner.size());
  ds.script_ids.assign(scripts.begin(), scripts.end());
}

/// class_id -> glyph indices, in dataset order.
struct ClassIndex {
  std::vector<int> class_ids;                 // ascending
  std::vector<std::vector<std::size_t>> members;  // parallel to class_ids

  std::size_t size() const { return class_ids.size(); }
};

inline ClassIndex build_class_index(const Dataset& ds,
                                    bool originals_only = false) {
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < ds.glyphs.size(); ++i) {
    if (originals_only && ds.glyphs[i].is_augmented()) continue;
    by_class[ds.glyphs[i].class_id].push_back(i);
  }
  ClassIndex idx;
  for (auto& [cls, members] : by_class) {
    idx.class_ids.push_back(cls);
    idx.members.push_back(std::move(members));
  }
  return idx;
}

/// Subset of `ds` restricted to the given class ids.
inline Dataset filter_classes(const Dataset& ds, const std::set<int>& keep) {
  Dataset out;
  out.split = ds.split;
  for (const auto& g : ds.glyphs)
    if (keep.contains(g.class_id)) out.glyphs.push_back(g);
  refresh_summary(out);
  return out;
}

inline Dataset merge(const Dataset& a, const Dataset& b, Split split) {
  Dataset out;
  out.split = split;
  out.glyphs = a.glyphs;
  out.glyphs.insert(out.glyphs.end(), b.glyphs.begin(), b.glyphs.end());
  refresh_summary(out);
  return out;
}

// ---------------------------------------------------------------------------
// Materialized dataset directories:
//   <dir>/index.tsv   one row per glyph (header line first)
//   <dir>/<script>/<character>/<instance>[_a<k>].png

inline constexpr const char* kIndexHeader =
    "path\tclass_id\tscript_id\tcharacter\tinstance_id\tsource_instance\t"
    "augmentation_index";

inline std::string glyph_relative_path(const GlyphImage& g) {
  std::string name = std::to_string(g.source_instance >= 0 ? g.source_instance
                                                           : g.instance_id);
  if (g.is_augmented()) name += "_a" + std::to_string(g.augmentation_index);
  return g.script_id + "/" + g.character + "/" + name + ".png";
}

/// Writes PNGs and index.tsv; identical input gives identical files.
inline void save_dataset_dir(const Dataset& ds,
                             const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ofstream index(dir / "index.tsv", std::ios::binary | std::ios::trunc);
  if (!index) throw Error("cannot write " + (dir / "index.tsv").string());
  index << kIndexHeader << "\t" << to_string(ds.split) << "\n";
  for (const auto& g : ds.glyphs) {
    const std::string rel = glyph_relative_path(g);
    fs::create_directories((dir / rel).parent_path());
    write_glyph_png(dir / rel, g.pixels);
    index << rel << '\t' << g.class_id << '\t' << g.script_id << '\t'
          << g.character << '\t' << g.instance_id << '\t' << g.source_instance
          << '\t' << g.augmentation_index << '\n';
  }
  if (!index) throw Error("write failed for " + (dir / "index.tsv").string());
}

inline Dataset load_dataset_dir(const std::filesystem::path& dir) {
  std::ifstream index(dir / "index.tsv");
  if (!index) throw Error("missing dataset index " + (dir / "index.tsv").string());
  Dataset ds;
  std::string line;
  if (!std::getline(index, line)) throw Error("empty dataset index");
  {
    const auto header = split(trim(line), '\t');
    if (header.size() == 8) {
      if (auto s = parse_split(header[7])) ds.split = *s;
    }
  }
  int lineno = 1;
  while (std::getline(index, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split(line, '\t');
    if (f.size() != 7)
      throw Error("malformed index.tsv line " + std::to_string(lineno));
    GlyphImage g;
    g.pixels = read_glyph_png(dir / f[0]);
    g.class_id = std::stoi(f[1]);
    g.script_id = f[2];
    g.character = f[3];
    g.instance_id = std::stoi(f[4]);
    g.source_instance = std::stoi(f[5]);
    g.augmentation_index = std::stoi(trim(f[6]));
    ds.glyphs.push_back(std::move(g));
  }
  refresh_summary(ds);
  return ds;
}

}  // namespace glyphsim::dataset

#endif  // GLYPHSIM_DATASET_DATASET_HPP_
