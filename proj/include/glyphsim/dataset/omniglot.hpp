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

#ifndef GLYPHSIM_DATASET_OMNIGLOT_HPP_
#define GLYPHSIM_DATASET_OMNIGLOT_HPP_

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "glyphsim/dataset/dataset.hpp"

namespace glyphsim::dataset {

/// Script name -> split, parsed from `<script>\t<split>` lines.
using SplitManifest = std::map<std::string, Split>;

inline SplitManifest parse_split_manifest(std::istream& in) {
  SplitManifest manifest;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split(t, '\t');
    if (fields.size() != 2)
      throw Error("split manifest line " + std::to_string(lineno) +
                  ": expected <script>\\t<split>");
    const auto s = parse_split(trim(fields[1]));
    if (!s)
      throw Error("split manifest line " + std::to_string(lineno) +
                  ": unknown split '" + fields[1] + "'");
    const std::string script = trim(fields[0]);
    auto [it, inserted] = manifest.emplace(script, *s);
    if (!inserted && it->second != *s)
      throw Error("script assigned to two splits: " + script);
  }
  return manifest;
}

inline SplitManifest read_split_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open split manifest " + path.string());
  return parse_split_manifest(in);
}

struct OmniglotCorpus {
  Dataset supervised_invented;
  Dataset unsupervised_historical;
  Dataset evaluation;

  const Dataset& split(Split s) const {
    switch (s) {
      case Split::kSupervisedInvented:
        return supervised_invented;
      case Split::kUnsupervisedHistorical:
        return unsupervised_historical;
      case Split::kEvaluation:
        break;
    }
    return evaluation;
  }
  int total_classes() const {
    return supervised_invented.class_count +
           unsupervised_historical.class_count + evaluation.class_count;
  }
  std::size_t total_glyphs() const {
    return supervised_invented.size() + unsupervised_historical.size() +
           evaluation.size();
  }
  int total_scripts() const {
    return static_cast<int>(supervised_invented.script_ids.size() +
                            unsupervised_historical.script_ids.size() +
                            evaluation.script_ids.size());
  }
};

namespace detail {

inline std::vector<std::string> sorted_subdirs(
    const std::filesystem::path& dir) {
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_directory()) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

inline std::vector<std::string> sorted_pngs(const std::filesystem::path& dir) {
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    auto ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") names.push_back(e.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace detail

/// Loads root/<script>/<character>/<instance>.png. class_ids are assigned in
/// lexicographic (script, character) order over the whole root, so they do
/// not depend on the manifest.
inline OmniglotCorpus load_omniglot(const std::filesystem::path& root,
                                    const SplitManifest& manifest,
                                    int threads = 1) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root))
    throw Error("data root is not a directory: " + root.string());
  const auto scripts = detail::sorted_subdirs(root);
  if (manifest.empty())
    throw Error("script assigned to no split: " +
                (scripts.empty() ? std::string("(manifest is empty)")
                                 : scripts.front()));
  for (const auto& [name, split] : manifest)
    if (!std::binary_search(scripts.begin(), scripts.end(), name))
      throw Error("missing script listed in manifest: " + name);
  for (const auto& s : scripts)
    if (!manifest.contains(s)) throw Error("script assigned to no split: " + s);

  struct Job {
    fs::path path;
    Split split;
    GlyphImage meta;
  };
  std::vector<Job> jobs;
  int class_id = 0;
  for (const auto& script : scripts) {
    const Split split = manifest.at(script);
    for (const auto& character : detail::sorted_subdirs(root / script)) {
      const auto files = detail::sorted_pngs(root / script / character);
      if (files.empty()) continue;
      for (std::size_t k = 0; k < files.size(); ++k) {
        Job job{root / script / character / files[k], split, {}};
        job.meta.class_id = class_id;
        job.meta.script_id = script;
        job.meta.character = character;
        job.meta.instance_id = static_cast<int>(k);
        job.meta.source_instance = static_cast<int>(k);
        jobs.push_back(std::move(job));
      }
      ++class_id;
    }
  }

  std::vector<GlyphImage> loaded(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    GlyphImage g = jobs[i].meta;
    g.pixels = read_glyph_png(jobs[i].path);
    if (g.pixels.ink_count() == 0)
      throw Error("unreadable image " + jobs[i].path.string() +
                  ": no ink pixels");
    loaded[i] = std::move(g);
  });

  OmniglotCorpus corpus;
  corpus.supervised_invented.split = Split::kSupervisedInvented;
  corpus.unsupervised_historical.split = Split::kUnsupervisedHistorical;
  corpus.evaluation.split = Split::kEvaluation;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    Dataset& target = jobs[i].split == Split::kSupervisedInvented
                          ? corpus.supervised_invented
                      : jobs[i].split == Split::kUnsupervisedHistorical
                          ? corpus.unsupervised_historical
                          : corpus.evaluation;
    target.glyphs.push_back(std::move(loaded[i]));
  }
  refresh_summary(corpus.supervised_invented);
  refresh_summary(corpus.unsupervised_historical);
  refresh_summary(corpus.evaluation);
  return corpus;
}

inline OmniglotCorpus load_omniglot(const std::filesystem::path& root,
                                    const std::filesystem::path& manifest_path,
                                    int threads = 1) {
  return load_omniglot(root, read_split_manifest(manifest_path), threads);
}

}  // namespace glyphsim::dataset

#endif  // GLYPHSIM_DATASET_OMNIGLOT_HPP_
