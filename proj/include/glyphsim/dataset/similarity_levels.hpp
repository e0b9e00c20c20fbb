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

#ifndef GLYPHSIM_DATASET_SIMILARITY_LEVELS_HPP_
#define GLYPHSIM_DATASET_SIMILARITY_LEVELS_HPP_

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <utility>

#include "glyphsim/core.hpp"

namespace glyphsim::dataset {

/// Curated script relationship grades: 1 very similar, 2 similar,
/// 3 very different; any unlisted pair is unrelated (level 4).
class SimilarityLevelTable {
 public:
  static constexpr int kUnrelated = 4;

  void set(const std::string& a, const std::string& b, int level) {
    if (a == b) throw Error("self-pair in similarity table: " + a);
    if (level < 1 || level > 3)
      throw Error("similarity level must be 1, 2 or 3 (got " +
                  std::to_string(level) + ")");
    auto [it, inserted] = entries_.emplace(key(a, b), level);
    if (!inserted && it->second != level)
      throw Error("conflicting levels for " + a + " / " + b);
  }

  int level(const std::string& a, const std::string& b) const {
    if (a == b) throw Error("no level for a script paired with itself: " + a);
    const auto it = entries_.find(key(a, b));
    return it == entries_.end() ? kUnrelated : it->second;
  }

  std::size_t size() const { return entries_.size(); }
  const std::map<std::pair<std::string, std::string>, int>& entries() const {
    return entries_;
  }

 private:
  static std::pair<std::string, std::string> key(const std::string& a,
                                                 const std::string& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }
  std::map<std::pair<std::string, std::string>, int> entries_;
};

inline SimilarityLevelTable parse_similarity_table(std::istream& in) {
  SimilarityLevelTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto f = split(t, '\t');
    if (f.size() != 3)
      throw Error("similarity table line " + std::to_string(lineno) +
                  ": expected <script_a>\\t<script_b>\\t<level>");
    int level = 0;
    try {
      level = std::stoi(trim(f[2]));
    } catch (const std::exception&) {
      throw Error("similarity table line " + std::to_string(lineno) +
                  ": bad level '" + f[2] + "'");
    }
    table.set(trim(f[0]), trim(f[1]), level);
  }
  return table;
}

inline SimilarityLevelTable read_similarity_table(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open similarity table " + path.string());
  return parse_similarity_table(in);
}

}  // namespace glyphsim::dataset

#endif  // GLYPHSIM_DATASET_SIMILARITY_LEVELS_HPP_
