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


#ifndef GLYPHSIM_SIMILARITY_EMBEDDING_STORE_HPP_
#define GLYPHSIM_SIMILARITY_EMBEDDING_STORE_HPP_

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "glyphsim/dataset/dataset.hpp"
#include "glyphsim/encoder/encoder.hpp"
#include "glyphsim/framed.hpp"
#include "glyphsim/similarity/similarity.hpp"

// Embedding stores use the framed container with magic "GLYPHEMB". The
// header holds script_id, d, count and the per-row class and instance ids;
// the payload holds count x d float32 rows.
namespace glyphsim::similarity {

inline constexpr char kStoreMagic[8] = {'G', 'L', 'Y', 'P', 'H', 'E', 'M', 'B'};
inline constexpr int kStoreFormatVersion = 1;

struct EmbeddingStore {
  std::string script_id;
  std::vector<int> class_ids;
  std::vector<int> instance_ids;
  Mat<float> rows;  // count x d
  std::string config_hash;
  std::string model;  // e.g. the checkpoint role

  int dim() const { return static_cast<int>(rows.cols()); }
  std::size_t count() const { return static_cast<std::size_t>(rows.rows()); }
  bool operator==(const EmbeddingStore&) const = default;
};

inline void save_store(const std::filesystem::path& path, const EmbeddingStore& s) {
  if (s.class_ids.size() != s.count() || s.instance_ids.size() != s.count())
    throw Error("embedding store ids do not match row count");
  framed::Framed f;
  f.header["format"] = "glyphsim-embeddings";
  f.header["format_version"] = kStoreFormatVersion;
  f.header["script_id"] = s.script_id;
  f.header["d"] = s.dim();
  f.header["count"] = s.count();
  f.header["class_ids"] = s.class_ids;
  f.header["instance_ids"] = s.instance_ids;
  f.header["config_hash"] = s.config_hash;
  f.header["model"] = s.model;
  f.header["tool_version"] = kVersion;
  const Vec<float> flat = Eigen::Map<const Vec<float>>(s.rows.data(), s.rows.size());
  framed::append_le_floats(f.payload, flat);
  framed::write_framed(path, kStoreMagic, std::move(f));
}

inline EmbeddingStore load_store(const std::filesystem::path& path) {
  const framed::Framed f = framed::read_framed(path, kStoreMagic, "embedding store");
  if (f.header.value("format_version", -1) != kStoreFormatVersion)
    throw Error("embedding store format version is not supported: " + path.string());
  EmbeddingStore s;
  s.script_id = f.header.at("script_id");
  const int d = f.header.at("d");
  const std::size_t count = f.header.at("count");
  s.class_ids = f.header.at("class_ids").get<std::vector<int>>();
  s.instance_ids = f.header.at("instance_ids").get<std::vector<int>>();
  s.config_hash = f.header.value("config_hash", "");
  s.model = f.header.value("model", "");
  if (f.payload.size() != count * static_cast<std::size_t>(d) * 4 ||
      s.class_ids.size() != count || s.instance_ids.size() != count)
    throw Error("embedding store is inconsistent: " + path.string());
  const Vec<float> flat = framed::read_le_floats(f.payload.data(), count * d);
  s.rows = Eigen::Map<const Mat<float>>(flat.data(), static_cast<Eigen::Index>(count), d);
  return s;
}

/// File-name-safe form of a script id.
inline std::string store_file_name(const std::string& script_id) {
  std::string out;
  for (char c : script_id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out + ".emb";
}

/// One store per script, in sorted script order; rows follow dataset order.
inline std::vector<EmbeddingStore> build_stores(const encoder::EncoderParams<float>& params,
                                                const dataset::Dataset& ds,
                                                const std::string& config_hash,
                                                int threads = 1,
                                                Diagnostics* diag = nullptr) {
  if (ds.empty()) throw Error("cannot embed an empty dataset");
  const Mat<float> all = encoder::embed_matrix(params, std::span<const dataset::GlyphImage>(ds.glyphs),
                                               threads, diag);
  std::map<std::string, std::vector<Eigen::Index>> by_script;
  for (std::size_t i = 0; i < ds.size(); ++i)
    by_script[ds.glyphs[i].script_id].push_back(static_cast<Eigen::Index>(i));
  std::vector<EmbeddingStore> out;
  for (const auto& [script, idx] : by_script) {
    EmbeddingStore s;
    s.script_id = script;
    s.config_hash = config_hash;
    s.model = encoder::to_string(params.role);
    s.rows.resize(static_cast<Eigen::Index>(idx.size()), all.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) {
      s.rows.row(static_cast<Eigen::Index>(r)) = all.row(idx[r]);
      s.class_ids.push_back(ds.glyphs[idx[r]].class_id);
      s.instance_ids.push_back(ds.glyphs[idx[r]].instance_id);
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// script_id,class_id,instance_id,v0..v{d-1}
inline void write_embedding_csv(const std::filesystem::path& path,
                                std::span<const EmbeddingStore> stores) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  const int d = stores.empty() ? 0 : stores.front().dim();
  out << "script_id,class_id,instance_id";
  for (int k = 0; k < d; ++k) out << ",v" << k;
  out << '\n';
  out.precision(9);
  for (const auto& s : stores) {
    for (std::size_t r = 0; r < s.count(); ++r) {
      out << s.script_id << ',' << s.class_ids[r] << ',' << s.instance_ids[r];
      for (int k = 0; k < s.dim(); ++k) out << ',' << s.rows(static_cast<Eigen::Index>(r), k);
      out << '\n';
    }
  }
}

/// Writes <dir>/<script>.emb for every store plus <dir>/embeddings.csv.
inline void write_store_dir(const std::filesystem::path& dir,
                            std::span<const EmbeddingStore> stores) {
  std::filesystem::create_directories(dir);
  std::set<std::string> names;
  for (const auto& s : stores) {
    const std::string name = store_file_name(s.script_id);
    if (!names.insert(name).second)
      throw Error("two scripts map to the same store file: " + name);
    save_store(dir / name, s);
  }
  write_embedding_csv(dir / "embeddings.csv", stores);
}

/// Loads every *.emb file in `dir`, sorted by script id.
inline std::vector<EmbeddingStore> load_store_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error("no embedding directory " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".emb") files.push_back(e.path());
  std::vector<EmbeddingStore> out;
  for (const auto& f : files) out.push_back(load_store(f));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.script_id < b.script_id; });
  if (out.empty()) throw Error("no embedding stores in " + dir.string());
  return out;
}

/// Script sets from stores, in store order.
inline std::vector<ScriptSet> script_sets(std::span<const EmbeddingStore> stores,
                                          Granularity granularity = Granularity::kInstances) {
  std::vector<ScriptSet> out;
  for (const auto& s : stores) {
    const std::vector<std::string> ids(s.count(), s.script_id);
    auto grouped = group_scripts(s.rows, ids, s.class_ids, granularity);
    out.push_back(std::move(grouped.front()));
  }
  return out;
}

/// Distance matrix with a script_id header row and column.
inline void write_distance_csv(const std::filesystem::path& path,
                               std::span<const std::string> ids, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "script_id";
  for (const auto& id : ids) out << ',' << id;
  out << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << ids[i];
    for (std::size_t j = 0; j < ids.size(); ++j)
      out << ',' << m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    out << '\n';
  }
}

}  // namespace glyphsim::similarity

#endif  // GLYPHSIM_SIMILARITY_EMBEDDING_STORE_HPP_
