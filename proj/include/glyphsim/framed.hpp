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


#ifndef GLYPHSIM_FRAMED_HPP_
#define GLYPHSIM_FRAMED_HPP_

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "json.hpp"

#include "glyphsim/encoder/tensor.hpp"

// Binary container shared by checkpoints and embedding stores:
//   8 bytes   magic
//   8 bytes   little-endian uint64 length N of the header
//   N bytes   UTF-8 JSON header, including payload_bytes and a CRC-32 of
//             the payload
//   payload   little-endian float32 data laid out as the header describes
namespace glyphsim::framed {

inline void append_le_floats(std::string& out, const Vec<float>& v) {
  const std::size_t start = out.size();
  out.resize(start + static_cast<std::size_t>(v.size()) * 4);
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(out.data() + start, v.data(), static_cast<std::size_t>(v.size()) * 4);
  } else {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      std::uint32_t bits = std::bit_cast<std::uint32_t>(v[i]);
      for (int b = 0; b < 4; ++b)
        out[start + i * 4 + b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
    }
  }
}

inline Vec<float> read_le_floats(const char* data, std::size_t count) {
  Vec<float> v(static_cast<Eigen::Index>(count));
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(v.data(), data, count * 4);
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b)
        bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[i * 4 + b])) << (8 * b);
      v[static_cast<Eigen::Index>(i)] = std::bit_cast<float>(bits);
    }
  }
  return v;
}

inline std::uint32_t crc32_of(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - pos, 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + pos), chunk);
    pos += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

inline void write_u64_le(std::ostream& os, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(b, 8);
}

inline std::uint64_t read_u64_le(const char* b) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  return v;
}

/// Header JSON + raw payload.
struct Framed {
  nlohmann::json header;
  std::string payload;
};

inline void add_tensors(Framed& f, const ParamSet<float>& tensors) {
  for (const auto& t : tensors) {
    nlohmann::json entry;
    entry["name"] = t.name;
    entry["shape"] = t.shape;
    entry["dtype"] = "f32";
    entry["offset"] = f.payload.size();
    entry["nbytes"] = static_cast<std::uint64_t>(t.values.size()) * 4;
    f.header["tensors"].push_back(entry);
    append_le_floats(f.payload, t.values);
  }
}

inline void write_framed(const std::filesystem::path& path, const char (&magic)[8],
                         Framed f) {
  f.header["payload_bytes"] = f.payload.size();
  f.header["checksum"] = {{"algorithm", "crc32"}, {"value", crc32_of(f.payload)}};
  const std::string header = f.header.dump();
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(magic, 8);
  write_u64_le(out, header.size());
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(f.payload.data(), static_cast<std::streamsize>(f.payload.size()));
  if (!out) throw Error("write failed for " + path.string());
}

/// Reads and verifies magic, header and payload checksum.
inline Framed read_framed(const std::filesystem::path& path,
                          const char (&magic)[8], const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(std::string("cannot open ") + what + " " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), {});
  if (bytes.size() < 16 || std::memcmp(bytes.data(), magic, 8) != 0)
    throw Error(std::string("not a glyphsim ") + what + ": " + path.string());
  const std::uint64_t header_len = read_u64_le(bytes.data() + 8);
  if (header_len > bytes.size() - 16)
    throw Error(std::string(what) + " header truncated: " + path.string());
  Framed f;
  try {
    f.header = nlohmann::json::parse(bytes.substr(16, header_len));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string(what) + " header corrupted: " + e.what());
  }
  f.payload = bytes.substr(16 + header_len);
  const std::uint64_t expected = f.header.value("payload_bytes", std::uint64_t{0});
  const std::uint32_t crc = f.header.at("checksum").at("value").get<std::uint32_t>();
  if (f.payload.size() != expected || crc32_of(f.payload) != crc)
    throw Error(std::string(what) + " checksum mismatch (corrupted or truncated payload): " +
                path.string());
  return f;
}

inline ParamSet<float> extract_tensors(const Framed& f, const std::string& prefix,
                                       bool match_prefix) {
  ParamSet<float> out;
  for (const auto& entry : f.header.at("tensors")) {
    const std::string name = entry.at("name");
    if (name.starts_with(prefix) != match_prefix) continue;
    if (entry.at("dtype") != "f32") throw Error("unsupported dtype for " + name);
    const std::uint64_t offset = entry.at("offset"), nbytes = entry.at("nbytes");
    if (offset + nbytes > f.payload.size()) throw Error("tensor out of range: " + name);
    auto& t = out.add(name, entry.at("shape").get<std::vector<int>>());
    if (static_cast<std::uint64_t>(t.numel()) * 4 != nbytes)
      throw Error("tensor size mismatch: " + name);
    t.values = read_le_floats(f.payload.data() + offset, nbytes / 4);
  }
  return out;
}

}  // namespace glyphsim::framed

#endif  // GLYPHSIM_FRAMED_HPP_
