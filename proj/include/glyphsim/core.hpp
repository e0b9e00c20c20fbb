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

#ifndef GLYPHSIM_CORE_HPP_
#define GLYPHSIM_CORE_HPP_

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace glyphsim {

inline constexpr const char* kVersion = "0.3.0";

/// Base exception for every recoverable failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Collects non-fatal warnings (retry exhaustion, omitted codepoints,
/// zero-norm embeddings, excluded classes). Thread-safe.
class Diagnostics {
 public:
  void warn(std::string message) {
    std::lock_guard lock(mutex_);
    warnings_.push_back(std::move(message));
  }
  std::vector<std::string> warnings() const {
    std::lock_guard lock(mutex_);
    return warnings_;
  }
  std::size_t count() const {
    std::lock_guard lock(mutex_);
    return warnings_.size();
  }
  void clear() {
    std::lock_guard lock(mutex_);
    warnings_.clear();
  }

 private:
  mutable std::mutex mutex_;
  std::vector<std::string> warnings_;
};

inline void warn(Diagnostics* diag, std::string message) {
  if (diag != nullptr) diag->warn(std::move(message));
}

// ---------------------------------------------------------------------------
// Hashing.

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

inline std::uint64_t fnv1a(std::string_view bytes,
                           std::uint64_t h = kFnvOffset) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stable seed derivation: identical inputs give identical seeds on every
/// platform and thread schedule.
template <typename... Ids>
std::uint64_t derive_seed(std::uint64_t master, Ids... ids) {
  std::uint64_t h = splitmix64(master);
  ((h = splitmix64(h ^ static_cast<std::uint64_t>(ids))), ...);
  return h;
}

inline std::uint64_t derive_seed_str(std::uint64_t master,
                                     std::string_view tag) {
  return splitmix64(splitmix64(master) ^ fnv1a(tag));
}

// ---------------------------------------------------------------------------
// Threading.

/// Runs fn(i) for i in [0, n) on up to `threads` workers with a static
/// contiguous partition. Results written to per-index slots are identical to
/// a sequential run.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// Small text helpers shared by the file-format parsers.

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \r\n\t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \r\n\t");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace glyphsim

#endif  // GLYPHSIM_CORE_HPP_
