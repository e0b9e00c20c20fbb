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


#ifndef GLYPHSIM_EVALUATION_BASELINES_HPP_
#define GLYPHSIM_EVALUATION_BASELINES_HPP_

#include "glyphsim/dataset/dataset.hpp"
#include "glyphsim/encoder/tensor.hpp"
#include "glyphsim/rng.hpp"

namespace glyphsim::evaluation {

/// Chance-level reference model: each distinct image is mapped to an
/// isotropic random unit vector seeded by a hash of its pixels, so the
/// embedding carries no information about the glyph's class.
inline Vec<float> random_embedding(const dataset::Raster& r, int dim, std::uint64_t seed) {
  const auto bytes = r.to_bytes();
  Rng rng(derive_seed(seed, fnv1a(std::string_view(
                                reinterpret_cast<const char*>(bytes.data()), bytes.size()))));
  Vec<float> v(dim);
  for (int i = 0; i < dim; ++i) v[i] = static_cast<float>(rng.normal());
  return v / v.norm();
}

inline Mat<float> random_embedding_table(const dataset::Dataset& ds, int dim,
                                         std::uint64_t seed) {
  Mat<float> out(static_cast<Eigen::Index>(ds.size()), dim);
  for (std::size_t i = 0; i < ds.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = random_embedding(ds.glyphs[i].pixels, dim, seed).transpose();
  return out;
}

}  // namespace glyphsim::evaluation

#endif  // GLYPHSIM_EVALUATION_BASELINES_HPP_
