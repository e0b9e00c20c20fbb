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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "glyphsim/encoder/encoder.hpp"
#include "glyphsim/similarity/embedding_store.hpp"
#include "glyphsim/similarity/similarity.hpp"
#include "support/oracles.hpp"
#include "support/synthetic_corpus.hpp"
#include "support/temp_dir.hpp"

namespace glyphsim::similarity {
namespace {

using testing::Rows;

ScriptSet make_set(const std::string& id, const Rows& rows) {
  return {id, testing::to_matrix(rows)};
}

Rows random_rows(Rng& rng, int n, int d) {
  Rows out;
  for (int i = 0; i < n; ++i) out.push_back(testing::random_unit(rng, d));
  return out;
}

// ---------------------------------------------------------------- glyph

TEST(GlyphDistance, Extremes) {
  Eigen::Vector3d x(0.6, 0.8, 0.0), y(0.0, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(glyph_similarity(x, x), 1.0);
  EXPECT_EQ(glyph_distance(x, x), 0.0);
  EXPECT_NEAR(glyph_similarity(x, y), 0.0, 1e-15);
  EXPECT_NEAR(glyph_distance(x, y), 1.0, 1e-15);
  EXPECT_NEAR(glyph_distance(x, Eigen::Vector3d(-x)), 2.0, 1e-15);
}

TEST(GlyphDistance, StaysInRangeForRandomPairs) {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto a = testing::random_unit(rng, 16), b = testing::random_unit(rng, 16);
    const Eigen::Map<const Eigen::VectorXd> x(a.data(), 16), y(b.data(), 16);
    const double d = glyph_distance(x, y);
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 2.0);
    EXPECT_EQ(d, glyph_distance(y, x));
  }
}

TEST(GlyphDistance, RejectsBadInputs) {
  EXPECT_THROW(glyph_distance(Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 0)), Error);
  const Eigen::VectorXd e2 = Eigen::VectorXd::Unit(2, 0), e3 = Eigen::VectorXd::Unit(3, 0);
  EXPECT_THROW(glyph_distance(e2, e3), Error);
}

// ------------------------------------------------------------- directed

TEST(DirectedDistance, SubsetIsZero) {
  Rng rng(1);
  const Rows b = random_rows(rng, 6, 8);
  const Rows a{b[4], b[1]};
  EXPECT_EQ(directed_script_distance(make_set("a", a), make_set("b", b)), 0.0);
  EXPECT_GT(directed_script_distance(make_set("b", b), make_set("a", a)), 0.0);
}

TEST(DirectedDistance, SingletonsGiveGlyphDistance) {
  const Rows a{{1, 0}}, b{{0.6, 0.8}};
  EXPECT_NEAR(directed_script_distance(make_set("a", a), make_set("b", b)), 0.4, 1e-15);
}

TEST(DirectedDistance, HandFixture) {
  // a = {e1, (e1 + e2)/sqrt2, e3}, b = {e1, e2}.
  const double r = 1.0 / std::sqrt(2.0);
  const Rows a{{1, 0, 0}, {r, r, 0}, {0, 0, 1}}, b{{1, 0, 0}, {0, 1, 0}};
  const auto sa = make_set("a", a), sb = make_set("b", b);
  // nearest from a: 0, 1 - r, 1; from b: 0, 1 - r
  EXPECT_NEAR(directed_script_distance(sa, sb), (2.0 - r) / 3.0, 1e-15);
  EXPECT_NEAR(directed_script_distance(sb, sa), (1.0 - r) / 2.0, 1e-15);
  EXPECT_NEAR(script_distance(sa, sb), 0.5 * ((2.0 - r) / 3.0 + (1.0 - r) / 2.0), 1e-15);
}

TEST(DirectedDistance, MatchesLoopOracle) {
  Rng rng(2);
  for (int t = 0; t < 30; ++t) {
    const int na = 1 + static_cast<int>(rng.below(9)), nb = 1 + static_cast<int>(rng.below(9));
    const Rows a = random_rows(rng, na, 12), b = random_rows(rng, nb, 12);
    EXPECT_NEAR(directed_script_distance(make_set("a", a), make_set("b", b)),
                testing::directed_distance_oracle(a, b), 1e-12);
  }
}

// --------------------------------------------------------------- script

TEST(ScriptDistance, SelfIsZeroAndSymmetric) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto a = make_set("a", random_rows(rng, 5, 10));
    const auto b = make_set("b", random_rows(rng, 7, 10));
    EXPECT_EQ(script_distance(a, a), 0.0);
    EXPECT_EQ(script_distance(a, b), script_distance(b, a));
  }
}

TEST(ScriptDistance, AsymmetricFixture) {
  // a = {u}; b = {v1, v2} with cos(u, v1) = 0.8 and cos(u, v2) = 0.4:
  // d(a, b) = 0.2, d(b, a) = (0.2 + 0.6) / 2 = 0.4.
  const Rows a{{1, 0}}, b{{0.8, 0.6}, {0.4, std::sqrt(1 - 0.16)}};
  const auto sa = make_set("a", a), sb = make_set("b", b);
  EXPECT_NEAR(directed_script_distance(sa, sb), 0.2, 1e-15);
  EXPECT_NEAR(directed_script_distance(sb, sa), 0.4, 1e-15);
  EXPECT_NEAR(script_distance(sa, sb), 0.3, 1e-15);
}

TEST(ScriptDistance, InvalidSets) {
  EXPECT_THROW(script_distance(ScriptSet{"a", Mat<double>(0, 3)}, make_set("b", {{1, 0, 0}})),
               Error);
  EXPECT_THROW(script_distance(make_set("a", {{1, 1, 0}}), make_set("b", {{1, 0, 0}})), Error);
  EXPECT_THROW(script_distance(make_set("a", {{1, 0}}), make_set("b", {{1, 0, 0}})), Error);
}

TEST(DistanceMatrix, MatchesElementwiseCalls) {
  Rng rng(4);
  std::vector<ScriptSet> sets;
  std::vector<Rows> raw;
  for (int s = 0; s < 5; ++s) {
    raw.push_back(random_rows(rng, 3 + s, 8));
    sets.push_back(make_set("s" + std::to_string(s), raw.back()));
  }
  const Eigen::MatrixXd m = script_distance_matrix(sets);
  const Eigen::MatrixXd m4 = script_distance_matrix(sets, 4);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(m(i, i), 0.0);
    for (int j = 0; j < 5; ++j) {
      EXPECT_EQ(m(i, j), m(j, i));
      EXPECT_EQ(m(i, j), m4(i, j));
      if (i != j) {
        EXPECT_EQ(m(i, j), script_distance(sets[i], sets[j]));
        EXPECT_NEAR(m(i, j), testing::script_distance_oracle(raw[i], raw[j]), 1e-12);
      }
    }
  }
}

TEST(DistanceMatrix, TwoScriptsAndErrors) {
  const auto a = make_set("a", {{1, 0}}), b = make_set("b", {{0, 1}});
  const std::vector<ScriptSet> two{a, b};
  const auto m = script_distance_matrix(two);
  EXPECT_EQ(m.rows(), 2);
  EXPECT_EQ(m(0, 1), m(1, 0));
  EXPECT_NEAR(m(0, 1), 1.0, 1e-15);
  EXPECT_THROW(script_distance_matrix(std::vector<ScriptSet>{a}), Error);
  EXPECT_THROW(script_distance_matrix(std::vector<ScriptSet>{a, a}), Error);
}

// ---------------------------------------------------------- separability

TEST(Separability, ClosedFormCases) {
  EXPECT_DOUBLE_EQ(separability_ratio(0.4, 0.4, 0.4), 1.0);
  EXPECT_EQ(separability_ratio(0.0, 0.3, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(separability_ratio(0.2, 0.3, 0.5), 0.5);
  try {
    separability_ratio(0.1, 0.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "unrelated script coincides with related pair");
  }
}

TEST(Separability, PropertiesOnRandomSets) {
  Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    const auto a = make_set("a", random_rows(rng, 4, 6));
    const auto b = make_set("b", random_rows(rng, 5, 6));
    const auto c = make_set("c", random_rows(rng, 3, 6));
    const double r = separability_ratio(a, b, c);
    EXPECT_GE(r, 0.0);
    EXPECT_EQ(r, separability_ratio(b, a, c));
    EXPECT_NEAR(r, script_distance(a, b) / (0.5 * (script_distance(c, a) + script_distance(c, b))),
                1e-15);
    // Uniform scaling of all three distances leaves R unchanged.
    const double s = 0.37;
    EXPECT_NEAR(separability_ratio(s * script_distance(a, b), s * script_distance(c, a),
                                   s * script_distance(c, b)),
                r, 1e-12);
  }
}

TEST(Separability, IdenticalRelatedPairIsZero) {
  Rng rng(7);
  const Rows shared = random_rows(rng, 4, 6);
  EXPECT_EQ(separability_ratio(make_set("a", shared), make_set("b", shared),
                               make_set("c", random_rows(rng, 4, 6))),
            0.0);
  const auto a = make_set("a", shared);
  EXPECT_THROW(separability_ratio(a, a, make_set("c", shared)), Error);
  EXPECT_THROW(separability_ratio(make_set("a", shared), make_set("b", shared),
                                  make_set("c", shared)),
               Error);
}

// -------------------------------------------------------------- grouping

TEST(GroupScripts, InstancesAndCentroids) {
  Mat<float> z(5, 2);
  z << 1, 0, 0, 1, 0.6f, 0.8f, 1, 0, 0, 1;
  const std::vector<std::string> scripts{"b", "b", "a", "b", "a"};
  const std::vector<int> classes{0, 0, 1, 2, 3};
  const auto inst = group_scripts(z, scripts, classes);
  ASSERT_EQ(inst.size(), 2u);
  EXPECT_EQ(inst[0].script_id, "a");
  EXPECT_EQ(inst[0].size(), 2);
  EXPECT_EQ(inst[1].size(), 3);
  const auto cent = group_scripts(z, scripts, classes, Granularity::kCentroids);
  ASSERT_EQ(cent[1].size(), 2);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(cent[1].embeddings(0, 0), r, 1e-7);
  EXPECT_NEAR(cent[1].embeddings(0, 1), r, 1e-7);
  EXPECT_NEAR(cent[1].embeddings(1, 0), 1.0, 1e-7);
}

TEST(GroupScripts, Errors) {
  Mat<float> z(2, 2);
  z << 1, 0, -1, 0;
  const std::vector<std::string> scripts{"a", "a"};
  const std::vector<int> classes{0, 0};
  EXPECT_THROW(group_scripts(z, scripts, classes, Granularity::kCentroids), Error);
  EXPECT_THROW(group_scripts(z, std::vector<std::string>{"a"}, classes), Error);
  EXPECT_THROW(parse_granularity("glyphs"), Error);
  EXPECT_EQ(parse_granularity("centroids"), Granularity::kCentroids);
}

// ----------------------------------------------------------------- store

EmbeddingStore sample_store(const std::string& id, int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  EmbeddingStore s;
  s.script_id = id;
  s.rows.resize(n, d);
  for (int i = 0; i < n; ++i) {
    const auto u = testing::random_unit(rng, d);
    for (int k = 0; k < d; ++k) s.rows(i, k) = static_cast<float>(u[k]);
    s.class_ids.push_back(i / 2);
    s.instance_ids.push_back(i % 2);
  }
  s.config_hash = "abc";
  s.model = "student";
  return s;
}

TEST(EmbeddingStore, RoundTrip) {
  testing::TempDir tmp;
  const auto s = sample_store("Greek", 6, 8, 1);
  save_store(tmp / "g.emb", s);
  EXPECT_EQ(load_store(tmp / "g.emb"), s);
}

TEST(EmbeddingStore, CorruptionAndMismatchAreErrors) {
  testing::TempDir tmp;
  auto s = sample_store("Greek", 4, 3, 2);
  save_store(tmp / "g.emb", s);
  std::string bytes = testing::read_file(tmp / "g.emb");
  bytes.back() ^= 0x1;
  testing::write_file(tmp / "bad.emb", bytes);
  EXPECT_THROW(load_store(tmp / "bad.emb"), Error);
  s.class_ids.pop_back();
  EXPECT_THROW(save_store(tmp / "x.emb", s), Error);
}

TEST(EmbeddingStore, DirectoryWithCsv) {
  testing::TempDir tmp;
  const std::vector<EmbeddingStore> stores{sample_store("Old Italic", 2, 3, 3),
                                           sample_store("Brahmi", 4, 3, 4)};
  write_store_dir(tmp / "emb", stores);
  EXPECT_TRUE(std::filesystem::exists(tmp / "emb" / "Old_Italic.emb"));
  const auto loaded = load_store_dir(tmp / "emb");
  ASSERT_EQ(loaded.size(), 2u);
  EXPECT_EQ(loaded[0], stores[1]);
  EXPECT_EQ(loaded[1], stores[0]);
  const std::string csv = testing::read_file(tmp / "emb" / "embeddings.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "script_id,class_id,instance_id,v0,v1,v2");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
  const std::vector<EmbeddingStore> clash{sample_store("a b", 1, 3, 5), sample_store("a_b", 1, 3, 6)};
  EXPECT_THROW(write_store_dir(tmp / "clash", clash), Error);
  EXPECT_THROW(load_store_dir(tmp / "missing"), Error);
}

TEST(EmbeddingStore, ScriptSetsAndDistanceCsv) {
  testing::TempDir tmp;
  const std::vector<EmbeddingStore> stores{sample_store("a", 4, 5, 7), sample_store("b", 6, 5, 8)};
  const auto inst = script_sets(stores);
  const auto cent = script_sets(stores, Granularity::kCentroids);
  EXPECT_EQ(inst[1].size(), 6);
  EXPECT_EQ(cent[1].size(), 3);
  const auto m = script_distance_matrix(inst);
  const std::vector<std::string> ids{"a", "b"};
  write_distance_csv(tmp / "d.csv", ids, m);
  const std::string csv = testing::read_file(tmp / "d.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "script_id,a,b");
  EXPECT_NE(csv.find("\nb,"), std::string::npos);
}

TEST(EmbeddingStore, BuildFromEncoder) {
  testing::SyntheticSpec spec;
  spec.families = 2;
  spec.scripts_per_family = 1;
  spec.characters_per_script = 3;
  spec.instances = 2;
  const auto ds = testing::make_dataset(spec);
  const auto params = encoder::init_encoder<float>({"compact_cnn", 16, 2});
  const auto stores = build_stores(params, ds, "hash");
  ASSERT_EQ(stores.size(), 2u);
  EXPECT_LT(stores[0].script_id, stores[1].script_id);
  for (const auto& s : stores) {
    EXPECT_EQ(s.count(), 6u);
    EXPECT_EQ(s.dim(), 16);
    EXPECT_EQ(s.model, "teacher");
    for (Eigen::Index i = 0; i < s.rows.rows(); ++i) EXPECT_NEAR(s.rows.row(i).norm(), 1.0f, 1e-6f);
  }
  EXPECT_THROW(build_stores(params, dataset::Dataset{}, "hash"), Error);
}

}  // namespace
}  // namespace glyphsim::similarity
