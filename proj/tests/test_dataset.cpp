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

#include <complex>
#include <cstdlib>
#include <numbers>
#include <set>
#include <sstream>

#include "glyphsim/dataset/augment.hpp"
#include "glyphsim/dataset/omniglot.hpp"
#include "glyphsim/dataset/sampling.hpp"
#include "glyphsim/dataset/similarity_levels.hpp"
#include "glyphsim/dataset/unicode.hpp"
#include "support/synthetic_corpus.hpp"
#include "support/temp_dir.hpp"

namespace glyphsim::dataset {
namespace {

using testing::TempDir;

GlyphImage glyph_with(std::initializer_list<std::pair<int, int>> ink, int cls = 0) {
  GlyphImage g;
  for (auto [r, c] : ink) g.pixels.set(r, c, true);
  g.class_id = cls;
  g.script_id = "S";
  g.character = "c";
  g.source_instance = 0;
  return g;
}

// An "L" shape: asymmetric under every rotation and reflection.
GlyphImage l_shape() {
  GlyphImage g;
  for (int r = 30; r <= 75; ++r)
    for (int c = 35; c <= 41; ++c) g.pixels.set(r, c, true);
  for (int r = 69; r <= 75; ++r)
    for (int c = 35; c <= 70; ++c) g.pixels.set(r, c, true);
  g.script_id = "S";
  g.character = "L";
  g.source_instance = 0;
  return g;
}

std::filesystem::path test_font_dir() {
  if (const char* env = std::getenv("GLYPHSIM_TEST_FONTS")) return env;
  return "/usr/share/fonts/truetype/dejavu";
}

bool have_test_font() {
  return std::filesystem::exists(test_font_dir() / "DejaVuSans.ttf");
}

// ---------------------------------------------------------------- loading

void write_toy_root(const std::filesystem::path& root) {
  testing::SyntheticSpec spec;
  spec.families = 1;
  spec.scripts_per_family = 2;
  spec.characters_per_script = 2;
  spec.instances = 20;
  testing::write_omniglot_tree(root, spec);
  std::filesystem::remove_all(root / "Script_A1" / "character02");
}

TEST(LoadOmniglot, ToyRootCountsClassesAndGlyphs) {
  TempDir tmp;
  write_toy_root(tmp.path());
  SplitManifest m{{"Script_A0", Split::kSupervisedInvented}, {"Script_A1", Split::kEvaluation}};
  const auto corpus = load_omniglot(tmp.path(), m);
  EXPECT_EQ(corpus.total_classes(), 3);
  EXPECT_EQ(corpus.total_glyphs(), 60u);
  EXPECT_EQ(corpus.supervised_invented.class_count, 2);
  EXPECT_EQ(corpus.evaluation.class_count, 1);
  EXPECT_TRUE(corpus.unsupervised_historical.empty());
}

TEST(LoadOmniglot, ClassIdsAreLexicographicAndManifestIndependent) {
  TempDir tmp;
  write_toy_root(tmp.path());
  const auto a = load_omniglot(tmp.path(), SplitManifest{{"Script_A0", Split::kEvaluation},
                                                          {"Script_A1", Split::kEvaluation}});
  const auto b = load_omniglot(tmp.path(), SplitManifest{{"Script_A0", Split::kUnsupervisedHistorical},
                                                          {"Script_A1", Split::kEvaluation}});
  EXPECT_EQ(a.evaluation.glyphs.front().class_id, 0);
  EXPECT_EQ(a.evaluation.glyphs.back().class_id, 2);
  EXPECT_EQ(b.unsupervised_historical.glyphs.front().class_id, 0);
  EXPECT_EQ(b.evaluation.glyphs.front().class_id, 2);
  EXPECT_EQ(a.evaluation.glyphs.back().pixels, b.evaluation.glyphs.back().pixels);
}

TEST(LoadOmniglot, EmptyManifestIsAnError) {
  TempDir tmp;
  write_toy_root(tmp.path());
  try {
    load_omniglot(tmp.path(), SplitManifest{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("script assigned to no split"), std::string::npos);
  }
}

TEST(LoadOmniglot, MissingScriptIsNamed) {
  TempDir tmp;
  write_toy_root(tmp.path());
  SplitManifest m{{"Script_A0", Split::kEvaluation},
                  {"Script_A1", Split::kEvaluation},
                  {"Atlantean", Split::kEvaluation}};
  try {
    load_omniglot(tmp.path(), m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("Atlantean"), std::string::npos);
  }
}

TEST(LoadOmniglot, UnreadableImageIsAnError) {
  TempDir tmp;
  write_toy_root(tmp.path());
  testing::write_file(tmp.path() / "Script_A0" / "character01" / "0001_01.png", "not a png");
  EXPECT_THROW(load_omniglot(tmp.path(), SplitManifest{{"Script_A0", Split::kEvaluation},
                                                      {"Script_A1", Split::kEvaluation}}),
               Error);
}

TEST(SplitManifest, ScriptInTwoSplitsIsAnError) {
  std::istringstream in("Greek\tevaluation\nGreek\tsupervised_invented\n");
  EXPECT_THROW(parse_split_manifest(in), Error);
}

TEST(SplitManifest, UnknownSplitIsAnError) {
  std::istringstream in("Greek\ttraining\n");
  EXPECT_THROW(parse_split_manifest(in), Error);
}

TEST(SplitManifest, SplitsAreDisjointAfterLoading) {
  TempDir tmp;
  write_toy_root(tmp.path());
  const auto c = load_omniglot(tmp.path(), SplitManifest{{"Script_A0", Split::kSupervisedInvented},
                                                          {"Script_A1", Split::kUnsupervisedHistorical}});
  std::set<std::string> seen;
  for (const Dataset* d : {&c.supervised_invented, &c.unsupervised_historical, &c.evaluation})
    for (const auto& s : d->script_ids) EXPECT_TRUE(seen.insert(s).second) << s;
}

TEST(PngIo, RoundTripAndThreshold) {
  TempDir tmp;
  const GlyphImage g = l_shape();
  write_glyph_png(tmp / "g.png", g.pixels);
  EXPECT_EQ(read_glyph_png(tmp / "g.png"), g.pixels);

  GrayImage gray{kCanvas, kCanvas, std::vector<std::uint8_t>(kPixels, 255)};
  gray.pixels[0] = 127;  // coverage 0.502 -> ink
  gray.pixels[1] = 128;  // coverage 0.498 -> background
  write_gray_png(tmp / "t.png", gray);
  const Raster r = read_glyph_png(tmp / "t.png");
  EXPECT_TRUE(r.get(0));
  EXPECT_FALSE(r.get(1));
  EXPECT_EQ(r.ink_count(), 1);
}

TEST(Dataset, ClassMappingToTwoScriptsIsAnError) {
  Dataset ds;
  ds.glyphs.push_back(glyph_with({{1, 1}}, 3));
  ds.glyphs.push_back(glyph_with({{1, 1}}, 3));
  ds.glyphs.back().script_id = "T";
  EXPECT_THROW(refresh_summary(ds), Error);
}

TEST(Dataset, DirectoryRoundTrip) {
  TempDir tmp;
  testing::SyntheticSpec spec;
  spec.characters_per_script = 2;
  spec.instances = 3;
  Dataset ds = generate_augmented_set(testing::make_dataset(spec), {}, 5);
  save_dataset_dir(ds, tmp / "d");
  const Dataset back = load_dataset_dir(tmp / "d");
  ASSERT_EQ(back.size(), ds.size());
  EXPECT_EQ(back.split, ds.split);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    EXPECT_EQ(back.glyphs[i].pixels, ds.glyphs[i].pixels);
    EXPECT_EQ(back.glyphs[i].class_id, ds.glyphs[i].class_id);
    EXPECT_EQ(back.glyphs[i].augmentation_index, ds.glyphs[i].augmentation_index);
    EXPECT_EQ(back.glyphs[i].source_instance, ds.glyphs[i].source_instance);
  }
}

// ----------------------------------------------------------- augmentation

TEST(Augmentation, ZeroProbabilitiesGiveIdentity) {
  const GlyphImage g = l_shape();
  AugmentationParams p;
  p.with_probability(0.0);
  Rng rng(3);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(apply_affine_augmentation(g, p, rng).pixels, g.pixels);
}

// Independent reference: rotate the displayed image (y up) by +angle about
// the canvas centre with complex arithmetic, nearest-neighbour sampling.
Raster reference_rotation(const Raster& src, double degrees) {
  const std::complex<double> turn = std::polar(1.0, -degrees * std::numbers::pi / 180.0);
  const double c = (kCanvas - 1) / 2.0;
  Raster out;
  for (int y = 0; y < kCanvas; ++y)
    for (int x = 0; x < kCanvas; ++x) {
      const std::complex<double> w(x - c, c - y);
      const std::complex<double> s = w * turn;
      const int sx = static_cast<int>(std::floor(s.real() + c + 0.5));
      const int sy = static_cast<int>(std::floor(c - s.imag() + 0.5));
      if (sx >= 0 && sx < kCanvas && sy >= 0 && sy < kCanvas && src.at(sy, sx))
        out.set(y, x, true);
    }
  return out;
}

TEST(Augmentation, RotationMatchesReferenceRasterizer) {
  const GlyphImage g = l_shape();
  AugmentationParams p;
  p.with_probability(0.0);
  p.rotation_probability = 1.0;
  p.rotation_degrees = {10.0, 10.0};
  Rng rng(11);
  const Raster got = apply_affine_augmentation(g, p, rng).pixels;
  const Raster want = reference_rotation(g.pixels, 10.0);
  int mismatches = 0;
  for (int i = 0; i < kPixels; ++i) mismatches += got.get(i) != want.get(i);
  EXPECT_EQ(mismatches, 0);
  EXPECT_NE(got, g.pixels);
}

TEST(Augmentation, PositiveRotationTurnsCounterClockwise) {
  // A horizontal bar right of centre moves up under a counter-clockwise turn.
  GlyphImage g;
  for (int c = 70; c <= 90; ++c) g.pixels.set(52, c, true);
  g.script_id = "S";
  AugmentationParams p;
  p.with_probability(0.0);
  p.rotation_probability = 1.0;
  p.rotation_degrees = {10.0, 10.0};
  Rng rng(1);
  const auto box = ink_bounds(apply_affine_augmentation(g, p, rng).pixels);
  EXPECT_LT(box.top, 52);
  EXPECT_LE(box.bottom, 52);
}

TEST(Augmentation, TranslationMovesDeltaImage) {
  const GlyphImage g = glyph_with({{40, 50}});
  AugmentationParams p;
  p.with_probability(0.0);
  p.translation_probability = 1.0;
  p.translation = {2.0, 2.0};
  Rng rng(5);
  const Raster r = apply_affine_augmentation(g, p, rng).pixels;
  EXPECT_EQ(r.ink_count(), 1);
  EXPECT_TRUE(r.at(42, 52));
}

TEST(Augmentation, PreservesLabels) {
  GlyphImage g = l_shape();
  g.class_id = 17;
  g.script_id = "Mkhedruli";
  g.instance_id = 4;
  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    const GlyphImage a = apply_affine_augmentation(g, {}, rng);
    EXPECT_EQ(a.class_id, 17);
    EXPECT_EQ(a.script_id, "Mkhedruli");
    EXPECT_GT(a.pixels.ink_count(), 0);
  }
}

TEST(Augmentation, InkLossFallsBackToInputWithWarning) {
  // A corner pixel pushed off-canvas by a forced translation every time.
  const GlyphImage g = glyph_with({{104, 104}});
  AugmentationParams p;
  p.with_probability(0.0);
  p.translation_probability = 1.0;
  p.translation = {2.0, 2.0};
  Rng rng(2);
  Diagnostics diag;
  EXPECT_EQ(apply_affine_augmentation(g, p, rng, &diag).pixels, g.pixels);
  EXPECT_EQ(diag.count(), 1u);
}

TEST(Augmentation, InvalidProbabilityIsAnError) {
  AugmentationParams p;
  p.zoom_probability = 1.5;
  EXPECT_THROW(p.validate(), Error);
}

TEST(AugmentedSet, TwentyInstancesBecomeOneHundredEighty) {
  testing::SyntheticSpec spec;
  spec.families = 1;
  spec.scripts_per_family = 1;
  spec.characters_per_script = 1;
  spec.instances = 20;
  const Dataset ds = testing::make_dataset(spec);
  const Dataset aug = generate_augmented_set(ds, {}, 42);
  ASSERT_EQ(aug.size(), 180u);
  EXPECT_EQ(aug.size(), ds.size() * 9);
  std::set<int> ids;
  int augmented = 0;
  for (const auto& g : aug.glyphs) {
    EXPECT_EQ(g.class_id, ds.glyphs[0].class_id);
    EXPECT_TRUE(ids.insert(g.instance_id).second);
    if (g.is_augmented()) {
      ++augmented;
      EXPECT_GE(g.augmentation_index, 1);
      EXPECT_LE(g.augmentation_index, 8);
      EXPECT_GE(g.source_instance, 0);
      EXPECT_LT(g.source_instance, 20);
    }
  }
  EXPECT_EQ(augmented, 160);
}

TEST(AugmentedSet, EmptyInEmptyOut) {
  EXPECT_TRUE(generate_augmented_set(Dataset{}, {}, 1).empty());
}

TEST(AugmentedSet, DeterministicAndThreadIndependent) {
  testing::SyntheticSpec spec;
  spec.instances = 4;
  const Dataset ds = testing::make_dataset(spec);
  const Dataset a = generate_augmented_set(ds, {}, 7, 1);
  const Dataset b = generate_augmented_set(ds, {}, 7, 4);
  const Dataset c = generate_augmented_set(ds, {}, 8, 1);
  ASSERT_EQ(a.size(), b.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.glyphs[i].pixels, b.glyphs[i].pixels);
    differs |= a.glyphs[i].pixels != c.glyphs[i].pixels;
  }
  EXPECT_TRUE(differs);
}

// -------------------------------------------------------------- rendering

TEST(RenderUnicode, LatinCapitalAIsCentred) {
  if (!have_test_font()) GTEST_SKIP() << "no test font";
  const Font font(test_font_dir() / "DejaVuSans.ttf");
  const RenderResult r = render_unicode_glyph(U'A', font);
  ASSERT_TRUE(r.raster);
  const auto box = ink_bounds(*r.raster);
  EXPECT_LE(std::abs(box.center_row() - 52.0), 1.0);
  EXPECT_LE(std::abs(box.center_col() - 52.0), 1.0);
  EXPECT_LE(std::max(box.height(), box.width()), static_cast<int>(0.9 * kCanvas) + 1);
  EXPECT_GE(std::max(box.height(), box.width()), static_cast<int>(0.9 * kCanvas) - 3);
}

TEST(RenderUnicode, MissingGlyphIsAnOmission) {
  if (!have_test_font()) GTEST_SKIP() << "no test font";
  const Font font(test_font_dir() / "DejaVuSans.ttf");
  const RenderResult r = render_unicode_glyph(U'\x4E00', font);  // CJK, absent from DejaVu
  EXPECT_FALSE(r.raster);
  EXPECT_FALSE(r.omission_reason.empty());
}

TEST(RenderUnicode, Deterministic) {
  if (!have_test_font()) GTEST_SKIP() << "no test font";
  const Font font(test_font_dir() / "DejaVuSans.ttf");
  EXPECT_EQ(*render_unicode_glyph(U'\x03A9', font).raster,
            *render_unicode_glyph(U'\x03A9', font).raster);
}

TEST(RenderUnicode, UnreadableFontIsAnError) {
  TempDir tmp;
  testing::write_file(tmp / "bad.ttf", "garbage");
  EXPECT_THROW(Font(tmp / "bad.ttf"), Error);
  EXPECT_THROW(Font(tmp / "absent.ttf"), Error);
}

TEST(BuildUnicode, GreekCapitalsSkipUnassignedCodepoint) {
  if (!have_test_font()) GTEST_SKIP() << "no test font";
  std::istringstream in("Greek\t0391-03A9\tDejaVuSans.ttf\n");
  const auto build = build_unicode_dataset(parse_ranges(in), test_font_dir());
  // Assigned codepoints of U+0391..U+03A9 per the Unicode character database.
  const std::vector<char32_t> assigned = {
      0x391, 0x392, 0x393, 0x394, 0x395, 0x396, 0x397, 0x398, 0x399, 0x39A, 0x39B, 0x39C,
      0x39D, 0x39E, 0x39F, 0x3A0, 0x3A1, 0x3A3, 0x3A4, 0x3A5, 0x3A6, 0x3A7, 0x3A8, 0x3A9};
  ASSERT_EQ(build.dataset.size(), assigned.size());
  for (std::size_t i = 0; i < assigned.size(); ++i) {
    EXPECT_EQ(build.dataset.glyphs[i].character, codepoint_label(assigned[i]));
    EXPECT_EQ(build.dataset.glyphs[i].script_id, "Greek");
  }
  ASSERT_EQ(build.omissions.size(), 1u);
  EXPECT_EQ(build.omissions[0].codepoint, U'\x03A2');
}

TEST(BuildUnicode, EmptyRangesGiveEmptyDataset) {
  std::istringstream in("# nothing\n");
  EXPECT_TRUE(build_unicode_dataset(parse_ranges(in), "/nonexistent").dataset.empty());
}

TEST(BuildUnicode, TwoScriptsShareAFont) {
  if (!have_test_font()) GTEST_SKIP() << "no test font";
  std::istringstream in("Latin\t0041-0043\tDejaVuSans.ttf\nCyrillic\t0410-0412\tDejaVuSans.ttf\n");
  const auto build = build_unicode_dataset(parse_ranges(in), test_font_dir());
  EXPECT_EQ(build.dataset.size(), 6u);
  EXPECT_EQ(build.dataset.script_ids, (std::vector<std::string>{"Cyrillic", "Latin"}));
}

TEST(BuildUnicode, ScriptWithNothingRenderableIsNamed) {
  if (!have_test_font()) GTEST_SKIP() << "no test font";
  std::istringstream in("Han\t4E00-4E02\tDejaVuSans.ttf\n");
  try {
    build_unicode_dataset(parse_ranges(in), test_font_dir());
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("Han"), std::string::npos);
  }
}

TEST(BuildUnicode, WritesDatasetAndOmissions) {
  if (!have_test_font()) GTEST_SKIP() << "no test font";
  TempDir tmp;
  testing::write_file(tmp / "ranges.tsv", "Greek\tU+03A0-U+03A3\tDejaVuSans.ttf\n");
  build_unicode_dataset(tmp / "ranges.tsv", test_font_dir(), tmp / "out");
  EXPECT_EQ(load_dataset_dir(tmp / "out").size(), 3u);
  EXPECT_NE(testing::read_file(tmp / "out" / "omissions.tsv").find("U+03A2"), std::string::npos);
}

TEST(Ranges, MalformedLinesAreErrors) {
  std::istringstream a("Greek\t03A9-0391\tf.ttf\n");
  EXPECT_THROW(parse_ranges(a), Error);
  std::istringstream b("Greek\t0391\n");
  EXPECT_THROW(parse_ranges(b), Error);
  std::istringstream c("Greek\tzz\tf.ttf\n");
  EXPECT_THROW(parse_ranges(c), Error);
}

// --------------------------------------------------------------- sampling

Dataset counted_dataset(int classes, int per_class) {
  Dataset ds;
  for (int c = 0; c < classes; ++c)
    for (int i = 0; i < per_class; ++i) {
      GlyphImage g = glyph_with({{c, i}}, c);
      g.instance_id = i;
      g.source_instance = i;
      ds.glyphs.push_back(g);
    }
  refresh_summary(ds);
  return ds;
}

TEST(SupervisedBatch, EveryLabelAppearsAtLeastTwice) {
  const Dataset ds = counted_dataset(100, 9);
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto b = sample_supervised_batch(ds, 128, rng);
    ASSERT_EQ(b.glyph_indices.size(), 128u);
    std::map<int, int> count;
    for (int l : b.labels) ++count[l];
    for (auto [l, n] : count) EXPECT_GE(n, 2) << l;
    for (std::size_t i = 0; i < b.labels.size(); ++i)
      EXPECT_EQ(ds.glyphs[b.glyph_indices[i]].class_id, b.labels[i]);
  }
}

TEST(SupervisedBatch, FourFromTwoClasses) {
  const Dataset ds = counted_dataset(2, 5);
  Rng rng(3);
  const auto b = sample_supervised_batch(ds, 4, rng);
  std::map<int, int> count;
  for (int l : b.labels) ++count[l];
  EXPECT_EQ(count, (std::map<int, int>{{0, 2}, {1, 2}}));
  EXPECT_EQ(std::set<std::size_t>(b.glyph_indices.begin(), b.glyph_indices.end()).size(), 4u);
}

TEST(SupervisedBatch, SingletonClassesAreAnError) {
  const Dataset ds = counted_dataset(10, 1);
  Rng rng(1);
  EXPECT_THROW(sample_supervised_batch(ds, 8, rng), Error);
}

TEST(SupervisedBatch, TooSmallBatchIsAnError) {
  const Dataset ds = counted_dataset(4, 4);
  Rng rng(1);
  EXPECT_THROW(sample_supervised_batch(ds, 3, rng), Error);
}

TEST(SupervisedBatch, ReproducibleUnderFixedSeed) {
  const Dataset ds = counted_dataset(30, 6);
  Rng a(77), b(77);
  for (int i = 0; i < 5; ++i) {
    const auto x = sample_supervised_batch(ds, 32, a);
    const auto y = sample_supervised_batch(ds, 32, b);
    EXPECT_EQ(x.glyph_indices, y.glyph_indices);
    EXPECT_EQ(x.labels, y.labels);
  }
}

TEST(ClassPairs, TwoInstanceClassUsesBoth) {
  Dataset ds;
  GlyphImage a = l_shape(), b = glyph_with({{10, 10}, {10, 11}});
  a.class_id = 0;
  a.instance_id = a.source_instance = 0;
  b.instance_id = b.source_instance = 1;
  ds.glyphs = {a, b};
  refresh_summary(ds);
  AugmentationParams p;
  p.with_probability(0.0);
  Rng rng(4);
  const auto pairs = sample_class_pairs(ds, 1, rng, p);
  ASSERT_EQ(pairs.size(), 1u);
  const std::set<int> got{pairs[0].first.instance_id, pairs[0].second.instance_id};
  EXPECT_EQ(got, (std::set<int>{0, 1}));
  EXPECT_NE(pairs[0].first.pixels, pairs[0].second.pixels);
}

TEST(ClassPairs, ZeroClassesGiveNoPairs) {
  const Dataset ds = counted_dataset(3, 3);
  Rng rng(1);
  EXPECT_TRUE(sample_class_pairs(ds, 0, rng).empty());
}

TEST(ClassPairs, ViewsAreDistinctGenuineInstances) {
  testing::SyntheticSpec spec;
  const Dataset ds = generate_augmented_set(testing::make_dataset(spec), {}, 3);
  Rng rng(8);
  const auto pairs = sample_class_pairs(ds, 10, rng);
  EXPECT_EQ(pairs.size(), 10u);
  for (const auto& [x, y] : pairs) {
    EXPECT_EQ(x.class_id, y.class_id);
    EXPECT_NE(x.instance_id, y.instance_id);
    EXPECT_FALSE(x.is_augmented());
    EXPECT_FALSE(y.is_augmented());
  }
}

TEST(ClassPairs, SingleInstanceClassExcludedWithWarning) {
  Dataset ds = counted_dataset(2, 3);
  GlyphImage lone = glyph_with({{50, 50}}, 9);
  ds.glyphs.push_back(lone);
  refresh_summary(ds);
  Rng rng(1);
  Diagnostics diag;
  const auto pairs = sample_class_pairs(ds, 5, rng, {}, &diag);
  EXPECT_EQ(pairs.size(), 2u);
  EXPECT_GE(diag.count(), 1u);
}

TEST(ClassPairs, DeterministicAndThreadIndependent) {
  testing::SyntheticSpec spec;
  const Dataset ds = testing::make_dataset(spec);
  Rng a(21), b(21);
  const auto x = sample_class_pairs(ds, 12, a, {}, nullptr, 1);
  const auto y = sample_class_pairs(ds, 12, b, {}, nullptr, 3);
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(x[i].first.pixels, y[i].first.pixels);
    EXPECT_EQ(x[i].second.pixels, y[i].second.pixels);
  }
}

// ------------------------------------------------------ similarity levels

TEST(SimilarityLevels, SymmetricWithUnrelatedDefault) {
  std::istringstream in("# curated\nGreek\tCyrillic\t2\nHiragana\tKatakana\t1\n");
  const auto t = parse_similarity_table(in);
  EXPECT_EQ(t.level("Greek", "Cyrillic"), 2);
  EXPECT_EQ(t.level("Cyrillic", "Greek"), 2);
  EXPECT_EQ(t.level("Katakana", "Hiragana"), 1);
  EXPECT_EQ(t.level("Greek", "Hiragana"), SimilarityLevelTable::kUnrelated);
}

TEST(SimilarityLevels, InvalidEntriesAreErrors) {
  SimilarityLevelTable t;
  EXPECT_THROW(t.set("Greek", "Greek", 1), Error);
  EXPECT_THROW(t.set("Greek", "Latin", 0), Error);
  EXPECT_THROW(t.set("Greek", "Latin", 4), Error);
  t.set("Greek", "Latin", 2);
  EXPECT_THROW(t.set("Latin", "Greek", 3), Error);
  std::istringstream bad("Greek\tLatin\tx\n");
  EXPECT_THROW(parse_similarity_table(bad), Error);
}

}  // namespace
}  // namespace glyphsim::dataset
