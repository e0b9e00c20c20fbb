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

#include <cstring>

#include "glyphsim/encoder/checkpoint.hpp"
#include "glyphsim/encoder/ema.hpp"
#include "glyphsim/encoder/encoder.hpp"
#include "glyphsim/encoder/predictor.hpp"
#include "glyphsim/losses/byol.hpp"
#include "glyphsim/losses/supcon.hpp"
#include "support/synthetic_corpus.hpp"
#include "support/temp_dir.hpp"

namespace glyphsim::encoder {
namespace {

using testing::TempDir;

EncoderConfig compact(int d = 32, std::uint64_t seed = 3) {
  return {"compact_cnn", d, seed};
}

std::vector<dataset::GlyphImage> sample_images(int n, std::uint64_t seed = 1) {
  testing::SyntheticSpec spec;
  spec.seed = seed;
  spec.instances = 2;
  auto ds = testing::make_dataset(spec);
  ds.glyphs.resize(static_cast<std::size_t>(n));
  return ds.glyphs;
}

bool bitwise_equal(const ParamSet<float>& a, const ParamSet<float>& b) {
  if (!a.same_layout(b)) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::memcmp(a[i].values.data(), b[i].values.data(),
                    sizeof(float) * static_cast<std::size_t>(a[i].values.size())) != 0)
      return false;
  return true;
}

// ------------------------------------------------------------ architecture

TEST(Architecture, SimpleCnnParameterCount) {
  // Sum over the layer list: 3x3 convs without bias, GroupNorm affine
  // pairs, linear head with bias.
  const std::int64_t convs = 9 * (1 * 64 + 64 * 64 + 64 * 128 + 128 * 128 + 128 * 256 +
                                  256 * 256 + 256 * 256 + 256 * 256);
  const std::int64_t norms = 2 * (64 + 64 + 128 + 128 + 256 + 256 + 256 + 256);
  const std::int64_t head = 256 * 128 + 128;
  const auto p = init_encoder<float>({"simple_cnn", 128, 0});
  EXPECT_EQ(p.tensors.parameter_count(), convs + norms + head);
  EXPECT_EQ(p.tensors.parameter_count(), 2358720);
  EXPECT_GE(p.tensors.parameter_count(), 1500000);
  EXPECT_LE(p.tensors.parameter_count(), 3500000);
}

TEST(Architecture, InitIsSeeded) {
  const auto a = init_encoder<float>(compact(32, 5));
  const auto b = init_encoder<float>(compact(32, 5));
  const auto c = init_encoder<float>(compact(32, 6));
  EXPECT_TRUE(bitwise_equal(a.tensors, b.tensors));
  EXPECT_FALSE(bitwise_equal(a.tensors, c.tensors));
}

TEST(Architecture, InvalidConfigsAreErrors) {
  EXPECT_THROW(init_encoder<float>({"simple_cnn", 0, 0}), Error);
  EXPECT_THROW(init_encoder<float>({"resnet50", 128, 0}), Error);
}

// ------------------------------------------------------------------ embed

TEST(Embed, OutputsAreUnitNorm) {
  const auto p = init_encoder<float>(compact(64));
  const auto images = sample_images(12);
  for (const auto& z : embed(p, std::span<const dataset::GlyphImage>(images)))
    EXPECT_NEAR(z.norm(), 1.0, 1e-6);
}

TEST(Embed, DuplicatedImageGivesIdenticalRows) {
  const auto p = init_encoder<float>(compact());
  auto images = sample_images(3);
  images.push_back(images[1]);
  const Mat<float> z = embed_matrix(p, std::span<const dataset::GlyphImage>(images));
  EXPECT_TRUE((z.row(1).array() == z.row(3).array()).all());
}

TEST(Embed, BatchMatchesOneByOneAndThreads) {
  const auto p = init_encoder<float>(compact());
  const auto images = sample_images(8);
  const Mat<float> batch = embed_matrix(p, std::span<const dataset::GlyphImage>(images), 1);
  const Mat<float> threaded = embed_matrix(p, std::span<const dataset::GlyphImage>(images), 4);
  EXPECT_EQ(batch, threaded);
  for (std::size_t i = 0; i < images.size(); ++i) {
    const Mat<float> one =
        embed_matrix(p, std::span<const dataset::GlyphImage>(&images[i], 1));
    EXPECT_LE((one.row(0) - batch.row(static_cast<Eigen::Index>(i))).cwiseAbs().maxCoeff(), 1e-5);
  }
}

TEST(Embed, SimpleCnnOutputsAreUnitNorm) {
  const auto p = init_encoder<float>({"simple_cnn", 128, 1});
  const auto images = sample_images(2);
  for (const auto& z : embed(p, std::span<const dataset::GlyphImage>(images)))
    EXPECT_NEAR(z.norm(), 1.0, 1e-6);
}

TEST(Embed, ZeroFeaturesFallBackToBasisVectorWithWarning) {
  auto p = init_encoder<float>(compact(16));
  for (auto& t : p.tensors) t.values.setZero();
  const auto images = sample_images(2);
  Diagnostics diag;
  const Mat<float> z = embed_matrix(p, std::span<const dataset::GlyphImage>(images), 1, &diag);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    EXPECT_EQ(z(i, 0), 1.0f);
    EXPECT_EQ(z.row(i).squaredNorm(), 1.0f);
  }
  EXPECT_EQ(diag.count(), 2u);
}

// -------------------------------------------------------- gradient checks

// ReLU on/off pattern of every unit for the four images.
std::vector<bool> relu_pattern(const std::vector<ForwardCache<double>>& caches) {
  std::vector<bool> on;
  for (const auto& c : caches)
    for (std::size_t i = 1; i < c.activations.size(); ++i)
      for (Eigen::Index k = 0; k < c.activations[i].size(); ++k)
        on.push_back(c.activations[i].data()[k] > 0.0);
  return on;
}

// Central differences with step h on sampled coordinates. Coordinates whose
// +-h probes switch any ReLU are not differentiable over the probe interval
// and are only counted; the rest must agree to relative 1e-3.
template <typename Loss>
void check_encoder_gradient(const Loss& loss_and_dz, int samples_per_tensor, double h,
                            int min_checked) {
  const auto images = sample_images(4, 9);
  const EncoderParams<double> params = init_encoder<float>(compact(16, 11)).cast<double>();
  const Network<double> net(params.config);

  auto run = [&](const ParamSet<double>& p, std::vector<ForwardCache<double>>& caches) {
    Mat<double> z(4, 16);
    for (int i = 0; i < 4; ++i) z.row(i) = net.forward(p, images[i].pixels, &caches[i]).transpose();
    return loss_and_dz(z);
  };

  std::vector<ForwardCache<double>> caches(4);
  const Mat<double> dz = run(params.tensors, caches).second;
  const auto base_pattern = relu_pattern(caches);
  ParamSet<double> grads = params.tensors.zeros_like();
  for (int i = 0; i < 4; ++i)
    net.backward(params.tensors, caches[i], Vec<double>(dz.row(i).transpose()), grads);

  Rng rng(17);
  double err2 = 0.0, ref2 = 0.0;
  int checked = 0, kinked = 0;
  for (std::size_t t = 0; t < params.tensors.size(); ++t) {
    for (int s = 0; s < samples_per_tensor; ++s) {
      const auto k = static_cast<Eigen::Index>(rng.below(params.tensors[t].values.size()));
      ParamSet<double> plus = params.tensors, minus = params.tensors;
      plus[t].values[k] += h;
      minus[t].values[k] -= h;
      std::vector<ForwardCache<double>> cp(4), cm(4);
      const double lp = run(plus, cp).first, lm = run(minus, cm).first;
      if (relu_pattern(cp) != base_pattern || relu_pattern(cm) != base_pattern) {
        ++kinked;
        continue;
      }
      const double numeric = (lp - lm) / (2 * h);
      const double analytic = grads[t].values[k];
      const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-7});
      EXPECT_LE(std::abs(numeric - analytic), 1e-3 * scale + 1e-9)
          << params.tensors[t].name << "[" << k << "] analytic " << analytic
          << " numeric " << numeric;
      err2 += (numeric - analytic) * (numeric - analytic);
      ref2 += numeric * numeric;
      ++checked;
    }
  }
  ::testing::Test::RecordProperty("kinked_coordinates", kinked);
  EXPECT_GE(checked, min_checked);
  EXPECT_GT(ref2, 0.0);
  EXPECT_LE(std::sqrt(err2 / ref2), 1e-3);
}

TEST(GradientCheck, EncoderWithSupConMatchesFiniteDifferences) {
  const std::vector<int> labels{0, 0, 1, 1};
  check_encoder_gradient(
      [&](const Mat<double>& z) {
        auto r = losses::supcon_loss(z, std::span<const int>(labels), 0.1);
        return std::make_pair(static_cast<double>(r.loss), r.grad);
      },
      6, 1e-4, 60);
}

TEST(GradientCheck, EncoderWithByolMatchesFiniteDifferences) {
  // Rows 0/1 are the first views, rows 2/3 the second views; a fixed random
  // target stands in for the stop-gradient branch.
  Rng rng(23);
  Mat<double> target(4, 16);
  for (Eigen::Index i = 0; i < target.size(); ++i) target.data()[i] = rng.normal();
  check_encoder_gradient(
      [&](const Mat<double>& z) {
        const Mat<double> p1 = z.topRows(2), p2 = z.bottomRows(2);
        auto r = losses::byol_loss<double>(p1, p2, target.topRows(2), target.bottomRows(2));
        Mat<double> dz(4, 16);
        dz << r.dp1, r.dp2;
        return std::make_pair(static_cast<double>(r.loss), dz);
      },
      6, 1e-4, 60);
}

TEST(GradientCheck, PredictorMatchesFiniteDifferences) {
  auto p = init_predictor<double>(8, 12, 5);
  Rng rng(2);
  Vec<double> z(8), target(8);
  for (int i = 0; i < 8; ++i) {
    z[i] = rng.normal();
    target[i] = rng.normal();
  }
  auto loss_at = [&](const PredictorParams<double>& q, const Vec<double>& in) {
    return static_cast<double>(losses::cosine_prediction_distance(predictor_forward(q, in), target));
  };
  PredictorCache<double> cache;
  const Vec<double> out = predictor_forward(p, z, &cache);
  ParamSet<double> grads = p.tensors.zeros_like();
  const Vec<double> dz = predictor_backward(
      p, cache, losses::cosine_prediction_distance_grad(out, target), grads);
  const double h = 1e-5;
  for (std::size_t t = 0; t < p.tensors.size(); ++t)
    for (Eigen::Index k = 0; k < p.tensors[t].values.size(); k += 3) {
      auto plus = p, minus = p;
      plus.tensors[t].values[k] += h;
      minus.tensors[t].values[k] -= h;
      const double numeric = (loss_at(plus, z) - loss_at(minus, z)) / (2 * h);
      EXPECT_NEAR(grads[t].values[k], numeric, 1e-3 * std::max(std::abs(numeric), 1e-4));
    }
  for (int k = 0; k < 8; ++k) {
    Vec<double> zp = z, zm = z;
    zp[k] += h;
    zm[k] -= h;
    const double numeric = (loss_at(p, zp) - loss_at(p, zm)) / (2 * h);
    EXPECT_NEAR(dz[k], numeric, 1e-3 * std::max(std::abs(numeric), 1e-4));
  }
}

// -------------------------------------------------------------- predictor

TEST(Predictor, ZeroWeightsGiveZeroOutput) {
  auto p = init_predictor<float>(16, 32, 1);
  for (auto& t : p.tensors) t.values.setZero();
  EXPECT_EQ(predictor_forward<float>(p, Vec<float>::Ones(16)), Vec<float>::Zero(16));
}

TEST(Predictor, IdentityLayersWithBypassReturnInput) {
  auto p = init_predictor<float>(6, 6, 1);
  for (auto& t : p.tensors) t.values.setZero();
  for (const char* name : {"pred.fc1.weight", "pred.fc2.weight"})
    Eigen::Map<Mat<float>>(p.tensors.get(name).values.data(), 6, 6).setIdentity();
  const Vec<float> z = (Vec<float>(6) << 1, -2, 3, -4, 5, -6).finished();
  EXPECT_EQ(predictor_forward<float>(p, z, nullptr, true), z);
  EXPECT_NE(predictor_forward<float>(p, z), z);  // ReLU clips the negatives
}

TEST(Predictor, DimensionMismatchIsAnError) {
  const auto p = init_predictor<float>(16, 32, 1);
  EXPECT_THROW(predictor_forward<float>(p, Vec<float>::Ones(8)), Error);
  EXPECT_THROW(init_predictor<float>(0, 32, 1), Error);
}

// -------------------------------------------------------------------- EMA

ParamSet<double> scalar_set(double v) {
  ParamSet<double> p;
  p.add("w", {1}).values[0] = v;
  return p;
}

TEST(Ema, ExactCases) {
  auto xi = scalar_set(2.0);
  ema_update(xi, scalar_set(4.0), 1.0);
  EXPECT_EQ(xi[0].values[0], 2.0);
  ema_update(xi, scalar_set(4.0), 0.0);
  EXPECT_EQ(xi[0].values[0], 4.0);
  auto half = scalar_set(2.0);
  ema_update(half, scalar_set(4.0), 0.5);
  EXPECT_EQ(half[0].values[0], 3.0);
}

TEST(Ema, ContractionTowardStudent) {
  const auto theta = init_encoder<double>(compact(16, 1));
  auto xi = init_encoder<double>(compact(16, 2));
  const double kappa = 0.9;
  const auto before = xi.tensors;
  ema_update(xi.tensors, theta.tensors, kappa);
  for (std::size_t t = 0; t < xi.tensors.size(); ++t) {
    const auto after_gap = (xi.tensors[t].values - theta.tensors[t].values).cwiseAbs();
    const auto before_gap = (before[t].values - theta.tensors[t].values).cwiseAbs();
    EXPECT_TRUE((after_gap.array() <= kappa * before_gap.array() + 1e-15).all());
  }
}

TEST(Ema, InvalidInputsAreErrors) {
  auto xi = scalar_set(1.0);
  EXPECT_THROW(ema_update(xi, scalar_set(1.0), 1.5), Error);
  EXPECT_THROW(ema_update(xi, scalar_set(1.0), -0.1), Error);
  ParamSet<double> other;
  other.add("w", {2});
  EXPECT_THROW(ema_update(xi, other, 0.5), Error);
}

// ------------------------------------------------------------- checkpoint

Checkpoint sample_checkpoint(bool with_predictor) {
  Checkpoint c;
  c.encoder = init_encoder<float>(compact(32, 4));
  if (with_predictor) c.predictor = init_predictor<float>(32, 64, 9);
  c.meta.stage = "stage1";
  c.meta.step = 1234;
  c.meta.config_hash = "0123456789abcdef";
  c.meta.extra = {{"note", "fixture"}};
  return c;
}

TEST(Checkpoint, RoundTripIsBitExact) {
  TempDir tmp;
  for (bool pred : {false, true}) {
    const Checkpoint c = sample_checkpoint(pred);
    save_checkpoint(tmp / "c.ckpt", c);
    const Checkpoint back = load_checkpoint(tmp / "c.ckpt");
    EXPECT_TRUE(bitwise_equal(back.encoder.tensors, c.encoder.tensors));
    EXPECT_EQ(back.encoder.config.architecture, "compact_cnn");
    EXPECT_EQ(back.encoder.config.embedding_dim, 32);
    EXPECT_EQ(back.meta.stage, "stage1");
    EXPECT_EQ(back.meta.step, 1234);
    EXPECT_EQ(back.meta.config_hash, "0123456789abcdef");
    EXPECT_EQ(back.meta.extra, c.meta.extra);
    ASSERT_EQ(back.predictor.has_value(), pred);
    if (pred) {
      EXPECT_TRUE(bitwise_equal(back.predictor->tensors, c.predictor->tensors));
      EXPECT_EQ(back.predictor->hidden, 64);
    }
  }
}

TEST(Checkpoint, SavingTwiceGivesIdenticalFiles) {
  TempDir tmp;
  save_checkpoint(tmp / "a.ckpt", sample_checkpoint(true));
  save_checkpoint(tmp / "b.ckpt", sample_checkpoint(true));
  EXPECT_EQ(testing::read_file(tmp / "a.ckpt"), testing::read_file(tmp / "b.ckpt"));
}

TEST(Checkpoint, HeaderRecordsMetadata) {
  TempDir tmp;
  save_checkpoint(tmp / "c.ckpt", sample_checkpoint(false));
  const auto f = framed::read_framed(tmp / "c.ckpt", kCheckpointMagic, "checkpoint");
  const auto& meta = f.header.at("metadata");
  EXPECT_EQ(meta.at("normalization"), kNormalization);
  EXPECT_EQ(meta.at("activation"), kActivation);
  EXPECT_EQ(meta.at("tool_version"), kVersion);
  EXPECT_EQ(meta.at("role"), "teacher");
  const auto& first = f.header.at("tensors").at(0);
  EXPECT_EQ(first.at("dtype"), "f32");
  EXPECT_EQ(first.at("offset"), 0);
  EXPECT_EQ(f.header.at("checksum").at("algorithm"), "crc32");
  EXPECT_EQ(f.header.at("checksum").at("value").get<std::uint32_t>(), framed::crc32_of(f.payload));
}

TEST(Checkpoint, TruncatedFileFailsChecksum) {
  TempDir tmp;
  save_checkpoint(tmp / "c.ckpt", sample_checkpoint(false));
  std::string bytes = testing::read_file(tmp / "c.ckpt");
  testing::write_file(tmp / "t.ckpt", bytes.substr(0, bytes.size() - 100));
  try {
    load_checkpoint(tmp / "t.ckpt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("checksum"), std::string::npos) << e.what();
  }
}

TEST(Checkpoint, FlippedPayloadByteFailsChecksum) {
  TempDir tmp;
  save_checkpoint(tmp / "c.ckpt", sample_checkpoint(false));
  std::string bytes = testing::read_file(tmp / "c.ckpt");
  bytes[bytes.size() - 7] ^= 0x10;
  testing::write_file(tmp / "f.ckpt", bytes);
  EXPECT_THROW(load_checkpoint(tmp / "f.ckpt"), Error);
}

TEST(Checkpoint, VersionMismatchIsAnError) {
  TempDir tmp;
  framed::Framed f;
  f.header["format_version"] = 99;
  f.header["tensors"] = nlohmann::json::array();
  f.header["metadata"] = nlohmann::json::object();
  framed::write_framed(tmp / "v.ckpt", kCheckpointMagic, std::move(f));
  try {
    load_checkpoint(tmp / "v.ckpt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("version 99"), std::string::npos);
  }
}

TEST(Checkpoint, WrongMagicIsAnError) {
  TempDir tmp;
  testing::write_file(tmp / "x.ckpt", "definitely not a checkpoint at all");
  EXPECT_THROW(load_checkpoint(tmp / "x.ckpt"), Error);
  EXPECT_THROW(load_checkpoint(tmp / "absent.ckpt"), Error);
}

TEST(Checkpoint, TeacherReusedAsStudentAndTarget) {
  TempDir tmp;
  save_checkpoint(tmp / "t.ckpt", sample_checkpoint(false));
  const Checkpoint teacher = load_checkpoint(tmp / "t.ckpt");
  EXPECT_EQ(teacher.encoder.role, Role::kTeacher);
  const auto student = with_role(teacher.encoder, Role::kStudent);
  const auto target = with_role(teacher.encoder, Role::kTarget);
  EXPECT_EQ(student.role, Role::kStudent);
  EXPECT_EQ(target.role, Role::kTarget);
  EXPECT_TRUE(bitwise_equal(student.tensors, teacher.encoder.tensors));
  Checkpoint out;
  out.encoder = student;
  save_checkpoint(tmp / "s.ckpt", out);
  EXPECT_EQ(load_checkpoint(tmp / "s.ckpt").encoder.role, Role::kStudent);
}

}  // namespace
}  // namespace glyphsim::encoder
