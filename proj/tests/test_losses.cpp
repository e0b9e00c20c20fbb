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

#include <numeric>

#include "glyphsim/losses/byol.hpp"
#include "glyphsim/losses/supcon.hpp"
#include "support/oracles.hpp"

namespace glyphsim::losses {
namespace {

using testing::Rows;

std::vector<int> random_labels(Rng& rng, int n, int classes) {
  while (true) {
    std::vector<int> y(static_cast<std::size_t>(n));
    for (auto& v : y) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(classes)));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (y[i] == y[j]) return y;
  }
}

Rows random_rows(Rng& rng, int n, int d) {
  Rows z;
  for (int i = 0; i < n; ++i) z.push_back(testing::random_unit(rng, d));
  return z;
}

double supcon(const Rows& z, const std::vector<int>& y, double t) {
  return supcon_loss(testing::to_matrix(z), std::span<const int>(y), t, false).loss;
}

// ------------------------------------------------------------------ SupCon

TEST(SupCon, SixSampleBatchMatchesOracle) {
  Rng rng(1);
  const Rows z = random_rows(rng, 6, 16);
  const std::vector<int> y{0, 0, 1, 1, 2, 2};
  EXPECT_NEAR(supcon(z, y, 0.1), testing::supcon_oracle(z, y, 0.1), 1e-6);
}

TEST(SupCon, RandomBatchesMatchOracle) {
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 6 + static_cast<int>(rng.below(27));
    const int g = 2 + static_cast<int>(rng.below(7));
    const double t = std::array{0.05, 0.1, 0.3}[rng.below(3)];
    const Rows z = random_rows(rng, n, 24);
    const auto y = random_labels(rng, n, g);
    const auto r = supcon_loss(testing::to_matrix(z), std::span<const int>(y), t);
    EXPECT_NEAR(r.loss, testing::supcon_oracle(z, y, t), 1e-6);
    const auto terms = testing::supcon_oracle_terms(z, y, t);
    ASSERT_EQ(r.per_anchor.size(), terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) EXPECT_NEAR(r.per_anchor[i], terms[i], 1e-6);
  }
}

TEST(SupCon, AnchorsWithoutPositivesAreExcluded) {
  Rng rng(3);
  const Rows z = random_rows(rng, 5, 8);
  const std::vector<int> y{0, 0, 1, 2, 3};
  const auto r = supcon_loss(testing::to_matrix(z), std::span<const int>(y), 0.1);
  EXPECT_EQ(r.anchors, (std::vector<int>{0, 1}));
  // A(i) holds only the positive, so each term is -log(1) = 0.
  EXPECT_NEAR(r.loss, 0.0, 1e-12);
  EXPECT_EQ(r.grad.row(2).norm(), 0.0);
}

TEST(SupCon, IdenticalPairGivesZeroLoss) {
  const Rows z{{1, 0, 0}, {1, 0, 0}};
  EXPECT_NEAR(supcon(z, {5, 5}, 0.1), 0.0, 1e-12);
}

TEST(SupCon, AllLabelsDistinctIsAnError) {
  Rng rng(4);
  const Rows z = random_rows(rng, 4, 8);
  try {
    supcon(z, {0, 1, 2, 3}, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "no positive pairs in batch");
  }
}

TEST(SupCon, InvalidInputsAreErrors) {
  Rng rng(5);
  const Rows z = random_rows(rng, 4, 8);
  EXPECT_THROW(supcon(z, {0, 0, 1, 1}, 0.0), Error);
  EXPECT_THROW(supcon(z, {0, 0, 1, 1}, -0.1), Error);
  EXPECT_THROW(supcon(z, {0, 0, 1}, 0.1), Error);
  Rows bad = z;
  bad[0][0] += 0.1;
  EXPECT_THROW(supcon(bad, {0, 0, 1, 1}, 0.1), Error);
  EXPECT_THROW(supcon({z[0]}, {0}, 0.1), Error);
}

TEST(SupCon, StableAtLowTemperature) {
  const Rows z{{1, 0}, {1, 0}, {-1, 0}, {-1, 0}};
  const double l = supcon(z, {0, 0, 1, 1}, 0.05);
  EXPECT_TRUE(std::isfinite(l));
  EXPECT_NEAR(l, std::log1p(2 * std::exp(-2.0 / 0.05)), 1e-12);
}

TEST(SupCon, InvariantToCommonRotation) {
  Rng rng(6);
  const int d = 8;
  const Rows z = random_rows(rng, 10, d);
  const auto y = random_labels(rng, 10, 3);
  // Random orthogonal matrix from a QR factorization.
  Eigen::MatrixXd a(d, d);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
  const Mat<double> zm = testing::to_matrix(z);
  const Mat<double> rotated = zm * q;
  EXPECT_NEAR(supcon_loss(rotated, std::span<const int>(y), 0.1).loss,
              supcon_loss(zm, std::span<const int>(y), 0.1).loss, 1e-12);
}

TEST(SupCon, InvariantToBatchPermutation) {
  Rng rng(7);
  Rows z = random_rows(rng, 12, 8);
  auto y = random_labels(rng, 12, 4);
  const double before = supcon(z, y, 0.2);
  std::vector<std::size_t> perm(12);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  Rows zp;
  std::vector<int> yp;
  for (auto p : perm) {
    zp.push_back(z[p]);
    yp.push_back(y[p]);
  }
  EXPECT_NEAR(supcon(zp, yp, 0.2), before, 1e-12);
}

TEST(SupCon, TermDecreasesAsPositiveApproachesAnchor) {
  // Anchor 0 with positive 1; the positive slides toward the anchor on the
  // unit circle of the (e0, e1) plane while everything else stays put.
  Rng rng(8);
  Rows z = random_rows(rng, 6, 6);
  z[0] = {1, 0, 0, 0, 0, 0};
  const std::vector<int> y{0, 0, 1, 1, 2, 2};
  double previous = std::numeric_limits<double>::infinity();
  for (double angle = 3.0; angle >= 0.0; angle -= 0.25) {
    z[1] = {std::cos(angle), std::sin(angle), 0, 0, 0, 0};
    const auto r = supcon_loss(testing::to_matrix(z), std::span<const int>(y), 0.1);
    EXPECT_LT(r.per_anchor[0], previous);
    previous = r.per_anchor[0];
  }
}

TEST(SupCon, GradientMatchesFiniteDifferences) {
  Rng rng(9);
  const Rows z = random_rows(rng, 8, 5);
  const std::vector<int> y{0, 0, 0, 1, 1, 2, 2, 3};
  const Mat<double> zm = testing::to_matrix(z);
  const auto r = supcon_loss(zm, std::span<const int>(y), 0.2);
  const double h = 1e-7;
  for (Eigen::Index i = 0; i < zm.rows(); ++i)
    for (Eigen::Index k = 0; k < zm.cols(); ++k) {
      Mat<double> p = zm, m = zm;
      p(i, k) += h;
      m(i, k) -= h;
      const double numeric = (supcon_loss(p, std::span<const int>(y), 0.2, false).loss -
                              supcon_loss(m, std::span<const int>(y), 0.2, false).loss) /
                             (2 * h);
      EXPECT_NEAR(r.grad(i, k), numeric, 1e-6 + 1e-4 * std::abs(numeric));
    }
}

// -------------------------------------------------------------------- BYOL

TEST(CosineDistance, Extremes) {
  const Vec<double> p = (Vec<double>(3) << 1, 2, 3).finished();
  const Vec<double> q = (Vec<double>(3) << 3, 0, -1).finished();
  EXPECT_NEAR(cosine_prediction_distance(p, p), 0.0, 1e-15);
  EXPECT_NEAR(cosine_prediction_distance(p, Vec<double>(2.5 * p)), 0.0, 1e-15);
  EXPECT_NEAR(cosine_prediction_distance(p, q), 2.0, 1e-15);
  EXPECT_NEAR(cosine_prediction_distance(p, Vec<double>(-p)), 4.0, 1e-15);
  EXPECT_THROW(cosine_prediction_distance(p, Vec<double>(Vec<double>::Zero(3))), Error);
}

TEST(Byol, PerfectPredictionIsZero) {
  Rng rng(1);
  const Mat<double> z1 = testing::to_matrix(random_rows(rng, 4, 8));
  const Mat<double> z2 = testing::to_matrix(random_rows(rng, 4, 8));
  EXPECT_NEAR(byol_loss<double>(z2, z1, z1, z2).loss, 0.0, 1e-14);
  EXPECT_NEAR(byol_loss<double>(Mat<double>(-z2), Mat<double>(-z1), z1, z2).loss, 8.0, 1e-12);
}

TEST(Byol, ThreeRowFixtureComposesDistances) {
  Rng rng(2);
  Rows p1, p2, z1, z2;
  for (int i = 0; i < 3; ++i)
    for (Rows* r : {&p1, &p2, &z1, &z2}) {
      std::vector<double> v(5);
      for (auto& x : v) x = rng.normal();
      r->push_back(v);
    }
  double want = 0;
  for (int i = 0; i < 3; ++i)
    want += testing::cosine_distance_oracle(p1[i], z2[i]) +
            testing::cosine_distance_oracle(p2[i], z1[i]);
  want /= 3;
  const auto r = byol_loss<double>(testing::to_matrix(p1), testing::to_matrix(p2),
                                   testing::to_matrix(z1), testing::to_matrix(z2));
  EXPECT_NEAR(r.loss, want, 1e-7);
}

TEST(Byol, BoundedAndSymmetricUnderViewSwap) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Mat<double> m[4];
    for (auto& x : m) {
      x.resize(6, 7);
      for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
    }
    const double l = byol_loss<double>(m[0], m[1], m[2], m[3]).loss;
    EXPECT_GE(l, 0.0);
    EXPECT_LE(l, 8.0);
    EXPECT_NEAR(byol_loss<double>(m[1], m[0], m[3], m[2]).loss, l, 1e-12);
  }
}

TEST(Byol, TargetGradientIsExactlyZero) {
  Rng rng(4);
  Mat<double> m[4];
  for (auto& x : m) {
    x.resize(3, 4);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  }
  const auto r = byol_loss<double>(m[0], m[1], m[2], m[3]);
  EXPECT_TRUE((r.dz1.array() == 0.0).all());
  EXPECT_TRUE((r.dz2.array() == 0.0).all());
}

TEST(Byol, PredictionGradientMatchesFiniteDifferences) {
  Rng rng(5);
  Mat<double> m[4];
  for (auto& x : m) {
    x.resize(3, 6);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  }
  const auto r = byol_loss<double>(m[0], m[1], m[2], m[3]);
  const double h = 1e-6;
  for (int which = 0; which < 2; ++which)
    for (Eigen::Index i = 0; i < m[which].size(); ++i) {
      Mat<double> plus[4] = {m[0], m[1], m[2], m[3]}, minus[4] = {m[0], m[1], m[2], m[3]};
      plus[which].data()[i] += h;
      minus[which].data()[i] -= h;
      const double numeric = (byol_loss<double>(plus[0], plus[1], plus[2], plus[3]).loss -
                              byol_loss<double>(minus[0], minus[1], minus[2], minus[3]).loss) /
                             (2 * h);
      const double analytic = (which == 0 ? r.dp1 : r.dp2).data()[i];
      EXPECT_LE(std::abs(analytic - numeric), 1e-3 * std::max(std::abs(numeric), 1e-6));
    }
}

TEST(Byol, InvalidInputsAreErrors) {
  const Mat<double> a = Mat<double>::Ones(2, 3);
  EXPECT_THROW(byol_loss<double>(a, a, a, Mat<double>::Ones(3, 3)), Error);
  EXPECT_THROW(byol_loss<double>(a, a, a, Mat<double>::Zero(2, 3)), Error);
  EXPECT_THROW(byol_loss<double>(Mat<double>(0, 3), Mat<double>(0, 3), Mat<double>(0, 3),
                                 Mat<double>(0, 3)),
               Error);
}

}  // namespace
}  // namespace glyphsim::losses
