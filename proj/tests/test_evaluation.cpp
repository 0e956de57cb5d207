// Copyright 2026 The depthpose Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "depthpose/error.hpp"
#include "depthpose/evaluation.hpp"

namespace depthpose {
namespace {

Trajectory Spiral(std::size_t n, double t0 = 0.0) {
  Trajectory traj;
  for (std::size_t i = 0; i < n; ++i) {
    Se3Tangent xi;
    xi.rot = Vec3(0.02 * i, 0.1 * std::sin(0.3 * i), 0.05);
    xi.trans = Vec3(std::cos(0.4 * i), 0.2 * i, std::sin(0.4 * i));
    traj.push_back({t0 + 0.1 * i, ExpMap(xi)});
  }
  return traj;
}

Trajectory Transformed(const Trajectory& traj, const Se3Transform& g) {
  Trajectory out = traj;
  for (TimedPose& p : out) p.pose = g * p.pose;
  return out;
}

TEST(Evaluation, AssociationIsOneToOneWithinTolerance) {
  const std::vector<double> a = {0.0, 0.10, 0.20, 0.31};
  const std::vector<double> b = {0.005, 0.101, 0.102, 0.25};
  const std::vector<PoseMatch> m = AssociateTimestamps(a, b, 0.02);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].est, 0u);
  EXPECT_EQ(m[0].gt, 0u);
  EXPECT_EQ(m[1].est, 1u);
  EXPECT_EQ(m[1].gt, 1u);
}

TEST(Evaluation, TrajectoryValidation) {
  Trajectory t = Spiral(3);
  t[2].timestamp = t[1].timestamp;
  EXPECT_THROW(ValidateTrajectory(t), Error);
}

TEST(Evaluation, MeanStdIsPopulation) {
  const MeanStd m = ComputeMeanStd({1.0, 3.0});
  EXPECT_DOUBLE_EQ(m.mean, 2.0);
  EXPECT_DOUBLE_EQ(m.std, 1.0);
}

TEST(Evaluation, IdenticalTrajectoriesGiveZeroError) {
  const Trajectory t = Spiral(20);
  EXPECT_NEAR(ComputeAte(t, t).mean, 0.0, 1e-12);
  EXPECT_NEAR(ComputeRe(t, t).mean, 0.0, 1e-12);
  EXPECT_NEAR(ComputeAteWindowed(t, t, 5).mean, 0.0, 1e-12);
}

TEST(Evaluation, AteAndReAreRigidInvariant) {
  const Trajectory gt = Spiral(25);
  Trajectory est = gt;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 0.01);
  for (TimedPose& p : est) {
    Se3Tangent xi;
    xi.rot = Vec3(n(rng), n(rng), n(rng));
    xi.trans = Vec3(n(rng), n(rng), n(rng));
    p.pose = p.pose * ExpMap(xi);
  }
  Se3Tangent g;
  g.rot = Vec3(0.4, -1.1, 0.7);
  g.trans = Vec3(3.0, -2.0, 5.0);
  const Trajectory moved = Transformed(est, ExpMap(g));
  EXPECT_GT(ComputeAte(est, gt).mean, 1e-3);
  EXPECT_NEAR(ComputeAte(moved, gt).mean, ComputeAte(est, gt).mean, 1e-9);
  EXPECT_NEAR(ComputeRe(moved, gt).mean, ComputeRe(est, gt).mean, 1e-9);
}

TEST(Evaluation, ReMeasuresRelativeTranslation) {
  Trajectory gt, est;
  for (int i = 0; i < 3; ++i) {
    Se3Tangent a, b;
    a.trans = Vec3(i, 0, 0);
    b.trans = Vec3(1.5 * i, 0, 0);
    gt.push_back({double(i), ExpMap(a)});
    est.push_back({double(i), ExpMap(b)});
  }
  const MeanStd re = ComputeRe(est, gt);
  EXPECT_NEAR(re.mean, 0.5, 1e-12);
  EXPECT_NEAR(re.std, 0.0, 1e-12);
}

TEST(Evaluation, InsufficientOverlap) {
  const Trajectory a = Spiral(5), b = Spiral(5, 100.0);
  try {
    ComputeAte(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInsufficientOverlap);
  }
}

TEST(Evaluation, DepthMetricUnits) {
  DepthMap pred(2, 1, 2.0);
  SparseDepth gt(2, 1);
  gt.Set(0, 0, 1.0);
  gt.Set(1, 0, 2.0);
  const DepthMetrics m = ComputeDepthMetrics(pred, gt);
  EXPECT_DOUBLE_EQ(m.rmse_mm, 1000.0 * std::sqrt(0.5));
  EXPECT_DOUBLE_EQ(m.mae_mm, 500.0);
  EXPECT_DOUBLE_EQ(m.imae_per_km, 1000.0 * 0.5 / 2.0);
  EXPECT_DOUBLE_EQ(m.irmse_per_km, 1000.0 * std::sqrt(0.25 / 2.0));
  EXPECT_THROW(ComputeDepthMetrics(pred, SparseDepth(2, 1)), Error);
}

TEST(Evaluation, PooledDepthMetrics) {
  SparseDepth g1(1, 1), g2(1, 1);
  g1.Set(0, 0, 1.0);
  g2.Set(0, 0, 1.0);
  const DepthMetrics m = ComputeDepthMetrics({DepthMap(1, 1, 1.0), DepthMap(1, 1, 3.0)}, {g1, g2});
  EXPECT_DOUBLE_EQ(m.mae_mm, 1000.0);
}

TEST(Evaluation, NearestValidFill) {
  SparseDepth s(5, 3);
  s.Set(0, 0, 1.0);
  s.Set(4, 2, 2.0);
  const DepthMap d = NearestValidFill(s);
  EXPECT_EQ(d.at(1, 0), 1.0);
  EXPECT_EQ(d.at(3, 2), 2.0);
  EXPECT_EQ(d.at(2, 1), 1.0);  // equidistant, row-major first wins
  EXPECT_THROW(NearestValidFill(SparseDepth(2, 2)), Error);
}

TEST(Evaluation, RelativeMotionsComposeBack) {
  const Trajectory t = Spiral(4);
  const std::vector<Se3Transform> rel = RelativeMotions(t);
  ASSERT_EQ(rel.size(), 3u);
  const Vec3 p(0.1, 0.2, 0.3);
  // Maps camera k coordinates into camera k+1.
  const Vec3 world = t[1].pose * p;
  EXPECT_LT((rel[1] * p - Inverse(t[2].pose) * world).norm(), 1e-12);
}

TEST(Evaluation, PhotometricMetricZeroForStaticScene) {
  IntensityImage img(8, 8, 1, 0.3);
  img.at(0, 3, 3) = 0.8;
  const CameraIntrinsics k{8.0, 8.0, 3.5, 3.5, 8, 8};
  const double v = AveragePhotometricLoss({img, img}, {DepthMap(8, 8, 2.0), DepthMap(8, 8, 2.0)},
                                          {Se3Transform::Identity()}, k, 2);
  EXPECT_EQ(v, 0.0);
}

}  // namespace
}  // namespace depthpose
