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
#include <numbers>
#include <random>

#include "depthpose/error.hpp"
#include "depthpose/geometry.hpp"

namespace depthpose {
namespace {

constexpr double kPi = std::numbers::pi;

Se3Tangent RandomTangent(std::mt19937_64& rng, double rot_scale, double trans_scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Se3Tangent xi;
  xi.rot = Vec3(u(rng), u(rng), u(rng)) * rot_scale;
  xi.trans = Vec3(u(rng), u(rng), u(rng)) * trans_scale;
  return xi;
}

CameraIntrinsics TestCamera() { return {50.0, 52.0, 31.5, 23.5, 64, 48}; }

TEST(Geometry, ExpLogRoundTrip) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const Se3Tangent xi = RandomTangent(rng, 1.0, 2.0);
    const Se3Tangent back = LogMap(ExpMap(xi));
    EXPECT_LT((back.rot - xi.rot).norm(), 1e-12);
    EXPECT_LT((back.trans - xi.trans).norm(), 1e-12);
  }
}

TEST(Geometry, ExpOfZeroIsIdentity) {
  const Se3Transform t = ExpMap(Se3Tangent{});
  EXPECT_EQ(t.rotation(), Mat3::Identity());
  EXPECT_EQ(t.translation(), Vec3::Zero());
}

TEST(Geometry, SmallAngleSeriesIsAccurate) {
  Se3Tangent xi;
  xi.rot = Vec3(1e-9, -2e-9, 3e-10);
  const Mat3 r = ExpMap(xi).rotation();
  const Mat3 expected = Mat3::Identity() + Hat(xi.rot);
  EXPECT_LT((r - expected).norm(), 1e-17);
  EXPECT_LT((LogMap(ExpMap(xi)).rot - xi.rot).norm(), 1e-20);
}

TEST(Geometry, LogNearPiRecoversAxis) {
  const Vec3 axis = Vec3(1.0, 2.0, -0.5).normalized();
  const double angle = kPi - 1e-7;
  Se3Tangent xi;
  xi.rot = axis * angle;
  const Se3Tangent back = LogMap(ExpMap(xi));
  EXPECT_NEAR(back.rot.norm(), angle, 1e-6);
  EXPECT_GT(std::fabs(back.rot.normalized().dot(axis)), 1.0 - 1e-9);
}

TEST(Geometry, LogAtExactlyPiIsDegenerate) {
  Mat3 r = Mat3::Identity();
  r(1, 1) = -1.0;
  r(2, 2) = -1.0;
  const Se3Transform t(r, Vec3::Zero());
  try {
    LogMap(t);
    FAIL() << "expected degenerate rotation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateRotation);
  }
}

TEST(Geometry, RejectsNonOrthonormalRotation) {
  Mat3 r = Mat3::Identity();
  r(0, 1) = 1e-3;
  EXPECT_THROW(Se3Transform(r, Vec3::Zero()), Error);
}

TEST(Geometry, LeftJacobianMatchesFiniteDifferences) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const Vec3 w = RandomTangent(rng, 1.2, 0.0).rot;
    const Mat3 jl = LeftJacobianSo3(w);
    const double h = 1e-7;
    for (int c = 0; c < 3; ++c) {
      Vec3 d = Vec3::Zero();
      d[c] = h;
      // exp(w + d) exp(w)^-1 ~= exp(J_l d)
      const Mat3 delta = ExpSo3(w + d) * ExpSo3(w).transpose();
      const Vec3 numeric(delta(2, 1) - delta(1, 2), delta(0, 2) - delta(2, 0),
                         delta(1, 0) - delta(0, 1));
      EXPECT_LT((numeric / (2.0 * h) - jl.col(c)).norm(), 1e-6);
    }
  }
}

TEST(Geometry, ComposeAndInverse) {
  std::mt19937_64 rng(3);
  const Se3Transform a = ExpMap(RandomTangent(rng, 0.8, 1.0));
  const Se3Transform b = ExpMap(RandomTangent(rng, 0.8, 1.0));
  const Vec3 p(0.3, -0.2, 1.7);
  EXPECT_LT((Compose(a, b) * p - a * (b * p)).norm(), 1e-12);
  EXPECT_LT((Inverse(a) * (a * p) - p).norm(), 1e-12);
  // T_{prev->curr} maps prev camera coordinates into curr.
  const Vec3 world(1.0, 2.0, 3.0);
  const Se3Transform rel = RelativeTransform(a, b);
  EXPECT_LT((rel * (a * world) - b * world).norm(), 1e-12);
}

TEST(Geometry, QuaternionRoundTrip) {
  std::mt19937_64 rng(4);
  const Se3Transform t = ExpMap(RandomTangent(rng, 1.0, 1.0));
  const Se3Transform back = Se3Transform::FromQuaternion(t.quaternion(), t.translation());
  EXPECT_LT((back.rotation() - t.rotation()).norm(), 1e-12);
}

TEST(Geometry, ProjectBackprojectRoundTrip) {
  const CameraIntrinsics k = TestCamera();
  const Vec2 u(12.25, 40.5);
  const Vec3 p = Backproject(k, u, 2.5);
  EXPECT_DOUBLE_EQ(p.z(), 2.5);
  EXPECT_LT((Project(k, p) - u).norm(), 1e-12);
}

TEST(Geometry, BehindCameraThrows) {
  const CameraIntrinsics k = TestCamera();
  try {
    Project(k, Vec3(0.0, 0.0, -1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kBehindCamera);
  }
  EXPECT_THROW(Backproject(k, Vec2(1.0, 1.0), 0.0), Error);
}

TEST(Geometry, IdentityWarpIsExact) {
  const CameraIntrinsics k = TestCamera();
  for (int y = 0; y < k.height; y += 7) {
    for (int x = 0; x < k.width; x += 5) {
      const WarpResult w = WarpPixel(k, Se3Transform::Identity(), 1.7 + 0.01 * x, Vec2(x, y));
      ASSERT_TRUE(w.valid);
      EXPECT_EQ(w.pixel.x(), x);
      EXPECT_EQ(w.pixel.y(), y);
    }
  }
}

TEST(Geometry, WarpMatchesProjectionOfTransformedPoint) {
  std::mt19937_64 rng(5);
  const CameraIntrinsics k = TestCamera();
  const Se3Transform t = ExpMap(RandomTangent(rng, 0.05, 0.1));
  const Vec2 u(20.0, 17.0);
  const WarpResult w = WarpPixel(k, t, 3.0, u);
  const Vec2 expected = Project(k, t * Backproject(k, u, 3.0));
  EXPECT_LT((w.pixel - expected).norm(), 1e-11);
}

TEST(Geometry, WarpOutsideImageIsInvalid) {
  const CameraIntrinsics k = TestCamera();
  Se3Tangent xi;
  xi.trans = Vec3(-5.0, 0.0, 0.0);
  EXPECT_FALSE(WarpPixel(k, ExpMap(xi), 1.0, Vec2(10.0, 10.0)).valid);
  xi.trans = Vec3(0.0, 0.0, -3.0);
  EXPECT_FALSE(WarpPixel(k, ExpMap(xi), 1.0, Vec2(10.0, 10.0)).valid);
}

TEST(Geometry, WarpJacobianMatchesFiniteDifferences) {
  std::mt19937_64 rng(6);
  const CameraIntrinsics k = TestCamera();
  for (int trial = 0; trial < 10; ++trial) {
    const Se3Tangent xi = RandomTangent(rng, 0.05, 0.1);
    const Se3Transform t = ExpMap(xi);
    const Vec2 u(10.0 + 3 * trial, 8.0 + 2 * trial);
    const double depth = 2.0 + 0.1 * trial;
    const WarpJacobianResult j = WarpJacobian(k, t, depth, u);
    const double h = 1e-6;
    const Vec2 dd = (WarpPixel(k, t, depth + h, u).pixel - WarpPixel(k, t, depth - h, u).pixel) /
                    (2.0 * h);
    EXPECT_LT((dd - j.d_depth).norm(), 1e-6);
    for (int c = 0; c < 6; ++c) {
      Vec6 v = xi.ToVector();
      v[c] += h;
      const Vec2 up = WarpPixel(k, ExpMap(Se3Tangent::FromVector(v)), depth, u).pixel;
      v[c] -= 2.0 * h;
      const Vec2 down = WarpPixel(k, ExpMap(Se3Tangent::FromVector(v)), depth, u).pixel;
      EXPECT_LT(((up - down) / (2.0 * h) - j.d_tangent.col(c)).norm(), 1e-5) << "coord " << c;
    }
  }
}

TEST(Geometry, LinearizeWarpBackwardMatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  const CameraIntrinsics k = TestCamera();
  const Se3Tangent xi = RandomTangent(rng, 0.05, 0.1);
  const TangentPose pose(xi);
  const Vec2 u(30.0, 20.0);
  const WarpLinearization lin = LinearizeWarp(k, pose, true, 2.2, u);
  ASSERT_TRUE(lin.warp.valid);
  const double h = 1e-6;
  for (int c = 0; c < 6; ++c) {
    Vec6 v = xi.ToVector();
    v[c] += h;
    const Vec2 up = WarpPixel(k, ExpMap(Se3Tangent::FromVector(v)).inverse(), 2.2, u).pixel;
    v[c] -= 2.0 * h;
    const Vec2 down = WarpPixel(k, ExpMap(Se3Tangent::FromVector(v)).inverse(), 2.2, u).pixel;
    EXPECT_LT(((up - down) / (2.0 * h) - lin.d_tangent.col(c)).norm(), 1e-5) << "coord " << c;
  }
}

TEST(Geometry, WarpJacobianOfInvalidWarpThrows) {
  const CameraIntrinsics k = TestCamera();
  Se3Tangent xi;
  xi.trans = Vec3(-5.0, 0.0, 0.0);
  try {
    WarpJacobian(k, ExpMap(xi), 1.0, Vec2(10.0, 10.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNoGradient);
  }
}

TEST(Geometry, LevelIntrinsicsFollowBoxAveraging) {
  const CameraIntrinsics k{64.0, 64.0, 31.5, 31.5, 64, 64};
  const CameraIntrinsics k1 = k.AtLevel(1);
  EXPECT_DOUBLE_EQ(k1.fx, 32.0);
  EXPECT_DOUBLE_EQ(k1.cx, 15.5);  // image centre stays the centre
  EXPECT_EQ(k1.width, 32);
  const CameraIntrinsics k2 = k.AtLevel(2);
  EXPECT_DOUBLE_EQ(k2.cx, 7.5);
}

TEST(Geometry, IntrinsicsValidation) {
  CameraIntrinsics k = TestCamera();
  k.fx = 0.0;
  EXPECT_THROW(k.Validate(), Error);
  k = TestCamera();
  k.cx = 100.0;
  EXPECT_THROW(k.Validate(), Error);
}

}  // namespace
}  // namespace depthpose
