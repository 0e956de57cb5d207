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
#include "depthpose/imaging.hpp"

namespace depthpose {
namespace {

IntensityImage Ramp(int w, int h) {
  IntensityImage img(w, h, 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img.at(0, x, y) = (0.5 * x + 0.25 * y) / (w + h);
  return img;
}

IntensityImage RandomImage(int w, int h, int c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  IntensityImage img(w, h, c);
  for (int ch = 0; ch < c; ++ch)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) img.at(ch, x, y) = u(rng);
  return img;
}

TEST(Imaging, ConstructorsValidate) {
  EXPECT_THROW(IntensityImage(2, 2, 1, std::vector<double>(3, 0.5)), Error);
  EXPECT_THROW(IntensityImage(1, 1, 1, std::vector<double>{1.5}), Error);
  EXPECT_THROW(DepthMap(1, 1, std::vector<double>{0.0}), Error);
  EXPECT_THROW(DepthMap(2, 1, std::vector<double>{1.0}), Error);
  EXPECT_THROW(SparseDepth(1, 1, {-1.0}, {1}), Error);
  EXPECT_NO_THROW(SparseDepth(1, 1, {-1.0}, {0}));
}

TEST(Imaging, LumaWeights) {
  IntensityImage rgb(1, 1, 3);
  rgb.at(0, 0, 0) = 1.0;
  rgb.at(1, 0, 0) = 0.5;
  rgb.at(2, 0, 0) = 0.0;
  const IntensityImage l = ToLuma(rgb);
  EXPECT_EQ(l.channels(), 1);
  EXPECT_NEAR(l.at(0, 0, 0), 0.299 + 0.587 * 0.5, 1e-15);
}

TEST(Imaging, SampleAtPixelCentersIsExact) {
  const IntensityImage img = RandomImage(9, 7, 1, 1);
  for (int y = 0; y < 7; ++y)
    for (int x = 0; x < 9; ++x) {
      const ScalarSample s = SampleChannel(img, 0, Vec2(x, y));
      ASSERT_TRUE(s.valid);
      EXPECT_EQ(s.value, img.at(0, x, y));
    }
}

TEST(Imaging, SampleIsBilinearAndGradientIsExactOnRamp) {
  const IntensityImage img = Ramp(8, 6);
  const ScalarSample s = SampleChannel(img, 0, Vec2(2.3, 3.6));
  ASSERT_TRUE(s.valid);
  EXPECT_NEAR(s.value, (0.5 * 2.3 + 0.25 * 3.6) / 14.0, 1e-15);
  EXPECT_NEAR(s.grad_x, 0.5 / 14.0, 1e-15);
  EXPECT_NEAR(s.grad_y, 0.25 / 14.0, 1e-15);
}

TEST(Imaging, SampleOutsideIsInvalid) {
  const IntensityImage img = Ramp(8, 6);
  EXPECT_FALSE(SampleChannel(img, 0, Vec2(-0.01, 2.0)).valid);
  EXPECT_FALSE(SampleChannel(img, 0, Vec2(7.01, 2.0)).valid);
  EXPECT_FALSE(SampleChannel(img, 0, Vec2(2.0, 5.5)).valid);
  EXPECT_TRUE(SampleChannel(img, 0, Vec2(7.0, 5.0)).valid);
}

TEST(Imaging, MultiChannelSampleMatchesChannelSample) {
  const IntensityImage img = RandomImage(6, 5, 3, 2);
  const BilinearSample s = Sample(img, Vec2(1.7, 2.2));
  ASSERT_TRUE(s.valid);
  for (int c = 0; c < 3; ++c) {
    const ScalarSample sc = SampleChannel(img, c, Vec2(1.7, 2.2));
    EXPECT_EQ(s.value[c], sc.value);
    EXPECT_EQ(s.grad_x[c], sc.grad_x);
  }
}

TEST(Imaging, PyramidAveragesBlocks) {
  const IntensityImage img = RandomImage(8, 4, 1, 3);
  const ImagePyramid p = BuildPyramid(img, 3);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[1].width(), 4);
  EXPECT_EQ(p[2].height(), 1);
  const double expected =
      ((img.at(0, 2, 2) + img.at(0, 3, 2)) + (img.at(0, 2, 3) + img.at(0, 3, 3))) * 0.25;
  EXPECT_EQ(p[1].at(0, 1, 1), expected);
  EXPECT_THROW(BuildPyramid(img, 4), Error);
  EXPECT_THROW(BuildPyramid(img, 0), Error);
}

TEST(Imaging, SparsePyramidAveragesValidChildren) {
  SparseDepth d(4, 4);
  d.Set(0, 0, 2.0);
  d.Set(1, 1, 4.0);
  d.Set(3, 3, 5.0);
  const SparsePyramid p = BuildSparsePyramid(d, 2);
  EXPECT_TRUE(p[1].valid(0, 0));
  EXPECT_DOUBLE_EQ(p[1].value(0, 0), 3.0);
  EXPECT_FALSE(p[1].valid(1, 0));
  EXPECT_DOUBLE_EQ(p[1].value(1, 1), 5.0);
}

TEST(Imaging, BoxDownsampleAdjointIsAdjoint) {
  // <A x, y> == <x, A^T y> for the fine->coarse box average A.
  const int fw = 7, fh = 5, cw = 3, ch = 2;
  const IntensityImage x = RandomImage(fw, fh, 1, 4);
  const ImagePyramid p = BuildPyramid(x, 2);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> y(cw * ch);
  for (double& v : y) v = u(rng);
  double lhs = 0.0;
  for (int i = 0; i < cw * ch; ++i) lhs += p[1].data()[i] * y[i];
  const std::vector<double> aty = BoxDownsampleAdjoint(y, cw, ch, fw, fh);
  double rhs = 0.0;
  for (int i = 0; i < fw * fh; ++i) rhs += x.data()[i] * aty[i];
  EXPECT_NEAR(lhs, rhs, 1e-14);
  EXPECT_EQ(aty[6], 0.0);  // dropped column
}

TEST(Imaging, SecondOrderGradientsOfQuadratic) {
  DepthMap d(6, 5, 1.0);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 6; ++x) d.at(x, y) = 1.0 + 0.5 * x * x + 0.25 * x * y + y * y;
  const SecondOrderGradients g = ComputeSecondOrderGradients(d);
  for (int y = 1; y < 4; ++y)
    for (int x = 1; x < 5; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * 6 + x;
      EXPECT_NEAR(g.dxx[i], 1.0, 1e-12);
      EXPECT_NEAR(g.dyy[i], 2.0, 1e-12);
      EXPECT_NEAR(g.dxy[i], 0.25, 1e-12);
    }
  EXPECT_EQ(g.dxx[0], 0.0);
  EXPECT_THROW(ComputeSecondOrderGradients(DepthMap(2, 5, 1.0)), Error);
}

TEST(Imaging, InverseWarpIdentityReproducesImage) {
  const IntensityImage img = RandomImage(10, 8, 1, 6);
  const CameraIntrinsics k{10.0, 10.0, 4.5, 3.5, 10, 8};
  const WarpedImage w = InverseWarp(img, DepthMap(10, 8, 2.0), Se3Transform::Identity(), k);
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    EXPECT_TRUE(w.valid[i]);
    EXPECT_EQ(w.image.data()[i], img.data()[i]);
  }
}

}  // namespace
}  // namespace depthpose
