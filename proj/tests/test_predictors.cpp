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

#include "depthpose/diffcore.hpp"
#include "depthpose/error.hpp"
#include "depthpose/predictors.hpp"

namespace depthpose {
namespace {

struct Inputs {
  IntensityImage luma1{12, 10, 1}, luma2{12, 10, 1};
  SparseDepth sparse{12, 10};

  Inputs() {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    for (int y = 0; y < 10; ++y)
      for (int x = 0; x < 12; ++x) {
        luma1.at(0, x, y) = u(rng);
        luma2.at(0, x, y) = u(rng);
        if ((x + y) % 4 == 0) sparse.Set(x, y, 1.5 + u(rng));
      }
  }
};

std::vector<double> RandomWeights(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> w(n);
  for (double& v : w) v = u(rng);
  return w;
}

TEST(Predictors, SigmoidIsStable) {
  EXPECT_DOUBLE_EQ(Sigmoid(0.0), 0.5);
  EXPECT_GT(Sigmoid(-800.0), -1e-300);
  EXPECT_EQ(Sigmoid(800.0), 1.0);
  EXPECT_TRUE(std::isfinite(Sigmoid(-800.0)));
}

TEST(Predictors, DirectDepthIsExpOfField) {
  const Inputs in;
  const DirectDepthField net;
  ParamVector p;
  net.RegisterParams(p, 2, 12, 10, 0);
  DepthMap d(12, 10, 2.5);
  d.at(3, 4) = 0.7;
  DirectDepthField::Initialize(p, 1, d);
  const DepthMap out = net.Predict(p, 1, in.luma1, in.sparse);
  EXPECT_NEAR(out.at(3, 4), 0.7, 1e-15);
  EXPECT_NEAR(out.at(0, 0), 2.5, 1e-15);
}

TEST(Predictors, DirectPoseRoundTrip) {
  const Inputs in;
  const DirectPoseField net;
  ParamVector p;
  net.RegisterParams(p, 3, 12, 10, 2, 0);
  Se3Tangent xi;
  xi.rot = Vec3(0.1, 0.2, 0.3);
  xi.trans = Vec3(-1.0, 0.5, 2.0);
  DirectPoseField::SetTangent(p, 2, xi);
  const PairPrediction pred = net.Predict(p, 2, in.luma1, in.luma2);
  EXPECT_EQ(pred.tangent.ToVector(), xi.ToVector());
  ASSERT_EQ(pred.masks.size(), 2u);
  EXPECT_EQ(pred.masks[1].width, 6);
  EXPECT_DOUBLE_EQ(pred.masks[0].data[0], 0.5);
}

TEST(Predictors, ToyDepthIsPositive) {
  const Inputs in;
  const ToyDepthNet net;
  ParamVector p;
  net.RegisterParams(p, 2, 12, 10, 5);
  for (std::size_t b = 0; b < p.num_blocks(); ++b)
    for (double& v : p.block(b)) v *= 20.0;
  const DepthMap d = net.Predict(p, 0, in.luma1, in.sparse);
  for (double v : d.data()) EXPECT_GT(v, 0.0);
}

TEST(Predictors, ToyInitializationIsSeeded) {
  const ToyDepthNet net;
  ParamVector a, b, c;
  net.RegisterParams(a, 1, 12, 10, 1);
  net.RegisterParams(b, 1, 12, 10, 1);
  net.RegisterParams(c, 1, 12, 10, 2);
  EXPECT_EQ(a.Flatten(), b.Flatten());
  EXPECT_NE(a.Flatten(), c.Flatten());
}

// d/dparams of <w, Predict(params)> against central differences.
TEST(Predictors, ToyDepthBackwardMatchesFiniteDifferences) {
  const Inputs in;
  const ToyDepthNet net;
  ParamVector p;
  net.RegisterParams(p, 1, 12, 10, 3);
  const std::vector<double> w = RandomWeights(120, 4);
  const LossFunction loss = [&](const ParamVector& params, ParamVector* grad) {
    const DepthMap d = net.Predict(params, 0, in.luma1, in.sparse);
    double v = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) v += w[i] * d.data()[i];
    if (grad != nullptr) net.Backward(params, 0, in.luma1, in.sparse, w, *grad);
    return v;
  };
  FiniteDifferenceOptions fd;
  fd.rel_tol = 1e-5;
  const FiniteDifferenceReport r = FiniteDifferenceCheck(loss, p, fd);
  for (const BlockCheck& b : r.blocks) EXPECT_TRUE(b.passed) << b.name << " " << b.max_rel_error;
}

TEST(Predictors, ToyPoseBackwardMatchesFiniteDifferences) {
  const Inputs in;
  const ToyPoseNet net(PredictorConfig{.pose_output_scale = 1.0});
  ParamVector p;
  net.RegisterParams(p, 1, 12, 10, 2, 6);
  const Vec6 gt = (Vec6() << 0.3, -0.2, 0.5, 1.0, -0.7, 0.4).finished();
  const std::vector<double> w0 = RandomWeights(120, 7), w1 = RandomWeights(30, 8);
  const LossFunction loss = [&](const ParamVector& params, ParamVector* grad) {
    const PairPrediction pred = net.Predict(params, 0, in.luma1, in.luma2);
    double v = gt.dot(pred.tangent.ToVector());
    for (std::size_t i = 0; i < 120; ++i) v += w0[i] * pred.masks[0].data[i];
    for (std::size_t i = 0; i < 30; ++i) v += w1[i] * pred.masks[1].data[i];
    if (grad != nullptr) {
      std::vector<ScalarMap> gm = {ScalarMap(12, 10), ScalarMap(6, 5)};
      gm[0].data = w0;
      gm[1].data = w1;
      net.Backward(params, 0, in.luma1, in.luma2, gt, &gm, *grad);
    }
    return v;
  };
  FiniteDifferenceOptions fd;
  fd.rel_tol = 1e-5;
  const FiniteDifferenceReport r = FiniteDifferenceCheck(loss, p, fd);
  for (const BlockCheck& b : r.blocks) EXPECT_TRUE(b.passed) << b.name << " " << b.max_rel_error;
}

TEST(Predictors, Factory) {
  EXPECT_EQ(MakePredictors("direct", {}).depth->name(), "direct");
  EXPECT_EQ(MakePredictors("toycnn", {}).pose->name(), "toycnn");
  EXPECT_THROW(MakePredictors("resnet", {}), Error);
}

}  // namespace
}  // namespace depthpose
