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

#include <filesystem>
#include <vector>

#include "depthpose/error.hpp"
#include "depthpose/params.hpp"

namespace depthpose {
namespace {

ParamVector Sample() {
  ParamVector p;
  const std::vector<double> a = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  p.AddBlock("a", {2, 3}, true, a);
  p.AddBlock("b", {2}, false);
  return p;
}

TEST(Params, LayoutAndAccess) {
  ParamVector p = Sample();
  EXPECT_EQ(p.size(), 8u);
  EXPECT_EQ(p.IndexOf("b"), 1u);
  EXPECT_EQ(p.block_info(1).offset, 6u);
  EXPECT_TRUE(p.block_info(0).decay);
  EXPECT_EQ(p.block("a")[4], 5.0);
  p.block("b")[1] = 9.0;
  EXPECT_EQ(p.flat()[7], 9.0);
  EXPECT_FALSE(p.Contains("c"));
  EXPECT_THROW(p.IndexOf("c"), Error);
}

TEST(Params, RejectsBadBlocks) {
  ParamVector p = Sample();
  EXPECT_THROW(p.AddBlock("a", {1}, false), Error);
  const std::vector<double> wrong = {1.0};
  EXPECT_THROW(p.AddBlock("c", {2}, false, wrong), Error);
}

TEST(Params, FlattenRoundTrip) {
  ParamVector p = Sample();
  std::vector<double> flat = p.Flatten();
  flat[0] = -1.0;
  p.Unflatten(flat);
  EXPECT_EQ(p.block(0)[0], -1.0);
  EXPECT_THROW(p.Unflatten(std::vector<double>(3)), Error);
}

TEST(Params, ZerosLike) {
  const ParamVector p = Sample();
  const ParamVector z = p.ZerosLike();
  EXPECT_TRUE(p.SameLayout(z));
  for (double v : z.flat()) EXPECT_EQ(v, 0.0);
  ParamVector other;
  other.AddBlock("a", {6}, true);
  EXPECT_FALSE(p.SameLayout(other));
}

TEST(Params, SaveLoadRoundTrip) {
  const auto path = std::filesystem::path(::testing::TempDir()) / "params_roundtrip.bin";
  const ParamVector p = Sample();
  p.Save(path);
  const ParamVector q = ParamVector::Load(path);
  EXPECT_TRUE(p.SameLayout(q));
  EXPECT_EQ(p.Flatten(), q.Flatten());
  EXPECT_EQ(q.block_info(0).shape, (std::vector<int>{2, 3}));
  EXPECT_TRUE(q.block_info(0).decay);
  std::filesystem::remove(path);
  EXPECT_THROW(ParamVector::Load(path), Error);
}

}  // namespace
}  // namespace depthpose
