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


// Finite-difference verification of every loss term through both predictor
// families on small random instances.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "depthpose/diffcore.hpp"

namespace depthpose {

struct GradcheckOptions {
  int width = 16;
  int height = 16;
  int levels = 2;
  int frames = 3;
  std::uint64_t seed = 0;
  FiniteDifferenceOptions fd;
  // Instances whose warps land within this many pixels of a bilinear cell
  // edge, or whose residual / second-difference terms come this close to
  // zero, are redrawn: the losses are not differentiable there.
  double kink_margin = 1e-4;
  int max_redraws = 200;
  // Adds a constant to the first coordinate of the last block (always fully
  // sampled) of every analytic gradient; for testing the
  // checker itself.
  bool plant_bug = false;
};

struct GradcheckEntry {
  std::string predictor;  // "direct" or "toycnn"
  std::string term;       // "supervised", "photometric", "smoothness", "mask_reg", "total"
  std::uint64_t instance_seed = 0;
  FiniteDifferenceReport report;
};

struct GradcheckSuiteResult {
  std::vector<GradcheckEntry> entries;
  bool passed = true;
};

GradcheckSuiteResult RunGradcheckSuite(const GradcheckOptions& options);

}  // namespace depthpose
