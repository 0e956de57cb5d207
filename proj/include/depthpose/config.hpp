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


#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "depthpose/diffcore.hpp"
#include "depthpose/geometry.hpp"
#include "depthpose/losses.hpp"
#include "depthpose/predictors.hpp"
#include "depthpose/sensorsim.hpp"
#include "json.hpp"

namespace depthpose {

// Everything a run depends on besides its input data. Absent JSON keys keep
// their defaults.
struct RunConfig {
  std::optional<CameraIntrinsics> intrinsics;  // overrides the dataset's
  NoiseModel noise;
  LossWeights weights;
  AdamConfig adam{.lr = 1e-2};
  int levels = 4;
  std::string predictor = "direct";
  PredictorConfig predictor_config{.depth_input_scale = 1.0 / 15.0};
  IndicatorMode indicator = IndicatorMode::kUnmeasured;
  bool use_mask = true;
  std::uint64_t seed = 0;

  // Throws kInvalidArgument on out-of-range values.
  void Validate() const;
};

nlohmann::json ToJson(const RunConfig& config);
// Throws kParse on unknown keys or wrong types.
RunConfig ConfigFromJson(const nlohmann::json& j, RunConfig base = {});
RunConfig LoadConfig(const std::filesystem::path& path, RunConfig base = {});

std::string ToString(IndicatorMode mode);
// "unmeasured", "measured" or "all"; throws kParse otherwise.
IndicatorMode ParseIndicatorMode(const std::string& s);

}  // namespace depthpose
