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
#include <vector>

#include "depthpose/geometry.hpp"
#include "depthpose/imaging.hpp"

namespace depthpose {

// Depth sensor model: each pixel is kept with probability `sample_rate` and
// receives zero-mean Gaussian noise with standard deviation depth * f.
struct NoiseModel {
  double f = 0.0;
  double sample_rate = 1.0;
  std::uint64_t seed = 0;

  // Throws kInvalidArgument unless f >= 0 and 0 < sample_rate <= 1.
  void Validate() const;
};

// Corrupted values are clamped below at this depth (meters).
inline constexpr double kMinCorruptedDepth = 1e-3;

// Deterministic given the model's seed. Pixels are visited in row-major order;
// each draws a retention uniform and a noise normal from one mt19937_64 stream.
SparseDepth CorruptDepth(const DepthMap& depth, const NoiseModel& model);

struct PosedSparseDepth {
  SparseDepth depth;
  Se3Transform t_world_to_cam;  // T_{w->k}
};

// Splats every valid point of every frame into frame `key_index` (nearest
// pixel). Among neighbors the smallest depth wins; the key frame's own
// measurements override any splat.
SparseDepth AggregateSupervision(const std::vector<PosedSparseDepth>& frames,
                                 std::size_t key_index, const CameraIntrinsics& k);

}  // namespace depthpose
