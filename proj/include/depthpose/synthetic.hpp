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


// Analytic planar scenes rendered by ray casting; used as an oracle that is
// independent of the warping code.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "depthpose/dataio.hpp"
#include "depthpose/geometry.hpp"

namespace depthpose {

// World-frame plane n . X = offset with a procedural texture.
struct Plane {
  Vec3 normal = Vec3::UnitZ();
  double offset = 1.0;
  std::uint64_t texture_seed = 0;
};

struct SyntheticScene {
  std::vector<Plane> planes;
  std::vector<Se3Transform> t_world_to_cam;  // one per frame
  CameraIntrinsics intrinsics;
  double texture_frequency = 1.0;  // scales the spatial frequencies
  double start_time = 0.0;
  double frame_interval = 1.0 / 30.0;

  // Throws kInvalidArgument on an empty scene, a zero normal or bad
  // intrinsics.
  void Validate() const;
};

// Sum of three sinusoids of 3-D position per channel, in [0.05, 0.95].
std::array<double, 3> TextureAt(const Plane& plane, const Vec3& x, double frequency);

struct RayHit {
  double depth = 0.0;  // camera z of the hit
  std::size_t plane = 0;
  Vec3 point_world = Vec3::Zero();
};

// Nearest plane hit in front of the camera along the ray through pixel u.
// Throws kSceneCoverage when no plane is hit.
RayHit CastRay(const SyntheticScene& scene, const Se3Transform& t_world_to_cam, const Vec2& u);

DepthMap RenderDepth(const SyntheticScene& scene, std::size_t frame);
IntensityImage RenderImage(const SyntheticScene& scene, std::size_t frame);

// Every frame with its exact depth (also as the dense input measurement) and
// pose.
SequenceDataset GenerateSynthetic(const SyntheticScene& scene);

// "two-plane": a fronto-parallel wall at z = 3 m and a floor at y = 0.8 m,
// seen by a camera translating 0.1 m per frame along x with a slow yaw.
// "fronto": the wall alone. Throws kInvalidArgument for other names.
SyntheticScene MakePresetScene(const std::string& name, int width = 64, int height = 64,
                               int frames = 3);

// JSON scene description: {"intrinsics": {...}, "planes": [{"normal": [x, y, z],
// "offset": d, "texture_seed": s}], "poses": [[tx, ty, tz, qx, qy, qz, qw], ...]
// (camera to world), "texture_frequency": f, "frame_interval": dt}.
SyntheticScene LoadSceneFile(const std::filesystem::path& path);

}  // namespace depthpose
