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


#include "depthpose/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

#include "depthpose/error.hpp"
#include "json.hpp"

namespace depthpose {
namespace {

struct Wave {
  Vec3 k;
  double amplitude;
};

const std::array<Wave, 3> kWaves = {{
    {Vec3(1.22, 0.46, 0.26), 0.20},
    {Vec3(-0.44, 1.58, 0.18), 0.15},
    {Vec3(1.94, -1.66, 0.98), 0.10},
}};

constexpr double kChannelShift = 0.6;

}  // namespace

void SyntheticScene::Validate() const {
  intrinsics.Validate();
  if (planes.empty() || t_world_to_cam.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "scene needs at least one plane and one pose");
  }
  for (const Plane& p : planes) {
    if (!(p.normal.norm() > 1e-12) || !std::isfinite(p.offset)) {
      throw Error(ErrorKind::kInvalidArgument, "plane with a zero normal or bad offset");
    }
  }
  if (!(texture_frequency > 0.0) || !(frame_interval > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "texture frequency and frame interval must be > 0");
  }
}

std::array<double, 3> TextureAt(const Plane& plane, const Vec3& x, double frequency) {
  std::mt19937_64 rng(plane.texture_seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::array<double, 3> phases;
  for (double& p : phases) p = phase(rng);
  std::array<double, 3> out;
  for (int c = 0; c < 3; ++c) {
    double v = 0.5;
    for (std::size_t i = 0; i < kWaves.size(); ++i) {
      v += kWaves[i].amplitude *
           std::sin(frequency * kWaves[i].k.dot(x) + phases[i] + kChannelShift * c);
    }
    out[c] = v;
  }
  return out;
}

RayHit CastRay(const SyntheticScene& scene, const Se3Transform& t_world_to_cam, const Vec2& u) {
  const CameraIntrinsics& k = scene.intrinsics;
  const Vec3 ray((u.x() - k.cx) / k.fx, (u.y() - k.cy) / k.fy, 1.0);
  const Se3Transform cam_to_world = t_world_to_cam.inverse();
  const Vec3 center = cam_to_world.translation();
  const Vec3 dir = cam_to_world.rotation() * ray;
  RayHit best;
  best.depth = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scene.planes.size(); ++i) {
    const Plane& p = scene.planes[i];
    const Vec3 n = p.normal.normalized();
    const double denom = n.dot(dir);
    if (std::fabs(denom) < 1e-12) continue;
    const double lambda = (p.offset / p.normal.norm() - n.dot(center)) / denom;
    if (lambda > 0.0 && lambda < best.depth) {
      best.depth = lambda;
      best.plane = i;
    }
  }
  if (!std::isfinite(best.depth)) {
    throw Error(ErrorKind::kSceneCoverage, "ray through pixel (" + std::to_string(u.x()) + ", " +
                                               std::to_string(u.y()) + ") hits no plane");
  }
  best.point_world = center + best.depth * dir;
  return best;
}

DepthMap RenderDepth(const SyntheticScene& scene, std::size_t frame) {
  const CameraIntrinsics& k = scene.intrinsics;
  std::vector<double> d(static_cast<std::size_t>(k.width) * k.height);
  for (int y = 0; y < k.height; ++y) {
    for (int x = 0; x < k.width; ++x) {
      d[static_cast<std::size_t>(y) * k.width + x] =
          CastRay(scene, scene.t_world_to_cam.at(frame), Vec2(x, y)).depth;
    }
  }
  return DepthMap(k.width, k.height, std::move(d));
}

IntensityImage RenderImage(const SyntheticScene& scene, std::size_t frame) {
  const CameraIntrinsics& k = scene.intrinsics;
  IntensityImage img(k.width, k.height, 3);
  for (int y = 0; y < k.height; ++y) {
    for (int x = 0; x < k.width; ++x) {
      const RayHit hit = CastRay(scene, scene.t_world_to_cam.at(frame), Vec2(x, y));
      const auto rgb = TextureAt(scene.planes[hit.plane], hit.point_world,
                                 scene.texture_frequency);
      for (int c = 0; c < 3; ++c) img.at(c, x, y) = rgb[c];
    }
  }
  return img;
}

SequenceDataset GenerateSynthetic(const SyntheticScene& scene) {
  scene.Validate();
  SequenceDataset data;
  data.intrinsics = scene.intrinsics;
  for (std::size_t f = 0; f < scene.t_world_to_cam.size(); ++f) {
    DatasetFrame frame;
    frame.timestamp = scene.start_time + scene.frame_interval * static_cast<double>(f);
    frame.image = RenderImage(scene, f);
    frame.gt_depth = RenderDepth(scene, f);
    frame.depth = SparseDepth::FromDense(*frame.gt_depth);
    frame.t_world_to_cam = scene.t_world_to_cam[f];
    data.frames.push_back(std::move(frame));
  }
  return data;
}

SyntheticScene MakePresetScene(const std::string& name, int width, int height, int frames) {
  if (width < 8 || height < 8 || frames < 1) {
    throw Error(ErrorKind::kInvalidArgument, "preset needs >= 8x8 pixels and >= 1 frame");
  }
  SyntheticScene s;
  s.intrinsics = {static_cast<double>(width), static_cast<double>(width),
                  (width - 1) / 2.0, (height - 1) / 2.0, width, height};
  if (name == "two-plane") {
    s.planes = {{Vec3::UnitZ(), 3.0, 7}, {Vec3::UnitY(), 0.8, 7}};
  } else if (name == "fronto") {
    s.planes = {{Vec3::UnitZ(), 3.0, 7}};
  } else {
    throw Error(ErrorKind::kInvalidArgument, "unknown scene preset '" + name + "'");
  }
  for (int f = 0; f < frames; ++f) {
    const double yaw = 0.5 * std::numbers::pi / 180.0 * f;
    const Se3Transform cam_to_world(ExpSo3(Vec3(0.0, yaw, 0.0)), Vec3(0.1 * f, 0.0, 0.0));
    s.t_world_to_cam.push_back(cam_to_world.inverse());
  }
  s.Validate();
  return s;
}

SyntheticScene LoadSceneFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kLoad, "cannot open " + path.string());
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    SyntheticScene s;
    const auto& k = j.at("intrinsics");
    s.intrinsics = {k.at("fx").get<double>(), k.at("fy").get<double>(),
                    k.at("cx").get<double>(), k.at("cy").get<double>(),
                    k.at("width").get<int>(), k.at("height").get<int>()};
    for (const auto& p : j.at("planes")) {
      const auto n = p.at("normal").get<std::vector<double>>();
      if (n.size() != 3) throw Error(ErrorKind::kParse, "plane normal needs 3 values");
      s.planes.push_back({Vec3(n[0], n[1], n[2]), p.at("offset").get<double>(),
                          p.value("texture_seed", std::uint64_t{0})});
    }
    for (const auto& p : j.at("poses")) {
      const auto v = p.get<std::vector<double>>();
      if (v.size() != 7) throw Error(ErrorKind::kParse, "pose needs 7 values");
      const Se3Transform cam_to_world = Se3Transform::FromQuaternion(
          Eigen::Quaterniond(v[6], v[3], v[4], v[5]), Vec3(v[0], v[1], v[2]));
      s.t_world_to_cam.push_back(cam_to_world.inverse());
    }
    s.texture_frequency = j.value("texture_frequency", 1.0);
    s.frame_interval = j.value("frame_interval", 1.0 / 30.0);
    s.start_time = j.value("start_time", 0.0);
    s.Validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, path.string() + ": " + e.what());
  }
}

}  // namespace depthpose
