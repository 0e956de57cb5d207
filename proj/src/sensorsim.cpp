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


#include "depthpose/sensorsim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "depthpose/error.hpp"

namespace depthpose {

void NoiseModel::Validate() const {
  if (!(f >= 0.0) || !std::isfinite(f) || !(sample_rate > 0.0) || !(sample_rate <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "noise model needs f >= 0 and 0 < sample_rate <= 1");
  }
}

SparseDepth CorruptDepth(const DepthMap& depth, const NoiseModel& model) {
  model.Validate();
  std::mt19937_64 rng(model.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  SparseDepth out(depth.width(), depth.height());
  for (int y = 0; y < depth.height(); ++y) {
    for (int x = 0; x < depth.width(); ++x) {
      const bool keep = uniform(rng) < model.sample_rate;
      const double z = normal(rng);
      if (!keep) continue;
      const double d = depth.at(x, y);
      out.Set(x, y, std::max(d + z * (d * model.f), kMinCorruptedDepth));
    }
  }
  return out;
}

SparseDepth AggregateSupervision(const std::vector<PosedSparseDepth>& frames,
                                 std::size_t key_index, const CameraIntrinsics& k) {
  if (frames.empty() || key_index >= frames.size()) {
    throw Error(ErrorKind::kInvalidArgument, "aggregation needs a valid key frame");
  }
  const SparseDepth& key = frames[key_index].depth;
  if (key.width() != k.width || key.height() != k.height) {
    throw Error(ErrorKind::kDimension, "key frame disagrees with intrinsics");
  }

  SparseDepth out(k.width, k.height);
  for (std::size_t j = 0; j < frames.size(); ++j) {
    if (j == key_index) continue;
    const SparseDepth& src = frames[j].depth;
    if (src.width() != k.width || src.height() != k.height) {
      throw Error(ErrorKind::kDimension, "neighbor frame disagrees with intrinsics");
    }
    const Se3Transform t_j_to_key =
        RelativeTransform(frames[j].t_world_to_cam, frames[key_index].t_world_to_cam);
    for (int y = 0; y < src.height(); ++y) {
      for (int x = 0; x < src.width(); ++x) {
        if (!src.valid(x, y)) continue;
        const double d = src.value(x, y);
        const WarpResult w = WarpPixel(k, t_j_to_key, d, Vec2(x, y));
        if (!w.valid) continue;
        const double z = (t_j_to_key * Backproject(k, Vec2(x, y), d)).z();
        const int px = static_cast<int>(std::lround(w.pixel.x()));
        const int py = static_cast<int>(std::lround(w.pixel.y()));
        if (!out.valid(px, py) || z < out.value(px, py)) out.Set(px, py, z);
      }
    }
  }
  for (int y = 0; y < key.height(); ++y) {
    for (int x = 0; x < key.width(); ++x) {
      if (key.valid(x, y)) out.Set(x, y, key.value(x, y));
    }
  }
  return out;
}

}  // namespace depthpose
