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


// Trajectory and depth-completion metrics.

#pragma once

#include <cstddef>
#include <vector>

#include "depthpose/geometry.hpp"
#include "depthpose/imaging.hpp"

namespace depthpose {

// Camera pose in the world frame at a timestamp, i.e. T_{cam->world} as
// stored in TUM trajectory files.
struct TimedPose {
  double timestamp = 0.0;
  Se3Transform pose;
};

using Trajectory = std::vector<TimedPose>;

// Throws kInvalidArgument unless timestamps are strictly increasing.
void ValidateTrajectory(const Trajectory& traj);

inline constexpr double kDefaultMaxTimeOffset = 0.02;

struct PoseMatch {
  std::size_t est = 0;
  std::size_t gt = 0;
};

// Nearest-timestamp association, one-to-one, greedy by time difference.
// Both lists must be sorted. Matches are returned in increasing order of `a`.
std::vector<PoseMatch> AssociateTimestamps(const std::vector<double>& a,
                                           const std::vector<double>& b, double max_offset);

std::vector<PoseMatch> AssociateTrajectories(const Trajectory& est, const Trajectory& gt,
                                             double max_offset = kDefaultMaxTimeOffset);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

MeanStd ComputeMeanStd(const std::vector<double>& values);

// Absolute trajectory error: estimated positions are rigidly aligned to the
// ground truth (rotation and translation, no scale) before taking translation
// error magnitudes. Throws kInsufficientOverlap below 2 matches.
MeanStd ComputeAte(const Trajectory& est, const Trajectory& gt,
                   double max_offset = kDefaultMaxTimeOffset);

// Same error with a separate alignment per window of `window` consecutive
// matches (sliding by one); the errors of all windows are pooled.
MeanStd ComputeAteWindowed(const Trajectory& est, const Trajectory& gt, std::size_t window,
                           double max_offset = kDefaultMaxTimeOffset);

// Relative pose error between consecutive matches:
// || trans( rel_gt^-1 * rel_est ) ||, rel = P_{k-1}^-1 P_k.
MeanStd ComputeRe(const Trajectory& est, const Trajectory& gt,
                  double max_offset = kDefaultMaxTimeOffset);

struct DepthMetrics {
  double rmse_mm = 0.0;
  double mae_mm = 0.0;
  double irmse_per_km = 0.0;
  double imae_per_km = 0.0;
};

// Errors over the valid pixels of `gt`. Throws kEmptyGroundTruth when there
// are none and kDimension on a size mismatch.
DepthMetrics ComputeDepthMetrics(const DepthMap& pred, const SparseDepth& gt);

// Pools every valid pixel of every frame.
DepthMetrics ComputeDepthMetrics(const std::vector<DepthMap>& pred,
                                 const std::vector<SparseDepth>& gt);

// Mean over consecutive pairs of the unmasked multi-scale photometric loss
// with every pixel counted. `t_k_to_next[k]` maps frame k into frame k + 1.
double AveragePhotometricLoss(const std::vector<IntensityImage>& images,
                              const std::vector<DepthMap>& depths,
                              const std::vector<Se3Transform>& t_k_to_next,
                              const CameraIntrinsics& k, int levels);

// Dense fill where every pixel takes the value of the nearest valid pixel
// (Euclidean, ties broken by row-major order). Throws kEmptyGroundTruth
// when nothing is valid.
DepthMap NearestValidFill(const SparseDepth& sparse);

// T_{k->k+1} for consecutive trajectory poses.
std::vector<Se3Transform> RelativeMotions(const Trajectory& traj);

}  // namespace depthpose
