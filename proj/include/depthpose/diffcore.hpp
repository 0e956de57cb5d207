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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "depthpose/geometry.hpp"
#include "depthpose/imaging.hpp"
#include "depthpose/losses.hpp"
#include "depthpose/params.hpp"
#include "depthpose/predictors.hpp"

namespace depthpose {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double weight_decay = 3e-4;
  double epsilon = 1e-8;

  void Validate() const;
};

struct OptimizerState {
  AdamConfig config;
  std::int64_t step = 0;
  std::vector<double> m;
  std::vector<double> v;

  static OptimizerState ForParams(const ParamVector& params, const AdamConfig& config);
};

// One Adam step with bias correction. Weight decay is decoupled
// (p <- p - lr * wd * p before the Adam delta) and only touches blocks flagged
// `decay`. Blocks whose index is set in `frozen` are left untouched.
// Throws kDiverged naming the block when a gradient is not finite.
void AdamStep(OptimizerState& state, ParamVector& params, const ParamVector& grads,
              std::span<const std::uint8_t> frozen = {});

// Returns the loss and, when `grad` is non-null, accumulates the analytic
// gradient into it (same layout as the parameters, zeroed by the caller).
using LossFunction = std::function<double(const ParamVector& params, ParamVector* grad)>;

struct FiniteDifferenceOptions {
  double step = 1e-6;
  double rel_tol = 1e-4;
  double abs_floor = 1e-8;
  std::size_t max_coords_per_block = 200;  // larger blocks are subsampled
  std::uint64_t seed = 0;                  // coordinate subsampling
};

struct BlockCheck {
  std::string name;
  std::size_t coords_checked = 0;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  // Largest |analytic - numeric| / (rel_tol * scale + abs_floor); <= 1 passes.
  double max_tolerance_ratio = 0.0;
  std::size_t worst_index = 0;  // coordinate with the largest ratio
  bool passed = true;
};

struct FiniteDifferenceReport {
  std::vector<BlockCheck> blocks;
  bool passed = true;
};

// Central differences against the analytic gradient. A coordinate passes when
// |analytic - numeric| <= rel_tol * max(|analytic|, |numeric|) + abs_floor.
FiniteDifferenceReport FiniteDifferenceCheck(const LossFunction& loss, const ParamVector& params,
                                             const FiniteDifferenceOptions& options = {});

struct RefineFrame {
  IntensityImage image;  // RGB or luma; converted to luma internally
  SparseDepth sparse;    // input measurements d_k
};

struct RefineOptions {
  int levels = 4;
  AdamConfig adam;
  IndicatorMode indicator = IndicatorMode::kUnmeasured;
  bool use_mask = true;
  bool freeze_depth = false;
  bool freeze_pose = false;
  // Direct depth field start; defaults to the median input measurement.
  std::optional<std::vector<DepthMap>> initial_depth;
  std::optional<std::vector<Se3Tangent>> initial_pose;  // per pair
  double initial_mask_logit = 0.0;  // direct field only
  std::function<void(int iter, const LossBreakdown&)> on_iteration;
};

// Whole-sequence objective: supervised and smoothness terms averaged over
// frames, masked photometric and mask terms averaged over consecutive pairs,
// weighted into the total.
class SequenceObjective {
 public:
  SequenceObjective(const std::vector<RefineFrame>& frames,
                    const std::vector<SparseDepth>& supervision, const CameraIntrinsics& k,
                    const PredictorPair& predictors, const LossWeights& weights,
                    const RefineOptions& options);

  // Registers predictor blocks and applies the initial values from options.
  ParamVector InitialParams(std::uint64_t seed) const;

  // Loss of `params`; accumulates the gradient into `grad` when non-null.
  LossBreakdown Evaluate(const ParamVector& params, ParamVector* grad) const;

  std::vector<DepthMap> PredictDepths(const ParamVector& params) const;
  std::vector<PairPrediction> PredictPairs(const ParamVector& params) const;

  // Blocks that belong to the depth predictor or the pose/mask predictor.
  std::vector<std::uint8_t> FrozenMask(const ParamVector& params) const;

  std::size_t num_frames() const { return lumas_.size(); }
  const CameraIntrinsics& intrinsics() const { return k_; }

 private:
  std::vector<IntensityImage> lumas_;
  std::vector<SparseDepth> sparse_;
  std::vector<SparseDepth> supervision_;
  std::vector<ImagePyramid> image_pyramids_;
  std::vector<SparsePyramid> sparse_pyramids_;
  CameraIntrinsics k_;
  const PredictorPair* predictors_;
  LossWeights weights_;
  RefineOptions options_;
};

struct RefinementResult {
  std::vector<DepthMap> depths;
  std::vector<Se3Transform> relative_poses;  // T_{k -> k+1}
  std::vector<std::vector<ScalarMap>> masks;
  std::vector<LossBreakdown> history;  // loss before each update
  LossBreakdown final_loss;            // after the last update
  ParamVector params;
};

// Runs `iters` Adam updates of the full objective. Throws kInvalidArgument
// for fewer than 2 frames or iters < 1, and kDiverged (with the iteration
// index) when the loss becomes non-finite.
RefinementResult JointRefine(const std::vector<RefineFrame>& frames,
                             const std::vector<SparseDepth>& supervision,
                             const CameraIntrinsics& k, const PredictorPair& predictors,
                             const LossWeights& weights, int iters, std::uint64_t seed,
                             const RefineOptions& options = {});

}  // namespace depthpose
