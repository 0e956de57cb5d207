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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "depthpose/geometry.hpp"
#include "depthpose/imaging.hpp"
#include "depthpose/losses.hpp"
#include "depthpose/params.hpp"

namespace depthpose {

struct PredictorConfig {
  // Sparse input depth is multiplied by this before entering a network
  // (0.01 for KITTI-style ranges, 1/15 for TUM-style ranges).
  double depth_input_scale = 0.01;
  // Depth network output is output_depth_scale * (ELU(x) + 1 + positive_eps).
  double output_depth_scale = 1.0;
  double positive_eps = 1e-3;
  // Pose network tangents are scaled by this factor.
  double pose_output_scale = 0.01;
};

double Sigmoid(double x);

// Explainability mask: per-level logits; values are sigmoid(logit) in (0, 1).
struct ExplainabilityMask {
  std::vector<ScalarMap> logits;

  std::vector<ScalarMap> Values() const;
};

struct PairPrediction {
  Se3Tangent tangent;
  std::vector<ScalarMap> masks;  // values in (0, 1), one per pyramid level
};

class DepthPredictor {
 public:
  virtual ~DepthPredictor() = default;
  virtual std::string name() const = 0;

  // Adds this predictor's blocks; `seed` drives any random initialization.
  virtual void RegisterParams(ParamVector& params, std::size_t num_frames, int width,
                              int height, std::uint64_t seed) const = 0;
  // Always strictly positive for finite parameters.
  virtual DepthMap Predict(const ParamVector& params, std::size_t frame,
                           const IntensityImage& luma, const SparseDepth& sparse) const = 0;
  // Accumulates d loss / d params given d loss / d depth.
  virtual void Backward(const ParamVector& params, std::size_t frame,
                        const IntensityImage& luma, const SparseDepth& sparse,
                        std::span<const double> grad_depth, ParamVector& grads) const = 0;
};

class PosePredictor {
 public:
  virtual ~PosePredictor() = default;
  virtual std::string name() const = 0;

  virtual void RegisterParams(ParamVector& params, std::size_t num_pairs, int width,
                              int height, int levels, std::uint64_t seed) const = 0;
  virtual PairPrediction Predict(const ParamVector& params, std::size_t pair,
                                 const IntensityImage& luma1,
                                 const IntensityImage& luma2) const = 0;
  // `grad_masks` holds d loss / d mask value per level and may be null.
  virtual void Backward(const ParamVector& params, std::size_t pair,
                        const IntensityImage& luma1, const IntensityImage& luma2,
                        const Vec6& grad_tangent, const std::vector<ScalarMap>* grad_masks,
                        ParamVector& grads) const = 0;
};

// Per-frame log-depth field: depth = exp(field). Blocks "depth.log.<k>".
class DirectDepthField final : public DepthPredictor {
 public:
  std::string name() const override { return "direct"; }
  static std::string BlockName(std::size_t frame);

  void RegisterParams(ParamVector& params, std::size_t num_frames, int width,
                      int height, std::uint64_t seed) const override;
  DepthMap Predict(const ParamVector& params, std::size_t frame, const IntensityImage& luma,
                   const SparseDepth& sparse) const override;
  void Backward(const ParamVector& params, std::size_t frame, const IntensityImage& luma,
                const SparseDepth& sparse, std::span<const double> grad_depth,
                ParamVector& grads) const override;

  // Writes log(depth) into the field of `frame`.
  static void Initialize(ParamVector& params, std::size_t frame, const DepthMap& depth);
};

// Per-pair tangent and mask logits. Blocks "pose.tangent.<k>" and
// "mask.logit.<k>.<level>".
class DirectPoseField final : public PosePredictor {
 public:
  std::string name() const override { return "direct"; }
  static std::string TangentBlock(std::size_t pair);
  static std::string MaskBlock(std::size_t pair, int level);

  void RegisterParams(ParamVector& params, std::size_t num_pairs, int width, int height,
                      int levels, std::uint64_t seed) const override;
  PairPrediction Predict(const ParamVector& params, std::size_t pair,
                         const IntensityImage& luma1,
                         const IntensityImage& luma2) const override;
  void Backward(const ParamVector& params, std::size_t pair, const IntensityImage& luma1,
                const IntensityImage& luma2, const Vec6& grad_tangent,
                const std::vector<ScalarMap>* grad_masks, ParamVector& grads) const override;

  static void SetTangent(ParamVector& params, std::size_t pair, const Se3Tangent& xi);
};

// Three 3x3 stride-1 convolutions 4 -> 8 -> 8 -> 1 with ELU activations over
// (normalized luma, scaled sparse depth, validity, ones). The output is
// output_depth_scale * (ELU(x) + 1 + positive_eps). Weights are shared by all
// frames.
class ToyDepthNet final : public DepthPredictor {
 public:
  explicit ToyDepthNet(PredictorConfig config = {}) : config_(config) {}
  std::string name() const override { return "toycnn"; }

  void RegisterParams(ParamVector& params, std::size_t num_frames, int width,
                      int height, std::uint64_t seed) const override;
  DepthMap Predict(const ParamVector& params, std::size_t frame, const IntensityImage& luma,
                   const SparseDepth& sparse) const override;
  void Backward(const ParamVector& params, std::size_t frame, const IntensityImage& luma,
                const SparseDepth& sparse, std::span<const double> grad_depth,
                ParamVector& grads) const override;

 private:
  PredictorConfig config_;
};

// Encoder of two 3x3 stride-2 convolutions (2 -> 8 -> 8, ELU) over the
// normalized luma pair. The pose head is a linear 3x3 stride-2 convolution to
// 6 channels, spatially averaged and scaled by pose_output_scale. The mask
// head is a 1x1 convolution on the encoder features, resampled (nearest) to
// every pyramid level plus a per-level bias, then passed through a sigmoid.
class ToyPoseNet final : public PosePredictor {
 public:
  explicit ToyPoseNet(PredictorConfig config = {}) : config_(config) {}
  std::string name() const override { return "toycnn"; }

  void RegisterParams(ParamVector& params, std::size_t num_pairs, int width, int height,
                      int levels, std::uint64_t seed) const override;
  PairPrediction Predict(const ParamVector& params, std::size_t pair,
                         const IntensityImage& luma1,
                         const IntensityImage& luma2) const override;
  void Backward(const ParamVector& params, std::size_t pair, const IntensityImage& luma1,
                const IntensityImage& luma2, const Vec6& grad_tangent,
                const std::vector<ScalarMap>* grad_masks, ParamVector& grads) const override;

 private:
  PredictorConfig config_;
};

struct PredictorPair {
  std::unique_ptr<DepthPredictor> depth;
  std::unique_ptr<PosePredictor> pose;
};

// "direct" or "toycnn"; throws kInvalidArgument otherwise.
PredictorPair MakePredictors(const std::string& kind, const PredictorConfig& config);

}  // namespace depthpose
