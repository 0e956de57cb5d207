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


// Loss terms of the joint depth/pose objective and their analytic gradients.
//
// Every term is a mean over the pixels it covers rather than a plain sum, so
// the weights do not depend on resolution. The photometric term is
// evaluated on a pyramid; level s uses intrinsics K.AtLevel(s) and the
// residual weight 1 / (2 * 2^s).

#pragma once

#include <cstdint>
#include <vector>

#include "depthpose/geometry.hpp"
#include "depthpose/imaging.hpp"

namespace depthpose {

struct LossWeights {
  double alpha = 1.0;  // supervised
  double beta = 0.1;   // masked photometric
  double gamma = 0.1;  // smoothness
  double theta = 0.2;  // mask regularization

  void Validate() const;
};

struct LossBreakdown {
  double supervised = 0.0;
  double photometric_masked = 0.0;
  double smoothness = 0.0;
  double mask_reg = 0.0;
  double total = 0.0;
  std::vector<double> per_scale_photometric;
};

// Row-major single-channel map; used for masks and gradient fields.
struct ScalarMap {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  ScalarMap() = default;
  ScalarMap(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}
};

struct ValueAndGradient {
  double value = 0.0;
  std::vector<double> grad;
};

// Mean squared error over the valid pixels of `gt`. Zero value and gradient
// when `gt` has no valid pixel. Throws kDimension on a size mismatch.
ValueAndGradient SupervisedLoss(const DepthMap& pred, const SparseDepth& gt);

// Which pixels contribute to the photometric residual.
enum class IndicatorMode {
  kUnmeasured,  // only pixels without an input measurement (1_{d = 0})
  kMeasured,    // only pixels with an input measurement (1_{d != 0})
  kAll,         // every pixel; used by the photometric evaluation metric
};

struct PhotometricInputs {
  const ImagePyramid* image1 = nullptr;   // single-channel (luma)
  const ImagePyramid* image2 = nullptr;
  const DepthPyramid* depth1 = nullptr;
  const DepthPyramid* depth2 = nullptr;
  const SparsePyramid* sparse1 = nullptr;  // may be null with IndicatorMode::kAll
  const SparsePyramid* sparse2 = nullptr;
};

// Per-pixel residual at one pyramid level together with its partial
// derivatives with respect to the level-s depths (same pixel in each frame)
// and the pose tangent.
struct ResidualMap {
  int level = 0;
  int width = 0;
  int height = 0;
  int base_width = 0;   // level-0 size, for pulling gradients back down
  int base_height = 0;
  std::vector<double> residual;
  std::vector<std::uint8_t> valid;  // at least one of the two warps is valid
  bool has_derivatives = false;
  std::vector<double> d_depth1;
  std::vector<double> d_depth2;
  std::vector<Vec6> d_tangent;
};

// residual(u) = 1/(2 2^s) [ 1_1(u) |I1<-2(u) - I1(u)| + 1_2(u) |I2<-1(u) - I2(u)| ]
// where I1<-2 samples image 2 at the warp of u through (D1, T) and I2<-1
// samples image 1 at the warp of u through (D2, T^-1). A term is dropped
// where its warp leaves the image. Throws kDimension on inconsistent shapes.
ResidualMap PhotometricResidual(const PhotometricInputs& in, const TangentPose& pose,
                                const CameraIntrinsics& k, int level,
                                IndicatorMode mode = IndicatorMode::kUnmeasured,
                                bool with_derivatives = true);

ResidualMap PhotometricResidual(const PhotometricInputs& in,
                                const Se3Transform& t_1_to_2,
                                const CameraIntrinsics& k, int level,
                                IndicatorMode mode = IndicatorMode::kUnmeasured,
                                bool with_derivatives = true);

struct MaskedPhotometricResult {
  double value = 0.0;
  std::vector<double> per_scale;
  std::vector<double> grad_depth1;  // level-0 depth of frame 1
  std::vector<double> grad_depth2;
  Vec6 grad_tangent = Vec6::Zero();
  std::vector<ScalarMap> grad_mask;  // one per level
};

// value = sum_s mean_{valid u} [ E_s(u) * residual_s(u) ].
// Throws kDimension when a mask level is missing or mis-shaped.
// Depth and tangent gradients stay zero for residuals built without derivatives.
MaskedPhotometricResult MaskedPhotometricLoss(const std::vector<ResidualMap>& residuals,
                                              const std::vector<ScalarMap>& masks);

// Mean over interior pixels of |Dxx| + |Dyy| + |Dxy|. The subgradient at a
// kink is zero. Throws kDimension below 3x3.
ValueAndGradient SmoothnessLoss(const DepthMap& depth);

struct MaskRegularizationResult {
  double value = 0.0;
  std::vector<ScalarMap> grad_mask;
};

// Cross-entropy against an all-ones target: sum_s mean_u [ -log E_s(u) ].
// Throws kDomain when a mask value is <= 0.
MaskRegularizationResult MaskRegularizationLoss(const std::vector<ScalarMap>& masks);

// Weighted sum, evaluated as ((a L_D + b L_pho) + g L_smo) + t L_E.
LossBreakdown TotalLoss(double supervised, double photometric_masked,
                        double smoothness, double mask_reg,
                        std::vector<double> per_scale_photometric,
                        const LossWeights& w);

}  // namespace depthpose
