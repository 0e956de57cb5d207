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


#include "depthpose/diffcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "depthpose/error.hpp"
#include "depthpose/kernels.hpp"

namespace depthpose {
namespace {

std::vector<ScalarMap> OnesPyramid(int width, int height, int levels) {
  std::vector<ScalarMap> out;
  for (int l = 0; l < levels; ++l) {
    out.emplace_back(width, height, 1.0);
    width /= 2;
    height /= 2;
  }
  return out;
}

double MedianMeasurement(const std::vector<SparseDepth>& inputs,
                         const std::vector<SparseDepth>& supervision) {
  std::vector<double> values;
  auto collect = [&values](const std::vector<SparseDepth>& maps) {
    for (const SparseDepth& s : maps) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.valid_mask()[i]) values.push_back(s.values()[i]);
      }
    }
  };
  collect(inputs);
  if (values.empty()) collect(supervision);
  if (values.empty()) return 1.0;
  auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

}  // namespace

void AdamConfig::Validate() const {
  if (!(lr > 0.0) || !(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) ||
      !(weight_decay >= 0.0) || !(epsilon > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "Adam hyperparameters out of range");
  }
}

OptimizerState OptimizerState::ForParams(const ParamVector& params, const AdamConfig& config) {
  config.Validate();
  OptimizerState s;
  s.config = config;
  s.m.assign(params.size(), 0.0);
  s.v.assign(params.size(), 0.0);
  return s;
}

void AdamStep(OptimizerState& state, ParamVector& params, const ParamVector& grads,
              std::span<const std::uint8_t> frozen) {
  if (!params.SameLayout(grads) || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw Error(ErrorKind::kDimension, "optimizer, parameter and gradient layouts differ");
  }
  for (std::size_t b = 0; b < grads.num_blocks(); ++b) {
    for (double g : grads.block(b)) {
      if (!std::isfinite(g)) {
        throw Error(ErrorKind::kDiverged,
                    "non-finite gradient in block '" + grads.block_info(b).name + "'");
      }
    }
  }
  ++state.step;
  const AdamConfig& c = state.config;
  kernels::AdamCoefficients coeff;
  coeff.lr = c.lr;
  coeff.beta1 = c.beta1;
  coeff.beta2 = c.beta2;
  coeff.epsilon = c.epsilon;
  coeff.bias_correction1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
  coeff.bias_correction2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
  const auto& k = kernels::Active();
  for (std::size_t b = 0; b < params.num_blocks(); ++b) {
    if (b < frozen.size() && frozen[b]) continue;
    const auto& info = params.block_info(b);
    coeff.weight_decay = info.decay ? c.weight_decay : 0.0;
    k.adam_update(params.block(b).data(), state.m.data() + info.offset,
                  state.v.data() + info.offset, grads.block(b).data(), info.size, coeff);
  }
}

FiniteDifferenceReport FiniteDifferenceCheck(const LossFunction& loss, const ParamVector& params,
                                             const FiniteDifferenceOptions& options) {
  FiniteDifferenceReport report;
  ParamVector analytic = params.ZerosLike();
  loss(params, &analytic);
  ParamVector probe = params;
  const double h = options.step;
  for (std::size_t b = 0; b < params.num_blocks(); ++b) {
    const auto& info = params.block_info(b);
    std::vector<std::size_t> coords(info.size);
    std::iota(coords.begin(), coords.end(), std::size_t{0});
    if (coords.size() > options.max_coords_per_block) {
      std::vector<std::size_t> picked;
      std::mt19937_64 rng(options.seed + b);
      std::sample(coords.begin(), coords.end(), std::back_inserter(picked),
                  options.max_coords_per_block, rng);
      coords = std::move(picked);
    }
    BlockCheck check;
    check.name = info.name;
    for (std::size_t i : coords) {
      double& x = probe.block(b)[i];
      const double x0 = x;
      x = x0 + h;
      const double up = loss(probe, nullptr);
      x = x0 - h;
      const double down = loss(probe, nullptr);
      x = x0;
      const double numeric = (up - down) / (2.0 * h);
      const double a = analytic.block(b)[i];
      const double abs_err = std::fabs(a - numeric);
      const double scale = std::max(std::fabs(a), std::fabs(numeric));
      const double rel_err = scale > 0.0 ? abs_err / scale : 0.0;
      const double ratio = abs_err / (options.rel_tol * scale + options.abs_floor);
      ++check.coords_checked;
      if (!(ratio <= 1.0)) check.passed = false;
      if (!(ratio <= check.max_tolerance_ratio)) {
        check.max_tolerance_ratio = ratio;
        check.worst_index = i;
      }
      check.max_rel_error = std::max(check.max_rel_error, rel_err);
      check.max_abs_error = std::max(check.max_abs_error, abs_err);
    }
    report.passed = report.passed && check.passed;
    report.blocks.push_back(std::move(check));
  }
  return report;
}

SequenceObjective::SequenceObjective(const std::vector<RefineFrame>& frames,
                                     const std::vector<SparseDepth>& supervision,
                                     const CameraIntrinsics& k, const PredictorPair& predictors,
                                     const LossWeights& weights, const RefineOptions& options)
    : supervision_(supervision), k_(k), predictors_(&predictors), weights_(weights),
      options_(options) {
  k.Validate();
  weights.Validate();
  if (frames.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "refinement needs at least 2 frames");
  }
  if (supervision.size() != frames.size()) {
    throw Error(ErrorKind::kInvalidArgument, "one supervision map per frame is required");
  }
  if (!predictors.depth || !predictors.pose) {
    throw Error(ErrorKind::kInvalidArgument, "both predictors are required");
  }
  for (const RefineFrame& f : frames) {
    if (f.image.width() != k.width || f.image.height() != k.height ||
        f.sparse.width() != k.width || f.sparse.height() != k.height) {
      throw Error(ErrorKind::kDimension, "frame size disagrees with intrinsics");
    }
    lumas_.push_back(ToLuma(f.image));
    sparse_.push_back(f.sparse);
    image_pyramids_.push_back(BuildPyramid(lumas_.back(), options.levels));
    sparse_pyramids_.push_back(BuildSparsePyramid(f.sparse, options.levels));
  }
  for (const SparseDepth& s : supervision) {
    if (s.width() != k.width || s.height() != k.height) {
      throw Error(ErrorKind::kDimension, "supervision size disagrees with intrinsics");
    }
  }
}

ParamVector SequenceObjective::InitialParams(std::uint64_t seed) const {
  ParamVector params;
  const std::size_t n = lumas_.size();
  predictors_->depth->RegisterParams(params, n, k_.width, k_.height, seed);
  predictors_->pose->RegisterParams(params, n - 1, k_.width, k_.height, options_.levels, seed);

  if (dynamic_cast<const DirectDepthField*>(predictors_->depth.get()) != nullptr) {
    if (options_.initial_depth) {
      if (options_.initial_depth->size() != n) {
        throw Error(ErrorKind::kInvalidArgument, "one initial depth map per frame is required");
      }
      for (std::size_t f = 0; f < n; ++f) {
        DirectDepthField::Initialize(params, f, (*options_.initial_depth)[f]);
      }
    } else {
      const double median = MedianMeasurement(sparse_, supervision_);
      for (std::size_t f = 0; f < n; ++f) {
        DirectDepthField::Initialize(params, f, DepthMap(k_.width, k_.height, median));
      }
    }
  }
  if (dynamic_cast<const DirectPoseField*>(predictors_->pose.get()) != nullptr) {
    if (options_.initial_pose) {
      if (options_.initial_pose->size() != n - 1) {
        throw Error(ErrorKind::kInvalidArgument, "one initial pose per frame pair is required");
      }
      for (std::size_t p = 0; p + 1 < n; ++p) {
        DirectPoseField::SetTangent(params, p, (*options_.initial_pose)[p]);
      }
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (int l = 0; l < options_.levels; ++l) {
        for (double& v : params.block(DirectPoseField::MaskBlock(p, l))) {
          v = options_.initial_mask_logit;
        }
      }
    }
  }
  return params;
}

std::vector<std::uint8_t> SequenceObjective::FrozenMask(const ParamVector& params) const {
  ParamVector depth_only;
  predictors_->depth->RegisterParams(depth_only, lumas_.size(), k_.width, k_.height, 0);
  std::vector<std::uint8_t> frozen(params.num_blocks(), 0);
  for (std::size_t b = 0; b < params.num_blocks(); ++b) {
    const bool is_depth = b < depth_only.num_blocks();
    frozen[b] = is_depth ? options_.freeze_depth : options_.freeze_pose;
  }
  return frozen;
}

std::vector<DepthMap> SequenceObjective::PredictDepths(const ParamVector& params) const {
  std::vector<DepthMap> out;
  for (std::size_t f = 0; f < lumas_.size(); ++f) {
    out.push_back(predictors_->depth->Predict(params, f, lumas_[f], sparse_[f]));
  }
  return out;
}

std::vector<PairPrediction> SequenceObjective::PredictPairs(const ParamVector& params) const {
  std::vector<PairPrediction> out;
  for (std::size_t p = 0; p + 1 < lumas_.size(); ++p) {
    out.push_back(predictors_->pose->Predict(params, p, lumas_[p], lumas_[p + 1]));
  }
  return out;
}

LossBreakdown SequenceObjective::Evaluate(const ParamVector& params, ParamVector* grad) const {
  const std::size_t n = lumas_.size();
  const std::size_t pairs = n - 1;
  const double inv_frames = 1.0 / static_cast<double>(n);
  const double inv_pairs = 1.0 / static_cast<double>(pairs);
  const int levels = options_.levels;

  const std::vector<DepthMap> depths = PredictDepths(params);
  std::vector<DepthPyramid> depth_pyramids;
  for (const DepthMap& d : depths) depth_pyramids.push_back(BuildDepthPyramid(d, levels));

  std::vector<std::vector<double>> grad_depth;
  if (grad != nullptr) grad_depth.assign(n, std::vector<double>(k_.width * k_.height, 0.0));

  double supervised = 0.0;
  double smoothness = 0.0;
  for (std::size_t f = 0; f < n; ++f) {
    const ValueAndGradient sup = SupervisedLoss(depths[f], supervision_[f]);
    const ValueAndGradient smo = SmoothnessLoss(depths[f]);
    supervised += sup.value;
    smoothness += smo.value;
    if (grad != nullptr) {
      const double a = weights_.alpha * inv_frames;
      const double g = weights_.gamma * inv_frames;
      for (std::size_t i = 0; i < grad_depth[f].size(); ++i) {
        grad_depth[f][i] += a * sup.grad[i] + g * smo.grad[i];
      }
    }
  }
  supervised *= inv_frames;
  smoothness *= inv_frames;

  double photometric = 0.0;
  double mask_reg = 0.0;
  std::vector<double> per_scale(levels, 0.0);
  for (std::size_t p = 0; p < pairs; ++p) {
    const PairPrediction pred = predictors_->pose->Predict(params, p, lumas_[p], lumas_[p + 1]);
    const TangentPose pose(pred.tangent);
    PhotometricInputs in;
    in.image1 = &image_pyramids_[p];
    in.image2 = &image_pyramids_[p + 1];
    in.depth1 = &depth_pyramids[p];
    in.depth2 = &depth_pyramids[p + 1];
    in.sparse1 = &sparse_pyramids_[p];
    in.sparse2 = &sparse_pyramids_[p + 1];
    std::vector<ResidualMap> residuals;
    for (int l = 0; l < levels; ++l) {
      residuals.push_back(PhotometricResidual(in, pose, k_, l, options_.indicator, grad != nullptr));
    }
    const std::vector<ScalarMap> masks =
        options_.use_mask ? pred.masks : OnesPyramid(k_.width, k_.height, levels);
    const MaskedPhotometricResult mp = MaskedPhotometricLoss(residuals, masks);
    photometric += mp.value;
    for (int l = 0; l < levels; ++l) per_scale[l] += mp.per_scale[l];
    MaskRegularizationResult reg;
    if (options_.use_mask) {
      reg = MaskRegularizationLoss(masks);
      mask_reg += reg.value;
    }
    if (grad == nullptr) continue;

    const double b = weights_.beta * inv_pairs;
    const double t = weights_.theta * inv_pairs;
    for (std::size_t i = 0; i < mp.grad_depth1.size(); ++i) {
      grad_depth[p][i] += b * mp.grad_depth1[i];
      grad_depth[p + 1][i] += b * mp.grad_depth2[i];
    }
    const Vec6 grad_tangent = b * mp.grad_tangent;
    std::vector<ScalarMap> grad_masks;
    if (options_.use_mask) {
      grad_masks = masks;
      for (int l = 0; l < levels; ++l) {
        for (std::size_t i = 0; i < grad_masks[l].data.size(); ++i) {
          grad_masks[l].data[i] = b * mp.grad_mask[l].data[i] + t * reg.grad_mask[l].data[i];
        }
      }
    }
    predictors_->pose->Backward(params, p, lumas_[p], lumas_[p + 1], grad_tangent,
                                options_.use_mask ? &grad_masks : nullptr, *grad);
  }
  photometric *= inv_pairs;
  mask_reg *= inv_pairs;
  for (double& v : per_scale) v *= inv_pairs;

  if (grad != nullptr) {
    for (std::size_t f = 0; f < n; ++f) {
      predictors_->depth->Backward(params, f, lumas_[f], sparse_[f], grad_depth[f], *grad);
    }
  }
  return TotalLoss(supervised, photometric, smoothness, mask_reg, std::move(per_scale),
                   weights_);
}

RefinementResult JointRefine(const std::vector<RefineFrame>& frames,
                             const std::vector<SparseDepth>& supervision,
                             const CameraIntrinsics& k, const PredictorPair& predictors,
                             const LossWeights& weights, int iters, std::uint64_t seed,
                             const RefineOptions& options) {
  if (iters < 1) {
    throw Error(ErrorKind::kInvalidArgument, "refinement needs iters >= 1");
  }
  const SequenceObjective objective(frames, supervision, k, predictors, weights, options);
  RefinementResult result;
  result.params = objective.InitialParams(seed);
  OptimizerState state = OptimizerState::ForParams(result.params, options.adam);
  const std::vector<std::uint8_t> frozen = objective.FrozenMask(result.params);
  ParamVector grad = result.params.ZerosLike();

  // Updated parameters can overflow the predicted depths (kDomain).
  const auto evaluate = [&](int it, ParamVector* g) {
    try {
      return objective.Evaluate(result.params, g);
    } catch (const Error& e) {
      if (it == 0 || e.kind() != ErrorKind::kDomain) throw;
      std::ostringstream os;
      os << "iteration " << it << ": " << e.what();
      throw Error(ErrorKind::kDiverged, os.str());
    }
  };

  for (int it = 0; it < iters; ++it) {
    grad.SetZero();
    const LossBreakdown loss = evaluate(it, &grad);
    if (!std::isfinite(loss.total)) {
      std::ostringstream os;
      os << "loss became non-finite at iteration " << it;
      throw Error(ErrorKind::kDiverged, os.str());
    }
    result.history.push_back(loss);
    if (options.on_iteration) options.on_iteration(it, loss);
    try {
      AdamStep(state, result.params, grad, frozen);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "iteration " << it << ": " << e.what();
      throw Error(ErrorKind::kDiverged, os.str());
    }
  }
  result.final_loss = evaluate(iters, nullptr);
  if (!std::isfinite(result.final_loss.total)) {
    throw Error(ErrorKind::kDiverged, "loss became non-finite after the last iteration");
  }
  result.depths = objective.PredictDepths(result.params);
  for (const PairPrediction& p : objective.PredictPairs(result.params)) {
    result.relative_poses.push_back(ExpMap(p.tangent));
    result.masks.push_back(p.masks);
  }
  return result;
}

}  // namespace depthpose
