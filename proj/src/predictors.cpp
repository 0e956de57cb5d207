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


#include "depthpose/predictors.hpp"

#include <cmath>
#include <random>

#include "depthpose/conv.hpp"
#include "depthpose/error.hpp"

namespace depthpose {
namespace {

using nn::ConvSpec;
using nn::Tensor;

constexpr ConvSpec kDepthConv1{4, 8, 3, 1};
constexpr ConvSpec kDepthConv2{8, 8, 3, 1};
constexpr ConvSpec kDepthConv3{8, 1, 3, 1};
constexpr ConvSpec kPoseEnc1{2, 8, 3, 2};
constexpr ConvSpec kPoseEnc2{8, 8, 3, 2};
constexpr ConvSpec kPoseHead{8, 6, 3, 2};
constexpr ConvSpec kMaskHead{8, 1, 1, 1};

std::vector<std::pair<int, int>> LevelDims(int width, int height, int levels) {
  std::vector<std::pair<int, int>> dims{{width, height}};
  for (int l = 1; l < levels; ++l) dims.emplace_back(dims.back().first / 2, dims.back().second / 2);
  return dims;
}

void AddConvBlocks(ParamVector& params, const std::string& prefix, const ConvSpec& spec,
                   std::mt19937_64& rng) {
  const double fan_in = static_cast<double>(spec.in_channels) * spec.kernel * spec.kernel;
  std::normal_distribution<double> normal(0.0, 0.5 / std::sqrt(fan_in));
  std::vector<double> w(spec.weight_count());
  for (double& v : w) v = normal(rng);
  params.AddBlock(prefix + ".weight",
                  {spec.out_channels, spec.in_channels, spec.kernel, spec.kernel}, true, w);
  params.AddBlock(prefix + ".bias", {spec.out_channels}, true);
}

double NormalizeIntensity(double v) { return (v - 0.5) / 0.5; }

void CheckLuma(const IntensityImage& img) {
  if (img.channels() != 1) {
    throw Error(ErrorKind::kDimension, "predictors expect single-channel (luma) images");
  }
}

struct DepthForward {
  Tensor input, pre1, act1, pre2, act2, pre3;
};

DepthForward RunDepthNet(const ParamVector& p, const IntensityImage& luma,
                         const SparseDepth& sparse, const PredictorConfig& cfg) {
  CheckLuma(luma);
  if (sparse.width() != luma.width() || sparse.height() != luma.height()) {
    throw Error(ErrorKind::kDimension, "depth net inputs differ in size");
  }
  DepthForward f;
  f.input = Tensor(4, luma.height(), luma.width());
  for (int y = 0; y < luma.height(); ++y) {
    for (int x = 0; x < luma.width(); ++x) {
      const bool valid = sparse.valid(x, y);
      f.input.at(0, y, x) = NormalizeIntensity(luma.at(0, x, y));
      f.input.at(1, y, x) = valid ? sparse.value(x, y) * cfg.depth_input_scale : 0.0;
      f.input.at(2, y, x) = valid ? 1.0 : 0.0;
      f.input.at(3, y, x) = 1.0;
    }
  }
  f.pre1 = nn::Conv2d(f.input, p.block("depthnet.conv1.weight"), p.block("depthnet.conv1.bias"), kDepthConv1);
  f.act1 = f.pre1;
  nn::EluInPlace(f.act1);
  f.pre2 = nn::Conv2d(f.act1, p.block("depthnet.conv2.weight"), p.block("depthnet.conv2.bias"), kDepthConv2);
  f.act2 = f.pre2;
  nn::EluInPlace(f.act2);
  f.pre3 = nn::Conv2d(f.act2, p.block("depthnet.conv3.weight"), p.block("depthnet.conv3.bias"), kDepthConv3);
  return f;
}

struct PoseForward {
  Tensor input, pre1, act1, pre2, act2, head, mask_head;
};

PoseForward RunPoseNet(const ParamVector& p, const IntensityImage& a,
                       const IntensityImage& b) {
  CheckLuma(a);
  CheckLuma(b);
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorKind::kDimension, "pose net frames differ in size");
  }
  PoseForward f;
  f.input = Tensor(2, a.height(), a.width());
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      f.input.at(0, y, x) = NormalizeIntensity(a.at(0, x, y));
      f.input.at(1, y, x) = NormalizeIntensity(b.at(0, x, y));
    }
  }
  f.pre1 = nn::Conv2d(f.input, p.block("posenet.enc1.weight"), p.block("posenet.enc1.bias"), kPoseEnc1);
  f.act1 = f.pre1;
  nn::EluInPlace(f.act1);
  f.pre2 = nn::Conv2d(f.act1, p.block("posenet.enc2.weight"), p.block("posenet.enc2.bias"), kPoseEnc2);
  f.act2 = f.pre2;
  nn::EluInPlace(f.act2);
  f.head = nn::Conv2d(f.act2, p.block("posenet.pose.weight"), p.block("posenet.pose.bias"), kPoseHead);
  f.mask_head = nn::Conv2d(f.act2, p.block("posenet.mask.weight"), p.block("posenet.mask.bias"), kMaskHead);
  return f;
}

// Nearest source index of output coordinate i when resampling n_src -> n_dst.
int NearestSource(int i, int n_dst, int n_src) {
  const int s = static_cast<int>((static_cast<long long>(2 * i + 1) * n_src) / (2LL * n_dst));
  return std::min(s, n_src - 1);
}

}  // namespace

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::vector<ScalarMap> ExplainabilityMask::Values() const {
  std::vector<ScalarMap> out;
  for (const ScalarMap& l : logits) {
    ScalarMap m(l.width, l.height);
    for (std::size_t i = 0; i < l.data.size(); ++i) m.data[i] = Sigmoid(l.data[i]);
    out.push_back(std::move(m));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Direct fields

std::string DirectDepthField::BlockName(std::size_t frame) {
  return "depth.log." + std::to_string(frame);
}

void DirectDepthField::RegisterParams(ParamVector& params, std::size_t num_frames, int width,
                                      int height, std::uint64_t) const {
  for (std::size_t k = 0; k < num_frames; ++k) {
    params.AddBlock(BlockName(k), {height, width}, false);
  }
}

DepthMap DirectDepthField::Predict(const ParamVector& params, std::size_t frame,
                                   const IntensityImage& luma, const SparseDepth&) const {
  const auto field = params.block(BlockName(frame));
  std::vector<double> d(field.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::exp(field[i]);
  return DepthMap(luma.width(), luma.height(), std::move(d));
}

void DirectDepthField::Backward(const ParamVector& params, std::size_t frame,
                                const IntensityImage&, const SparseDepth&,
                                std::span<const double> grad_depth, ParamVector& grads) const {
  const auto field = params.block(BlockName(frame));
  auto g = grads.block(BlockName(frame));
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += grad_depth[i] * std::exp(field[i]);
}

void DirectDepthField::Initialize(ParamVector& params, std::size_t frame,
                                  const DepthMap& depth) {
  auto field = params.block(BlockName(frame));
  if (field.size() != depth.size()) {
    throw Error(ErrorKind::kDimension, "initial depth does not match the depth field");
  }
  for (std::size_t i = 0; i < field.size(); ++i) field[i] = std::log(depth.data()[i]);
}

std::string DirectPoseField::TangentBlock(std::size_t pair) {
  return "pose.tangent." + std::to_string(pair);
}

std::string DirectPoseField::MaskBlock(std::size_t pair, int level) {
  return "mask.logit." + std::to_string(pair) + "." + std::to_string(level);
}

void DirectPoseField::RegisterParams(ParamVector& params, std::size_t num_pairs, int width,
                                     int height, int levels, std::uint64_t) const {
  const auto dims = LevelDims(width, height, levels);
  for (std::size_t k = 0; k < num_pairs; ++k) {
    params.AddBlock(TangentBlock(k), {6}, false);
    for (int l = 0; l < levels; ++l) {
      params.AddBlock(MaskBlock(k, l), {dims[l].second, dims[l].first}, false);
    }
  }
}

PairPrediction DirectPoseField::Predict(const ParamVector& params, std::size_t pair,
                                        const IntensityImage&, const IntensityImage&) const {
  PairPrediction out;
  const auto t = params.block(TangentBlock(pair));
  out.tangent = Se3Tangent::FromVector(Vec6(t.data()));
  for (int l = 0; params.Contains(MaskBlock(pair, l)); ++l) {
    const auto& info = params.block_info(params.IndexOf(MaskBlock(pair, l)));
    const auto logits = params.block(MaskBlock(pair, l));
    ScalarMap m(info.shape[1], info.shape[0]);
    for (std::size_t i = 0; i < logits.size(); ++i) m.data[i] = Sigmoid(logits[i]);
    out.masks.push_back(std::move(m));
  }
  return out;
}

void DirectPoseField::Backward(const ParamVector& params, std::size_t pair,
                               const IntensityImage&, const IntensityImage&,
                               const Vec6& grad_tangent, const std::vector<ScalarMap>* grad_masks,
                               ParamVector& grads) const {
  auto gt = grads.block(TangentBlock(pair));
  for (int i = 0; i < 6; ++i) gt[i] += grad_tangent[i];
  if (grad_masks == nullptr) return;
  for (std::size_t l = 0; l < grad_masks->size(); ++l) {
    const std::string name = MaskBlock(pair, static_cast<int>(l));
    const auto logits = params.block(name);
    auto g = grads.block(name);
    const auto& gm = (*grad_masks)[l].data;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double s = Sigmoid(logits[i]);
      g[i] += gm[i] * s * (1.0 - s);
    }
  }
}

void DirectPoseField::SetTangent(ParamVector& params, std::size_t pair, const Se3Tangent& xi) {
  auto t = params.block(TangentBlock(pair));
  const Vec6 v = xi.ToVector();
  for (int i = 0; i < 6; ++i) t[i] = v[i];
}

// ---------------------------------------------------------------------------
// Toy depth network

void ToyDepthNet::RegisterParams(ParamVector& params, std::size_t, int, int,
                                 std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  AddConvBlocks(params, "depthnet.conv1", kDepthConv1, rng);
  AddConvBlocks(params, "depthnet.conv2", kDepthConv2, rng);
  AddConvBlocks(params, "depthnet.conv3", kDepthConv3, rng);
}

DepthMap ToyDepthNet::Predict(const ParamVector& params, std::size_t, const IntensityImage& luma,
                              const SparseDepth& sparse) const {
  const DepthForward f = RunDepthNet(params, luma, sparse, config_);
  std::vector<double> d(f.pre3.data.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = config_.output_depth_scale * ((nn::Elu(f.pre3.data[i]) + 1.0) + config_.positive_eps);
  }
  return DepthMap(luma.width(), luma.height(), std::move(d));
}

void ToyDepthNet::Backward(const ParamVector& params, std::size_t, const IntensityImage& luma,
                           const SparseDepth& sparse, std::span<const double> grad_depth,
                           ParamVector& grads) const {
  const DepthForward f = RunDepthNet(params, luma, sparse, config_);
  Tensor g3(1, f.pre3.height, f.pre3.width);
  for (std::size_t i = 0; i < g3.data.size(); ++i) {
    g3.data[i] = grad_depth[i] * config_.output_depth_scale * nn::EluDerivative(f.pre3.data[i]);
  }
  Tensor g2(8, f.act2.height, f.act2.width);
  nn::Conv2dBackward(f.act2, params.block("depthnet.conv3.weight"), g3, kDepthConv3, &g2,
                     grads.block("depthnet.conv3.weight"), grads.block("depthnet.conv3.bias"));
  nn::EluBackwardInPlace(f.pre2, g2);
  Tensor g1(8, f.act1.height, f.act1.width);
  nn::Conv2dBackward(f.act1, params.block("depthnet.conv2.weight"), g2, kDepthConv2, &g1,
                     grads.block("depthnet.conv2.weight"), grads.block("depthnet.conv2.bias"));
  nn::EluBackwardInPlace(f.pre1, g1);
  nn::Conv2dBackward(f.input, params.block("depthnet.conv1.weight"), g1, kDepthConv1, nullptr,
                     grads.block("depthnet.conv1.weight"), grads.block("depthnet.conv1.bias"));
}

// ---------------------------------------------------------------------------
// Toy pose network with attached mask head

void ToyPoseNet::RegisterParams(ParamVector& params, std::size_t, int, int, int levels,
                                std::uint64_t seed) const {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  AddConvBlocks(params, "posenet.enc1", kPoseEnc1, rng);
  AddConvBlocks(params, "posenet.enc2", kPoseEnc2, rng);
  AddConvBlocks(params, "posenet.pose", kPoseHead, rng);
  AddConvBlocks(params, "posenet.mask", kMaskHead, rng);
  params.AddBlock("posenet.mask.level_bias", {levels}, true);
}

PairPrediction ToyPoseNet::Predict(const ParamVector& params, std::size_t,
                                   const IntensityImage& luma1,
                                   const IntensityImage& luma2) const {
  const PoseForward f = RunPoseNet(params, luma1, luma2);
  PairPrediction out;
  Vec6 v;
  const double n = static_cast<double>(f.head.plane());
  for (int c = 0; c < 6; ++c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < f.head.plane(); ++i) sum += f.head.data[c * f.head.plane() + i];
    v[c] = config_.pose_output_scale * (sum / n);
  }
  out.tangent = Se3Tangent::FromVector(v);

  const auto level_bias = params.block("posenet.mask.level_bias");
  const int levels = static_cast<int>(level_bias.size());
  const auto dims = LevelDims(luma1.width(), luma1.height(), levels);
  for (int l = 0; l < levels; ++l) {
    const auto [w, h] = dims[l];
    ScalarMap m(w, h);
    for (int y = 0; y < h; ++y) {
      const int sy = NearestSource(y, h, f.mask_head.height);
      for (int x = 0; x < w; ++x) {
        const int sx = NearestSource(x, w, f.mask_head.width);
        m.data[static_cast<std::size_t>(y) * w + x] =
            Sigmoid(f.mask_head.at(0, sy, sx) + level_bias[l]);
      }
    }
    out.masks.push_back(std::move(m));
  }
  return out;
}

void ToyPoseNet::Backward(const ParamVector& params, std::size_t, const IntensityImage& luma1,
                          const IntensityImage& luma2, const Vec6& grad_tangent,
                          const std::vector<ScalarMap>* grad_masks, ParamVector& grads) const {
  const PoseForward f = RunPoseNet(params, luma1, luma2);
  Tensor g_act2(8, f.act2.height, f.act2.width);

  Tensor g_head(6, f.head.height, f.head.width);
  const double inv_n = 1.0 / static_cast<double>(f.head.plane());
  for (int c = 0; c < 6; ++c) {
    const double g = grad_tangent[c] * config_.pose_output_scale * inv_n;
    std::fill_n(g_head.data.begin() + c * g_head.plane(), g_head.plane(), g);
  }
  nn::Conv2dBackward(f.act2, params.block("posenet.pose.weight"), g_head, kPoseHead, &g_act2,
                     grads.block("posenet.pose.weight"), grads.block("posenet.pose.bias"));

  if (grad_masks != nullptr && !grad_masks->empty()) {
    const auto level_bias = params.block("posenet.mask.level_bias");
    auto g_level_bias = grads.block("posenet.mask.level_bias");
    Tensor g_mask_head(1, f.mask_head.height, f.mask_head.width);
    const int levels = std::min<int>(static_cast<int>(level_bias.size()),
                                     static_cast<int>(grad_masks->size()));
    for (int l = 0; l < levels; ++l) {
      const ScalarMap& gm = (*grad_masks)[l];
      const int w = gm.width;
      const int h = gm.height;
      double bias_sum = 0.0;
      for (int y = 0; y < h; ++y) {
        const int sy = NearestSource(y, h, f.mask_head.height);
        for (int x = 0; x < w; ++x) {
          const int sx = NearestSource(x, w, f.mask_head.width);
          const double s = Sigmoid(f.mask_head.at(0, sy, sx) + level_bias[l]);
          const double g = gm.data[static_cast<std::size_t>(y) * w + x] * s * (1.0 - s);
          g_mask_head.at(0, sy, sx) += g;
          bias_sum += g;
        }
      }
      g_level_bias[l] += bias_sum;
    }
    nn::Conv2dBackward(f.act2, params.block("posenet.mask.weight"), g_mask_head, kMaskHead,
                       &g_act2, grads.block("posenet.mask.weight"),
                       grads.block("posenet.mask.bias"));
  }

  nn::EluBackwardInPlace(f.pre2, g_act2);
  Tensor g_act1(8, f.act1.height, f.act1.width);
  nn::Conv2dBackward(f.act1, params.block("posenet.enc2.weight"), g_act2, kPoseEnc2, &g_act1,
                     grads.block("posenet.enc2.weight"), grads.block("posenet.enc2.bias"));
  nn::EluBackwardInPlace(f.pre1, g_act1);
  nn::Conv2dBackward(f.input, params.block("posenet.enc1.weight"), g_act1, kPoseEnc1, nullptr,
                     grads.block("posenet.enc1.weight"), grads.block("posenet.enc1.bias"));
}

PredictorPair MakePredictors(const std::string& kind, const PredictorConfig& config) {
  if (kind == "direct") {
    return {std::make_unique<DirectDepthField>(), std::make_unique<DirectPoseField>()};
  }
  if (kind == "toycnn") {
    return {std::make_unique<ToyDepthNet>(config), std::make_unique<ToyPoseNet>(config)};
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown predictor '" + kind + "' (direct|toycnn)");
}

}  // namespace depthpose
