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


#include "depthpose/losses.hpp"

#include <cmath>
#include <sstream>

#include "depthpose/error.hpp"
#include "depthpose/kernels.hpp"

namespace depthpose {
namespace {

double Sign(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

// Pulls a gradient on pyramid level `level` back onto level 0.
std::vector<double> PullToBase(std::vector<double> grad, int level, int base_width,
                               int base_height) {
  std::vector<std::pair<int, int>> dims{{base_width, base_height}};
  for (int l = 1; l <= level; ++l) {
    dims.emplace_back(dims.back().first / 2, dims.back().second / 2);
  }
  for (int l = level; l >= 1; --l) {
    grad = BoxDownsampleAdjoint(grad, dims[l].first, dims[l].second, dims[l - 1].first,
                                dims[l - 1].second);
  }
  return grad;
}

template <class Pyr>
void CheckLevel(const Pyr* pyr, int level, const CameraIntrinsics& ks, const char* name) {
  if (pyr == nullptr || static_cast<int>(pyr->size()) <= level) {
    std::ostringstream os;
    os << name << " pyramid has no level " << level;
    throw Error(ErrorKind::kDimension, os.str());
  }
  const auto& l = (*pyr)[level];
  if (l.width() != ks.width || l.height() != ks.height) {
    std::ostringstream os;
    os << name << " level " << level << " is " << l.width() << "x" << l.height()
       << ", intrinsics expect " << ks.width << "x" << ks.height;
    throw Error(ErrorKind::kDimension, os.str());
  }
}

}  // namespace

void LossWeights::Validate() const {
  for (double w : {alpha, beta, gamma, theta}) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorKind::kInvalidArgument, "loss weights must be finite and >= 0");
    }
  }
}

ValueAndGradient SupervisedLoss(const DepthMap& pred, const SparseDepth& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw Error(ErrorKind::kDimension, "supervised loss: prediction and target differ in size");
  }
  ValueAndGradient out;
  out.grad.assign(pred.size(), 0.0);
  const std::size_t n = gt.ValidCount();
  if (n == 0) return out;
  const auto& p = pred.data();
  const auto& g = gt.values();
  const auto& valid = gt.valid_mask();
  const double inv_n = 1.0 / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!valid[i]) continue;
    const double r = p[i] - g[i];
    sum += r * r;
    out.grad[i] = 2.0 * r * inv_n;
  }
  out.value = sum * inv_n;
  return out;
}

ResidualMap PhotometricResidual(const PhotometricInputs& in, const Se3Transform& t_1_to_2,
                                const CameraIntrinsics& k, int level, IndicatorMode mode,
                                bool with_derivatives) {
  return PhotometricResidual(in, TangentPose(LogMap(t_1_to_2)), k, level, mode,
                             with_derivatives);
}

ResidualMap PhotometricResidual(const PhotometricInputs& in, const TangentPose& pose,
                                const CameraIntrinsics& k, int level, IndicatorMode mode,
                                bool with_derivatives) {
  const CameraIntrinsics ks = k.AtLevel(level);
  CheckLevel(in.image1, level, ks, "image1");
  CheckLevel(in.image2, level, ks, "image2");
  CheckLevel(in.depth1, level, ks, "depth1");
  CheckLevel(in.depth2, level, ks, "depth2");
  if (mode != IndicatorMode::kAll) {
    CheckLevel(in.sparse1, level, ks, "sparse1");
    CheckLevel(in.sparse2, level, ks, "sparse2");
  }
  const IntensityImage& i1 = (*in.image1)[level];
  const IntensityImage& i2 = (*in.image2)[level];
  if (i1.channels() != 1 || i2.channels() != 1) {
    throw Error(ErrorKind::kDimension, "photometric residual expects single-channel images");
  }
  const DepthMap& d1 = (*in.depth1)[level];
  const DepthMap& d2 = (*in.depth2)[level];

  const int w = ks.width;
  const int h = ks.height;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  const double scale = 1.0 / (2.0 * std::ldexp(1.0, level));

  ResidualMap out;
  out.level = level;
  out.width = w;
  out.height = h;
  out.base_width = k.width;
  out.base_height = k.height;
  out.residual.assign(n, 0.0);
  out.valid.assign(n, 0);
  out.has_derivatives = with_derivatives;
  if (with_derivatives) {
    out.d_depth1.assign(n, 0.0);
    out.d_depth2.assign(n, 0.0);
    out.d_tangent.assign(n, Vec6::Zero());
  }

  std::vector<double> warped2(n, 0.0), warped1(n, 0.0), w1(n, 0.0), w2(n, 0.0);
  std::vector<ScalarSample> samp1(with_derivatives ? n : 0), samp2(with_derivatives ? n : 0);
  std::vector<WarpLinearization> lin1(with_derivatives ? n : 0), lin2(with_derivatives ? n : 0);

  auto indicator = [&](const SparsePyramid* sp, int x, int y) {
    switch (mode) {
      case IndicatorMode::kAll: return 1.0;
      case IndicatorMode::kUnmeasured: return (*sp)[level].valid(x, y) ? 0.0 : 1.0;
      case IndicatorMode::kMeasured: return (*sp)[level].valid(x, y) ? 1.0 : 0.0;
    }
    return 0.0;
  };

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const Vec2 u(x, y);
      WarpLinearization a;
      WarpLinearization b;
      if (with_derivatives) {
        a = LinearizeWarp(ks, pose, false, d1.at(x, y), u);
        b = LinearizeWarp(ks, pose, true, d2.at(x, y), u);
      } else {
        a.warp = WarpPixel(ks, pose.forward(), d1.at(x, y), u);
        b.warp = WarpPixel(ks, pose.backward(), d2.at(x, y), u);
      }
      ScalarSample sa;
      ScalarSample sb;
      if (a.warp.valid) sa = SampleChannel(i2, 0, a.warp.pixel);
      if (b.warp.valid) sb = SampleChannel(i1, 0, b.warp.pixel);
      warped2[i] = sa.value;
      warped1[i] = sb.value;
      w1[i] = sa.valid ? indicator(in.sparse1, x, y) : 0.0;
      w2[i] = sb.valid ? indicator(in.sparse2, x, y) : 0.0;
      out.valid[i] = (sa.valid || sb.valid) ? 1 : 0;
      if (with_derivatives) {
        samp1[i] = sa;
        samp2[i] = sb;
        lin1[i] = a;
        lin2[i] = b;
      }
    }
  }

  kernels::Active().weighted_abs_diff(warped2.data(), i1.plane(0).data(), w1.data(),
                                      warped1.data(), i2.plane(0).data(), w2.data(), scale,
                                      out.residual.data(), n);

  if (!with_derivatives) return out;
  const auto p1 = i1.plane(0);
  const auto p2 = i2.plane(0);
  for (std::size_t i = 0; i < n; ++i) {
    if (w1[i] != 0.0) {
      const double s = scale * w1[i] * Sign(warped2[i] - p1[i]);
      const Eigen::RowVector2d grad(samp1[i].grad_x, samp1[i].grad_y);
      out.d_depth1[i] = s * grad.dot(lin1[i].d_depth);
      out.d_tangent[i] += s * (grad * lin1[i].d_tangent).transpose();
    }
    if (w2[i] != 0.0) {
      const double s = scale * w2[i] * Sign(warped1[i] - p2[i]);
      const Eigen::RowVector2d grad(samp2[i].grad_x, samp2[i].grad_y);
      out.d_depth2[i] = s * grad.dot(lin2[i].d_depth);
      out.d_tangent[i] += s * (grad * lin2[i].d_tangent).transpose();
    }
  }
  return out;
}

MaskedPhotometricResult MaskedPhotometricLoss(const std::vector<ResidualMap>& residuals,
                                              const std::vector<ScalarMap>& masks) {
  if (masks.size() < residuals.size()) {
    std::ostringstream os;
    os << "masked photometric loss: " << residuals.size() << " residual levels but only "
       << masks.size() << " mask levels";
    throw Error(ErrorKind::kDimension, os.str());
  }
  MaskedPhotometricResult out;
  if (residuals.empty()) return out;
  const int bw = residuals.front().base_width;
  const int bh = residuals.front().base_height;
  const std::size_t base_n = static_cast<std::size_t>(bw) * bh;
  out.grad_depth1.assign(base_n, 0.0);
  out.grad_depth2.assign(base_n, 0.0);

  for (std::size_t s = 0; s < residuals.size(); ++s) {
    const ResidualMap& r = residuals[s];
    const ScalarMap& m = masks[s];
    if (m.width != r.width || m.height != r.height ||
        m.data.size() != r.residual.size()) {
      std::ostringstream os;
      os << "mask level " << s << " does not match its residual map";
      throw Error(ErrorKind::kDimension, os.str());
    }
    const std::size_t n = r.residual.size();
    std::size_t count = 0;
    for (auto v : r.valid) count += v != 0;
    ScalarMap gm(r.width, r.height);
    if (count == 0) {
      out.per_scale.push_back(0.0);
      out.grad_mask.push_back(std::move(gm));
      continue;
    }
    const double inv_n = 1.0 / static_cast<double>(count);
    double sum = 0.0;
    std::vector<double> g1(n, 0.0), g2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!r.valid[i]) continue;
      const double e = m.data[i];
      sum += e * r.residual[i];
      gm.data[i] = r.residual[i] * inv_n;
      if (!r.has_derivatives) continue;
      g1[i] = e * r.d_depth1[i] * inv_n;
      g2[i] = e * r.d_depth2[i] * inv_n;
      out.grad_tangent += (e * inv_n) * r.d_tangent[i];
    }
    const double value = sum * inv_n;
    out.per_scale.push_back(value);
    out.value += value;
    const auto b1 = PullToBase(std::move(g1), r.level, bw, bh);
    const auto b2 = PullToBase(std::move(g2), r.level, bw, bh);
    for (std::size_t i = 0; i < base_n; ++i) {
      out.grad_depth1[i] += b1[i];
      out.grad_depth2[i] += b2[i];
    }
    out.grad_mask.push_back(std::move(gm));
  }
  return out;
}

ValueAndGradient SmoothnessLoss(const DepthMap& depth) {
  const SecondOrderGradients g = ComputeSecondOrderGradients(depth);
  const int w = g.width;
  const int h = g.height;
  ValueAndGradient out;
  out.grad.assign(depth.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>((w - 2) * (h - 2));
  double sum = 0.0;
  auto at = [&](int x, int y) -> double& {
    return out.grad[static_cast<std::size_t>(y) * w + x];
  };
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      sum += (std::fabs(g.dxx[i]) + std::fabs(g.dyy[i])) + std::fabs(g.dxy[i]);
      const double sxx = Sign(g.dxx[i]) * inv_n;
      const double syy = Sign(g.dyy[i]) * inv_n;
      const double sxy = Sign(g.dxy[i]) * 0.25 * inv_n;
      at(x + 1, y) += sxx;
      at(x - 1, y) += sxx;
      at(x, y) -= 2.0 * (sxx + syy);
      at(x, y + 1) += syy;
      at(x, y - 1) += syy;
      at(x + 1, y + 1) += sxy;
      at(x - 1, y + 1) -= sxy;
      at(x + 1, y - 1) -= sxy;
      at(x - 1, y - 1) += sxy;
    }
  }
  out.value = sum * inv_n;
  return out;
}

MaskRegularizationResult MaskRegularizationLoss(const std::vector<ScalarMap>& masks) {
  MaskRegularizationResult out;
  for (const ScalarMap& m : masks) {
    ScalarMap g(m.width, m.height);
    if (m.data.empty()) {
      out.grad_mask.push_back(std::move(g));
      continue;
    }
    const double inv_n = 1.0 / static_cast<double>(m.data.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < m.data.size(); ++i) {
      const double e = m.data[i];
      if (!(e > 0.0)) {
        throw Error(ErrorKind::kDomain, "mask values must be > 0 for the log penalty");
      }
      sum += -std::log(e);
      g.data[i] = -inv_n / e;
    }
    out.value += sum * inv_n;
    out.grad_mask.push_back(std::move(g));
  }
  return out;
}

LossBreakdown TotalLoss(double supervised, double photometric_masked, double smoothness,
                        double mask_reg, std::vector<double> per_scale_photometric,
                        const LossWeights& w) {
  w.Validate();
  LossBreakdown b;
  b.supervised = supervised;
  b.photometric_masked = photometric_masked;
  b.smoothness = smoothness;
  b.mask_reg = mask_reg;
  b.per_scale_photometric = std::move(per_scale_photometric);
  b.total = ((w.alpha * supervised + w.beta * photometric_masked) + w.gamma * smoothness) +
            w.theta * mask_reg;
  return b;
}

}  // namespace depthpose
