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


#include "depthpose/conv.hpp"

#include <algorithm>
#include <cmath>

#include "depthpose/error.hpp"
#include "depthpose/kernels.hpp"

namespace depthpose::nn {
namespace {

void CheckShapes(const Tensor& in, std::span<const double> weight,
                 std::span<const double> bias, const ConvSpec& spec) {
  if (in.channels != spec.in_channels || weight.size() != spec.weight_count() ||
      bias.size() != static_cast<std::size_t>(spec.out_channels) || spec.kernel % 2 != 1) {
    throw Error(ErrorKind::kDimension, "convolution shapes do not match");
  }
}

// Output columns [lo, hi) whose input column x * stride + kx - pad is in range.
std::pair<int, int> ValidRange(int out_size, int in_size, int k, int pad, int stride) {
  int lo = 0;
  while (lo < out_size && lo * stride + k - pad < 0) ++lo;
  int hi = out_size;
  while (hi > lo && (hi - 1) * stride + k - pad >= in_size) --hi;
  return {lo, hi};
}

}  // namespace

Tensor Conv2d(const Tensor& in, std::span<const double> weight,
              std::span<const double> bias, const ConvSpec& spec) {
  CheckShapes(in, weight, bias, spec);
  const int k = spec.kernel;
  const int pad = k / 2;
  const int s = spec.stride;
  Tensor out(spec.out_channels, spec.OutSize(in.height), spec.OutSize(in.width));
  const auto& kern = kernels::Active();
  for (int co = 0; co < spec.out_channels; ++co) {
    std::fill_n(out.data.begin() + co * out.plane(), out.plane(), bias[co]);
    for (int ci = 0; ci < spec.in_channels; ++ci) {
      for (int ky = 0; ky < k; ++ky) {
        const auto [ylo, yhi] = ValidRange(out.height, in.height, ky, pad, s);
        for (int kx = 0; kx < k; ++kx) {
          const double w = weight[((static_cast<std::size_t>(co) * spec.in_channels + ci) * k + ky) * k + kx];
          const auto [xlo, xhi] = ValidRange(out.width, in.width, kx, pad, s);
          if (xhi <= xlo) continue;
          for (int y = ylo; y < yhi; ++y) {
            const int iy = y * s + ky - pad;
            double* dst = &out.at(co, y, xlo);
            if (s == 1) {
              kern.axpy(w, &in.at(ci, iy, xlo + kx - pad), dst,
                        static_cast<std::size_t>(xhi - xlo));
            } else {
              for (int x = xlo; x < xhi; ++x) {
                dst[x - xlo] += w * in.at(ci, iy, x * s + kx - pad);
              }
            }
          }
        }
      }
    }
  }
  return out;
}

void Conv2dBackward(const Tensor& in, std::span<const double> weight,
                    const Tensor& grad_out, const ConvSpec& spec, Tensor* grad_in,
                    std::span<double> grad_weight, std::span<double> grad_bias) {
  CheckShapes(in, weight, grad_bias, spec);
  const int k = spec.kernel;
  const int pad = k / 2;
  const int s = spec.stride;
  const auto& kern = kernels::Active();
  for (int co = 0; co < spec.out_channels; ++co) {
    double bsum = 0.0;
    for (std::size_t i = 0; i < grad_out.plane(); ++i) bsum += grad_out.data[co * grad_out.plane() + i];
    grad_bias[co] += bsum;
    for (int ci = 0; ci < spec.in_channels; ++ci) {
      for (int ky = 0; ky < k; ++ky) {
        const auto [ylo, yhi] = ValidRange(grad_out.height, in.height, ky, pad, s);
        for (int kx = 0; kx < k; ++kx) {
          const std::size_t widx = ((static_cast<std::size_t>(co) * spec.in_channels + ci) * k + ky) * k + kx;
          const double w = weight[widx];
          const auto [xlo, xhi] = ValidRange(grad_out.width, in.width, kx, pad, s);
          if (xhi <= xlo) continue;
          double wsum = 0.0;
          for (int y = ylo; y < yhi; ++y) {
            const int iy = y * s + ky - pad;
            const double* g = &grad_out.at(co, y, xlo);
            for (int x = xlo; x < xhi; ++x) {
              wsum += g[x - xlo] * in.at(ci, iy, x * s + kx - pad);
            }
            if (grad_in == nullptr) continue;
            if (s == 1) {
              kern.axpy(w, g, &grad_in->at(ci, iy, xlo + kx - pad),
                        static_cast<std::size_t>(xhi - xlo));
            } else {
              for (int x = xlo; x < xhi; ++x) {
                grad_in->at(ci, iy, x * s + kx - pad) += w * g[x - xlo];
              }
            }
          }
          grad_weight[widx] += wsum;
        }
      }
    }
  }
}

double Elu(double x) { return x > 0.0 ? x : std::expm1(x); }

double EluDerivative(double x) { return x > 0.0 ? 1.0 : std::exp(x); }

void EluInPlace(Tensor& t) {
  for (double& v : t.data) v = Elu(v);
}

void EluBackwardInPlace(const Tensor& pre, Tensor& grad) {
  for (std::size_t i = 0; i < grad.data.size(); ++i) grad.data[i] *= EluDerivative(pre.data[i]);
}

}  // namespace depthpose::nn
