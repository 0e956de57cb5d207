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


// Minimal planar tensors and 2-D convolutions with explicit adjoints, enough
// for the toy predictors.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace depthpose::nn {

struct Tensor {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(int c, int h, int w, double fill = 0.0)
      : channels(c), height(h), width(w),
        data(static_cast<std::size_t>(c) * h * w, fill) {}

  std::size_t plane() const { return static_cast<std::size_t>(height) * width; }
  const double& at(int c, int y, int x) const { return data[c * plane() + static_cast<std::size_t>(y) * width + x]; }
  double& at(int c, int y, int x) { return data[c * plane() + static_cast<std::size_t>(y) * width + x]; }
};

// Square kernel with zero padding kernel / 2. Weights are laid out
// [out][in][ky][kx].
struct ConvSpec {
  int in_channels = 1;
  int out_channels = 1;
  int kernel = 3;
  int stride = 1;

  std::size_t weight_count() const {
    return static_cast<std::size_t>(out_channels) * in_channels * kernel * kernel;
  }
  int OutSize(int in) const { return (in + 2 * (kernel / 2) - kernel) / stride + 1; }
};

Tensor Conv2d(const Tensor& in, std::span<const double> weight,
              std::span<const double> bias, const ConvSpec& spec);

// Accumulates into grad_weight / grad_bias, and into grad_in when non-null.
void Conv2dBackward(const Tensor& in, std::span<const double> weight,
                    const Tensor& grad_out, const ConvSpec& spec, Tensor* grad_in,
                    std::span<double> grad_weight, std::span<double> grad_bias);

// ELU with alpha = 1.
double Elu(double x);
double EluDerivative(double x);
void EluInPlace(Tensor& t);
// grad *= ELU'(pre) elementwise.
void EluBackwardInPlace(const Tensor& pre, Tensor& grad);

}  // namespace depthpose::nn
