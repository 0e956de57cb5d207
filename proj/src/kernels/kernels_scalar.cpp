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


#include <cmath>

#include "depthpose/kernels.hpp"

namespace depthpose::kernels::scalar {
namespace {

void DownsampleRow(const double* top, const double* bottom, double* out,
                   std::size_t out_width) {
  for (std::size_t i = 0; i < out_width; ++i) {
    out[i] = ((top[2 * i] + top[2 * i + 1]) + (bottom[2 * i] + bottom[2 * i + 1])) * 0.25;
  }
}

void SecondDiffRow(const double* up, const double* mid, const double* down,
                   double* dxx, double* dyy, double* dxy, std::size_t width) {
  for (std::size_t x = 1; x + 1 < width; ++x) {
    const double two_mid = 2.0 * mid[x];
    dxx[x] = (mid[x + 1] + mid[x - 1]) - two_mid;
    dyy[x] = (up[x] + down[x]) - two_mid;
    dxy[x] = ((down[x + 1] - down[x - 1]) - (up[x + 1] - up[x - 1])) * 0.25;
  }
}

void WeightedAbsDiff(const double* a1, const double* b1, const double* w1,
                     const double* a2, const double* b2, const double* w2,
                     double scale, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = scale * (w1[i] * std::fabs(a1[i] - b1[i]) + w2[i] * std::fabs(a2[i] - b2[i]));
  }
}

void Axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void AdamUpdate(double* params, double* m, double* v, const double* grad,
                std::size_t n, const AdamCoefficients& c) {
  const double decay = c.lr * c.weight_decay;
  const double one_minus_b1 = 1.0 - c.beta1;
  const double one_minus_b2 = 1.0 - c.beta2;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grad[i];
    double p = params[i] - decay * params[i];
    m[i] = c.beta1 * m[i] + one_minus_b1 * g;
    v[i] = c.beta2 * v[i] + one_minus_b2 * (g * g);
    const double m_hat = m[i] / c.bias_correction1;
    const double v_hat = v[i] / c.bias_correction2;
    p = p - c.lr * (m_hat / (std::sqrt(v_hat) + c.epsilon));
    params[i] = p;
  }
}

}  // namespace

const KernelTable kTable{Isa::kScalar, DownsampleRow, SecondDiffRow,
                         WeightedAbsDiff, Axpy, AdamUpdate};

}  // namespace depthpose::kernels::scalar
