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


// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "depthpose/kernels.hpp"

namespace depthpose::kernels::avx2 {
namespace {

inline __m256d Abs(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

// Pairwise sums (p[0]+p[1], p[2]+p[3], ..., p[6]+p[7]) in lane order.
inline __m256d PairSums(const double* p) {
  const __m256d lo = _mm256_loadu_pd(p);
  const __m256d hi = _mm256_loadu_pd(p + 4);
  return _mm256_permute4x64_pd(_mm256_hadd_pd(lo, hi), 0b11011000);
}

void DownsampleRow(const double* top, const double* bottom, double* out,
                   std::size_t out_width) {
  const __m256d quarter = _mm256_set1_pd(0.25);
  std::size_t i = 0;
  for (; i + 4 <= out_width; i += 4) {
    const __m256d s = _mm256_add_pd(PairSums(top + 2 * i), PairSums(bottom + 2 * i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(s, quarter));
  }
  for (; i < out_width; ++i) {
    out[i] = ((top[2 * i] + top[2 * i + 1]) + (bottom[2 * i] + bottom[2 * i + 1])) * 0.25;
  }
}

void SecondDiffRow(const double* up, const double* mid, const double* down,
                   double* dxx, double* dyy, double* dxy, std::size_t width) {
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d quarter = _mm256_set1_pd(0.25);
  std::size_t x = 1;
  for (; x + 4 < width; x += 4) {
    const __m256d m = _mm256_loadu_pd(mid + x);
    const __m256d two_mid = _mm256_mul_pd(two, m);
    const __m256d m_r = _mm256_loadu_pd(mid + x + 1);
    const __m256d m_l = _mm256_loadu_pd(mid + x - 1);
    _mm256_storeu_pd(dxx + x, _mm256_sub_pd(_mm256_add_pd(m_r, m_l), two_mid));
    const __m256d u = _mm256_loadu_pd(up + x);
    const __m256d d = _mm256_loadu_pd(down + x);
    _mm256_storeu_pd(dyy + x, _mm256_sub_pd(_mm256_add_pd(u, d), two_mid));
    const __m256d dd = _mm256_sub_pd(_mm256_loadu_pd(down + x + 1), _mm256_loadu_pd(down + x - 1));
    const __m256d du = _mm256_sub_pd(_mm256_loadu_pd(up + x + 1), _mm256_loadu_pd(up + x - 1));
    _mm256_storeu_pd(dxy + x, _mm256_mul_pd(_mm256_sub_pd(dd, du), quarter));
  }
  for (; x + 1 < width; ++x) {
    const double two_mid = 2.0 * mid[x];
    dxx[x] = (mid[x + 1] + mid[x - 1]) - two_mid;
    dyy[x] = (up[x] + down[x]) - two_mid;
    dxy[x] = ((down[x + 1] - down[x - 1]) - (up[x + 1] - up[x - 1])) * 0.25;
  }
}

void WeightedAbsDiff(const double* a1, const double* b1, const double* w1,
                     const double* a2, const double* b2, const double* w2,
                     double scale, double* out, std::size_t n) {
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t1 = _mm256_mul_pd(
        _mm256_loadu_pd(w1 + i),
        Abs(_mm256_sub_pd(_mm256_loadu_pd(a1 + i), _mm256_loadu_pd(b1 + i))));
    const __m256d t2 = _mm256_mul_pd(
        _mm256_loadu_pd(w2 + i),
        Abs(_mm256_sub_pd(_mm256_loadu_pd(a2 + i), _mm256_loadu_pd(b2 + i))));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(s, _mm256_add_pd(t1, t2)));
  }
  for (; i < n; ++i) {
    out[i] = scale * (w1[i] * std::fabs(a1[i] - b1[i]) + w2[i] * std::fabs(a2[i] - b2[i]));
  }
}

void Axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void AdamUpdate(double* params, double* m, double* v, const double* grad,
                std::size_t n, const AdamCoefficients& c) {
  const double decay = c.lr * c.weight_decay;
  const double one_minus_b1 = 1.0 - c.beta1;
  const double one_minus_b2 = 1.0 - c.beta2;
  const __m256d v_decay = _mm256_set1_pd(decay);
  const __m256d v_b1 = _mm256_set1_pd(c.beta1);
  const __m256d v_b2 = _mm256_set1_pd(c.beta2);
  const __m256d v_1mb1 = _mm256_set1_pd(one_minus_b1);
  const __m256d v_1mb2 = _mm256_set1_pd(one_minus_b2);
  const __m256d v_bc1 = _mm256_set1_pd(c.bias_correction1);
  const __m256d v_bc2 = _mm256_set1_pd(c.bias_correction2);
  const __m256d v_lr = _mm256_set1_pd(c.lr);
  const __m256d v_eps = _mm256_set1_pd(c.epsilon);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d g = _mm256_loadu_pd(grad + i);
    const __m256d p0 = _mm256_loadu_pd(params + i);
    __m256d p = _mm256_sub_pd(p0, _mm256_mul_pd(v_decay, p0));
    const __m256d mi = _mm256_add_pd(_mm256_mul_pd(v_b1, _mm256_loadu_pd(m + i)),
                                     _mm256_mul_pd(v_1mb1, g));
    const __m256d vi = _mm256_add_pd(_mm256_mul_pd(v_b2, _mm256_loadu_pd(v + i)),
                                     _mm256_mul_pd(v_1mb2, _mm256_mul_pd(g, g)));
    _mm256_storeu_pd(m + i, mi);
    _mm256_storeu_pd(v + i, vi);
    const __m256d m_hat = _mm256_div_pd(mi, v_bc1);
    const __m256d v_hat = _mm256_div_pd(vi, v_bc2);
    const __m256d step = _mm256_div_pd(m_hat, _mm256_add_pd(_mm256_sqrt_pd(v_hat), v_eps));
    p = _mm256_sub_pd(p, _mm256_mul_pd(v_lr, step));
    _mm256_storeu_pd(params + i, p);
  }
  for (; i < n; ++i) {
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

const KernelTable kTable{Isa::kAvx2, DownsampleRow, SecondDiffRow,
                         WeightedAbsDiff, Axpy, AdamUpdate};

}  // namespace depthpose::kernels::avx2
