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


// Data-parallel inner loops. Every kernel has a scalar reference and an AVX2
// variant; the variants perform the same IEEE operations in the same order
// per element, so their outputs are bit-identical (the build disables FMA
// contraction). Reductions are never vectorized: callers sum in index order.

#pragma once

#include <cstddef>
#include <string_view>

namespace depthpose::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view ToString(Isa isa);

struct AdamCoefficients {
  double lr = 0.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double bias_correction1 = 1.0;  // 1 - beta1^t
  double bias_correction2 = 1.0;  // 1 - beta2^t
  double weight_decay = 0.0;
};

struct KernelTable {
  Isa isa;

  // out[i] = ((top[2i] + top[2i+1]) + (bottom[2i] + bottom[2i+1])) * 0.25
  void (*downsample_row)(const double* top, const double* bottom, double* out,
                         std::size_t out_width);

  // Interior second differences of a row triple, for x in [1, width-2]:
  //   dxx = (mid[x+1] + mid[x-1]) - 2 mid[x]
  //   dyy = (up[x] + down[x]) - 2 mid[x]
  //   dxy = ((down[x+1] - down[x-1]) - (up[x+1] - up[x-1])) * 0.25
  // Entries 0 and width-1 of the outputs are left untouched.
  void (*second_diff_row)(const double* up, const double* mid, const double* down,
                          double* dxx, double* dyy, double* dxy, std::size_t width);

  // out[i] = scale * (w1[i] * |a1[i] - b1[i]| + w2[i] * |a2[i] - b2[i]|)
  void (*weighted_abs_diff)(const double* a1, const double* b1, const double* w1,
                            const double* a2, const double* b2, const double* w2,
                            double scale, double* out, std::size_t n);

  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);

  // Decoupled weight decay followed by the bias-corrected Adam step.
  void (*adam_update)(double* params, double* m, double* v, const double* grad,
                      std::size_t n, const AdamCoefficients& c);
};

bool IsaSupported(Isa isa);

// Kernel table for a specific ISA. Throws std::invalid_argument when the ISA
// is not supported on this CPU.
const KernelTable& Kernels(Isa isa);

// Best supported ISA, overridable with DEPTHPOSE_ISA=scalar|avx2. Resolved once.
const KernelTable& Active();

namespace scalar {
extern const KernelTable kTable;
}
namespace avx2 {
extern const KernelTable kTable;
}

}  // namespace depthpose::kernels
