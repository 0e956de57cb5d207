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


#include <cstdlib>
#include <stdexcept>
#include <string>

#include "depthpose/kernels.hpp"

namespace depthpose::kernels {

std::string_view ToString(Isa isa) {
  return isa == Isa::kAvx2 ? "avx2" : "scalar";
}

bool IsaSupported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& Kernels(Isa isa) {
  if (!IsaSupported(isa)) {
    throw std::invalid_argument("ISA not supported on this CPU: " +
                                std::string(ToString(isa)));
  }
  return isa == Isa::kAvx2 ? avx2::kTable : scalar::kTable;
}

namespace {

const KernelTable& Resolve() {
  if (const char* env = std::getenv("DEPTHPOSE_ISA")) {
    const std::string name(env);
    if (name == "scalar") return scalar::kTable;
    if (name == "avx2" && IsaSupported(Isa::kAvx2)) return avx2::kTable;
  }
  return IsaSupported(Isa::kAvx2) ? avx2::kTable : scalar::kTable;
}

}  // namespace

const KernelTable& Active() {
  static const KernelTable& table = Resolve();
  return table;
}

}  // namespace depthpose::kernels
