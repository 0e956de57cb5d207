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


#include "depthpose/error.hpp"

namespace depthpose {

std::string_view ToString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimension: return "dimension error";
    case ErrorKind::kBehindCamera: return "behind-camera error";
    case ErrorKind::kDegenerateRotation: return "degenerate-rotation error";
    case ErrorKind::kNoGradient: return "no-gradient error";
    case ErrorKind::kDomain: return "domain error";
    case ErrorKind::kDiverged: return "diverged-optimization error";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kLoad: return "load error";
    case ErrorKind::kInsufficientOverlap: return "insufficient-overlap error";
    case ErrorKind::kEmptyGroundTruth: return "empty-ground-truth error";
    case ErrorKind::kSceneCoverage: return "scene-coverage error";
    case ErrorKind::kInvalidArgument: return "invalid argument";
  }
  return "error";
}

}  // namespace depthpose
