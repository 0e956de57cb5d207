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


#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "depthpose/config.hpp"

namespace depthpose::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // verification failed or optimization diverged
inline constexpr int kExitInput = 2;    // bad arguments or unreadable input

struct SimulateArgs {
  std::string scene = "two-plane";
  int frames = 3;
  int width = 64;
  int height = 64;
  std::optional<double> noise_f;
  std::optional<double> sample_rate;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out;
};

struct RefineArgs {
  std::filesystem::path data;
  std::optional<std::string> predictor;
  int iters = 200;
  std::optional<std::string> weights;  // "alpha,beta,gamma,theta"
  std::optional<double> lr;
  std::optional<int> levels;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out;
};

struct EvaluateArgs {
  std::filesystem::path pred;
  std::filesystem::path gt;
  std::filesystem::path out;
  std::optional<int> levels;
};

struct GradcheckArgs {
  int height = 16;
  int width = 16;
  int levels = 2;
  std::uint64_t seed = 0;
  bool plant_bug = false;
  std::optional<std::filesystem::path> out;
};

// `args` is the flag record stored in the manifest.
int RunSimulate(const SimulateArgs& a, const RunConfig& config,
                const std::map<std::string, std::string>& args);
int RunRefine(const RefineArgs& a, const RunConfig& config,
              const std::map<std::string, std::string>& args);
int RunEvaluate(const EvaluateArgs& a, const RunConfig& config,
                const std::map<std::string, std::string>& args);
int RunGradcheck(const GradcheckArgs& a, const std::map<std::string, std::string>& args);

// "a,b,g,t" into loss weights; throws kParse.
LossWeights ParseWeights(const std::string& s);
// "HxW"; throws kParse.
std::pair<int, int> ParseSize(const std::string& s);

}  // namespace depthpose::cli
