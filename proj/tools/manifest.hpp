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
#include <string>
#include <vector>

#include "json.hpp"

namespace depthpose::cli {

// Lowercase hex SHA-256 of a file's bytes.
std::string Sha256File(const std::filesystem::path& path);

// Record of one command invocation. Output hashes make reruns comparable;
// nothing time-dependent is stored.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> args;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::filesystem::path> outputs;  // relative to `root`
  std::filesystem::path root;

  nlohmann::json ToJson() const;
  void Write(const std::filesystem::path& path) const;
};

}  // namespace depthpose::cli
