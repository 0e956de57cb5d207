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


#include "depthpose/params.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <numeric>

#include "json.hpp"

#include "depthpose/error.hpp"

namespace depthpose {
namespace {

constexpr char kMagic[8] = {'D', 'P', 'P', 'A', 'R', 'A', 'M', 'S'};

static_assert(std::endian::native == std::endian::little,
              "parameter files are written in native little-endian order");

}  // namespace

std::size_t ParamVector::AddBlock(std::string name, std::vector<int> shape, bool decay,
                                  std::span<const double> init) {
  if (Contains(name)) {
    throw Error(ErrorKind::kInvalidArgument, "duplicate parameter block: " + name);
  }
  std::size_t count = 1;
  for (int d : shape) {
    if (d < 0) throw Error(ErrorKind::kInvalidArgument, "negative block dimension: " + name);
    count *= static_cast<std::size_t>(d);
  }
  if (!init.empty() && init.size() != count) {
    throw Error(ErrorKind::kInvalidArgument, "initial values do not match shape: " + name);
  }
  Block b{std::move(name), std::move(shape), data_.size(), count, decay};
  if (init.empty()) {
    data_.resize(data_.size() + count, 0.0);
  } else {
    data_.insert(data_.end(), init.begin(), init.end());
  }
  blocks_.push_back(std::move(b));
  return blocks_.size() - 1;
}

std::size_t ParamVector::IndexOf(const std::string& name) const {
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].name == name) return i;
  }
  throw Error(ErrorKind::kInvalidArgument, "no parameter block named " + name);
}

bool ParamVector::Contains(const std::string& name) const {
  return std::any_of(blocks_.begin(), blocks_.end(),
                     [&](const Block& b) { return b.name == name; });
}

void ParamVector::Unflatten(std::span<const double> values) {
  if (values.size() != data_.size()) {
    throw Error(ErrorKind::kDimension, "flat vector size does not match the block layout");
  }
  std::copy(values.begin(), values.end(), data_.begin());
}

ParamVector ParamVector::ZerosLike() const {
  ParamVector out = *this;
  out.SetZero();
  return out;
}

bool ParamVector::SameLayout(const ParamVector& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const Block& a = blocks_[i];
    const Block& b = other.blocks_[i];
    if (a.name != b.name || a.shape != b.shape || a.offset != b.offset) return false;
  }
  return true;
}

void ParamVector::SetZero() { std::fill(data_.begin(), data_.end(), 0.0); }

void ParamVector::Save(const std::filesystem::path& path) const {
  nlohmann::json header;
  header["dtype"] = "float64";
  header["count"] = data_.size();
  header["blocks"] = nlohmann::json::array();
  for (const Block& b : blocks_) {
    header["blocks"].push_back({{"name", b.name},
                                {"shape", b.shape},
                                {"count", b.size},
                                {"offset", b.offset},
                                {"decay", b.decay}});
  }
  const std::string text = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kLoad, "cannot write " + path.string());
  const std::uint64_t len = text.size();
  out.write(kMagic, sizeof(kMagic));
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.write(reinterpret_cast<const char*>(data_.data()),
            static_cast<std::streamsize>(data_.size() * sizeof(double)));
  if (!out) throw Error(ErrorKind::kLoad, "failed writing " + path.string());
}

ParamVector ParamVector::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kLoad, "cannot open " + path.string());
  char magic[8];
  std::uint64_t len = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0 || len > (1u << 26)) {
    throw Error(ErrorKind::kParse, path.string() + " is not a parameter file");
  }
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, path.string() + ": bad header: " + e.what());
  }
  ParamVector out;
  for (const auto& b : header.at("blocks")) {
    out.AddBlock(b.at("name").get<std::string>(), b.at("shape").get<std::vector<int>>(),
                 b.value("decay", false));
  }
  if (header.at("count").get<std::size_t>() != out.size()) {
    throw Error(ErrorKind::kParse, path.string() + ": block sizes disagree with count");
  }
  in.read(reinterpret_cast<char*>(out.data_.data()),
          static_cast<std::streamsize>(out.data_.size() * sizeof(double)));
  if (!in) throw Error(ErrorKind::kParse, path.string() + ": truncated data");
  return out;
}

}  // namespace depthpose
