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

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace depthpose {

// Named parameter blocks over one contiguous buffer. Blocks keep their order
// and offsets for the lifetime of the vector, so a ParamVector holding
// gradients can share the layout of the one holding values.
class ParamVector {
 public:
  struct Block {
    std::string name;
    std::vector<int> shape;
    std::size_t offset = 0;
    std::size_t size = 0;
    bool decay = false;  // receives weight decay in the optimizer
  };

  // Returns the block index. Throws kInvalidArgument on a duplicate name or
  // when `init` does not match the shape.
  std::size_t AddBlock(std::string name, std::vector<int> shape, bool decay,
                       std::span<const double> init = {});

  std::size_t num_blocks() const { return blocks_.size(); }
  const Block& block_info(std::size_t i) const { return blocks_[i]; }
  const std::vector<Block>& blocks() const { return blocks_; }
  // Throws kInvalidArgument when no block has this name.
  std::size_t IndexOf(const std::string& name) const;
  bool Contains(const std::string& name) const;

  std::span<double> block(std::size_t i) {
    return {data_.data() + blocks_[i].offset, blocks_[i].size};
  }
  std::span<const double> block(std::size_t i) const {
    return {data_.data() + blocks_[i].offset, blocks_[i].size};
  }
  std::span<double> block(const std::string& name) { return block(IndexOf(name)); }
  std::span<const double> block(const std::string& name) const {
    return block(IndexOf(name));
  }

  std::size_t size() const { return data_.size(); }
  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  std::vector<double> Flatten() const { return data_; }
  // Throws kDimension when the size differs from the layout.
  void Unflatten(std::span<const double> values);

  // Same block names, shapes and order, with every value zero.
  ParamVector ZerosLike() const;
  bool SameLayout(const ParamVector& other) const;
  void SetZero();

  // Flat binary block preceded by a JSON header describing every block.
  void Save(const std::filesystem::path& path) const;
  static ParamVector Load(const std::filesystem::path& path);

 private:
  std::vector<Block> blocks_;
  std::vector<double> data_;
};

}  // namespace depthpose
