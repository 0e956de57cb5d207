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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "depthpose/geometry.hpp"

namespace depthpose {

// Planar image with values in [0, 1]; channel c occupies
// data[c * width * height, (c + 1) * width * height), row-major.
class IntensityImage {
 public:
  IntensityImage() = default;
  IntensityImage(int width, int height, int channels, double fill = 0.0);
  // Throws kDimension on a size mismatch and kDomain on values outside [0, 1].
  IntensityImage(int width, int height, int channels, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t plane_size() const { return static_cast<std::size_t>(width_) * height_; }

  double at(int c, int x, int y) const { return data_[Index(c, x, y)]; }
  double& at(int c, int x, int y) { return data_[Index(c, x, y)]; }
  std::span<const double> plane(int c) const {
    return {data_.data() + c * plane_size(), plane_size()};
  }
  std::span<double> plane(int c) {
    return {data_.data() + c * plane_size(), plane_size()};
  }
  const std::vector<double>& data() const { return data_; }

  // Throws kDomain when a value is non-finite or outside [0, 1].
  void Validate() const;

 private:
  std::size_t Index(int c, int x, int y) const {
    return c * plane_size() + static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 1;
  std::vector<double> data_;
};

// Grayscale conversion with luma weights 0.299 R + 0.587 G + 0.114 B.
// Single-channel images are returned unchanged.
IntensityImage ToLuma(const IntensityImage& img);

class DepthMap {
 public:
  DepthMap() = default;
  DepthMap(int width, int height, double fill);
  // Throws kDimension on a size mismatch, kDomain on non-positive values.
  DepthMap(int width, int height, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  double at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  double& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& mutable_data() { return data_; }

  void Validate() const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

// Sparse measurements; values at invalid pixels are ignored.
class SparseDepth {
 public:
  SparseDepth() = default;
  SparseDepth(int width, int height);
  // Throws kDimension on size mismatch, kDomain on a valid non-positive value.
  SparseDepth(int width, int height, std::vector<double> values,
              std::vector<std::uint8_t> valid);
  static SparseDepth FromDense(const DepthMap& d);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }
  bool valid(int x, int y) const { return valid_[Index(x, y)] != 0; }
  double value(int x, int y) const { return values_[Index(x, y)]; }
  void Set(int x, int y, double depth);
  void Clear(int x, int y);
  std::size_t ValidCount() const;

  const std::vector<double>& values() const { return values_; }
  const std::vector<std::uint8_t>& valid_mask() const { return valid_; }

  void Validate() const;

 private:
  std::size_t Index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
  std::vector<std::uint8_t> valid_;
};

template <class Level>
struct Pyramid {
  std::vector<Level> levels;

  std::size_t size() const { return levels.size(); }
  const Level& operator[](std::size_t i) const { return levels[i]; }
};

using ImagePyramid = Pyramid<IntensityImage>;
using DepthPyramid = Pyramid<DepthMap>;
using SparsePyramid = Pyramid<SparseDepth>;

struct BilinearSample {
  std::array<double, 3> value{};
  std::array<double, 3> grad_x{};
  std::array<double, 3> grad_y{};
  bool valid = false;
};

// Bilinear lookup at continuous pixel coordinates (pixel centers at integers).
// Invalid outside [0, w-1] x [0, h-1]; the gradient is the one-sided
// derivative of the cell containing u (cells are half-open, except the last).
BilinearSample Sample(const IntensityImage& img, const Vec2& u);

// Single-channel fast path returning value and gradient.
struct ScalarSample {
  double value = 0.0;
  double grad_x = 0.0;
  double grad_y = 0.0;
  bool valid = false;
};
ScalarSample SampleChannel(const IntensityImage& img, int channel, const Vec2& u);

// Throws kDimension when n_levels < 1 or the image is smaller than
// 2^(n_levels - 1) in either dimension.
ImagePyramid BuildPyramid(const IntensityImage& img, int n_levels);
DepthPyramid BuildDepthPyramid(const DepthMap& depth, int n_levels);
// Coarse pixels average their valid children and are valid when any child is.
SparsePyramid BuildSparsePyramid(const SparseDepth& depth, int n_levels);

// Adjoint of one 2x2 box-average level: scatters coarse gradients back onto
// the fine grid (each child receives a quarter). Fine pixels dropped by the
// floor division receive zero.
std::vector<double> BoxDownsampleAdjoint(std::span<const double> coarse_grad,
                                         int coarse_width, int coarse_height,
                                         int fine_width, int fine_height);

struct SecondOrderGradients {
  int width = 0;
  int height = 0;
  std::vector<double> dxx;
  std::vector<double> dyy;
  std::vector<double> dxy;
};

// Central second differences on the interior; boundary entries are zero.
// Throws kDimension when width or height < 3.
SecondOrderGradients ComputeSecondOrderGradients(const DepthMap& depth);

struct WarpedImage {
  IntensityImage image;
  std::vector<std::uint8_t> valid;
};

// warped(u) = src(warp(K, T_tgt_to_src, depth_tgt(u), u)); invalid pixels are
// zero and flagged in the mask.
WarpedImage InverseWarp(const IntensityImage& src, const DepthMap& depth_tgt,
                        const Se3Transform& t_tgt_to_src, const CameraIntrinsics& k);

}  // namespace depthpose
