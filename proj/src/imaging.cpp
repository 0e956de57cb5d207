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


#include "depthpose/imaging.hpp"

#include <cmath>
#include <sstream>

#include "depthpose/error.hpp"
#include "depthpose/kernels.hpp"

namespace depthpose {
namespace {

void CheckSize(int width, int height, std::size_t expected, std::size_t actual,
               const char* what) {
  if (width < 1 || height < 1 || expected != actual) {
    std::ostringstream os;
    os << what << ": " << width << "x" << height << " expects " << expected
       << " values, got " << actual;
    throw Error(ErrorKind::kDimension, os.str());
  }
}

void CheckPyramidSize(int width, int height, int n_levels) {
  if (n_levels < 1) {
    throw Error(ErrorKind::kDimension, "pyramid needs at least one level");
  }
  const int need = 1 << (n_levels - 1);
  if (width < need || height < need) {
    std::ostringstream os;
    os << width << "x" << height << " image is too small for " << n_levels
       << " pyramid levels (needs " << need << " in each dimension)";
    throw Error(ErrorKind::kDimension, os.str());
  }
}

// 2x2 box average of a single plane with floor division of the size.
std::vector<double> DownsamplePlane(std::span<const double> fine, int width,
                                    int height) {
  const int cw = width / 2;
  const int ch = height / 2;
  std::vector<double> coarse(static_cast<std::size_t>(cw) * ch);
  const auto& k = kernels::Active();
  for (int y = 0; y < ch; ++y) {
    const double* top = fine.data() + static_cast<std::size_t>(2 * y) * width;
    k.downsample_row(top, top + width, coarse.data() + static_cast<std::size_t>(y) * cw,
                     static_cast<std::size_t>(cw));
  }
  return coarse;
}

}  // namespace

IntensityImage::IntensityImage(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  if (width < 1 || height < 1 || (channels != 1 && channels != 3)) {
    throw Error(ErrorKind::kDimension, "image needs positive size and 1 or 3 channels");
  }
  data_.assign(plane_size() * channels, fill);
}

IntensityImage::IntensityImage(int width, int height, int channels,
                               std::vector<double> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  if (channels != 1 && channels != 3) {
    throw Error(ErrorKind::kDimension, "image needs 1 or 3 channels");
  }
  CheckSize(width, height, static_cast<std::size_t>(width) * height * channels,
            data_.size(), "image");
  Validate();
}

void IntensityImage::Validate() const {
  for (double v : data_) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw Error(ErrorKind::kDomain, "image values must be finite and in [0, 1]");
    }
  }
}

IntensityImage ToLuma(const IntensityImage& img) {
  if (img.channels() == 1) return img;
  IntensityImage out(img.width(), img.height(), 1);
  auto r = img.plane(0);
  auto g = img.plane(1);
  auto b = img.plane(2);
  auto dst = out.plane(0);
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
  }
  return out;
}

DepthMap::DepthMap(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::kDimension, "depth map needs positive size");
  }
  data_.assign(static_cast<std::size_t>(width) * height, fill);
  Validate();
}

DepthMap::DepthMap(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  CheckSize(width, height, static_cast<std::size_t>(width) * height, data_.size(),
            "depth map");
  Validate();
}

void DepthMap::Validate() const {
  for (double v : data_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::kDomain, "depth values must be positive and finite");
    }
  }
}

SparseDepth::SparseDepth(int width, int height)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::kDimension, "sparse depth needs positive size");
  }
  values_.assign(static_cast<std::size_t>(width) * height, 0.0);
  valid_.assign(values_.size(), 0);
}

SparseDepth::SparseDepth(int width, int height, std::vector<double> values,
                         std::vector<std::uint8_t> valid)
    : width_(width), height_(height), values_(std::move(values)), valid_(std::move(valid)) {
  const auto n = static_cast<std::size_t>(width) * height;
  CheckSize(width, height, n, values_.size(), "sparse depth values");
  CheckSize(width, height, n, valid_.size(), "sparse depth mask");
  Validate();
}

SparseDepth SparseDepth::FromDense(const DepthMap& d) {
  return SparseDepth(d.width(), d.height(), d.data(),
                     std::vector<std::uint8_t>(d.size(), 1));
}

void SparseDepth::Set(int x, int y, double depth) {
  if (!(depth > 0.0) || !std::isfinite(depth)) {
    throw Error(ErrorKind::kDomain, "sparse depth value must be positive and finite");
  }
  values_[Index(x, y)] = depth;
  valid_[Index(x, y)] = 1;
}

void SparseDepth::Clear(int x, int y) {
  values_[Index(x, y)] = 0.0;
  valid_[Index(x, y)] = 0;
}

std::size_t SparseDepth::ValidCount() const {
  std::size_t n = 0;
  for (auto v : valid_) n += v != 0;
  return n;
}

void SparseDepth::Validate() const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (valid_[i] && (!(values_[i] > 0.0) || !std::isfinite(values_[i]))) {
      throw Error(ErrorKind::kDomain, "valid sparse depth must be positive and finite");
    }
  }
}

ScalarSample SampleChannel(const IntensityImage& img, int channel, const Vec2& u) {
  ScalarSample s;
  const int w = img.width();
  const int h = img.height();
  if (!(u.x() >= 0.0) || !(u.y() >= 0.0) || u.x() > w - 1 || u.y() > h - 1) {
    return s;
  }
  int x0 = static_cast<int>(std::floor(u.x()));
  int y0 = static_cast<int>(std::floor(u.y()));
  if (x0 > w - 2) x0 = std::max(w - 2, 0);
  if (y0 > h - 2) y0 = std::max(h - 2, 0);
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double ax = u.x() - x0;
  const double ay = u.y() - y0;
  const double i00 = img.at(channel, x0, y0);
  const double i10 = img.at(channel, x1, y0);
  const double i01 = img.at(channel, x0, y1);
  const double i11 = img.at(channel, x1, y1);
  const double top = (1.0 - ax) * i00 + ax * i10;
  const double bottom = (1.0 - ax) * i01 + ax * i11;
  s.value = (1.0 - ay) * top + ay * bottom;
  s.grad_x = (1.0 - ay) * (i10 - i00) + ay * (i11 - i01);
  s.grad_y = bottom - top;
  s.valid = true;
  return s;
}

BilinearSample Sample(const IntensityImage& img, const Vec2& u) {
  BilinearSample out;
  for (int c = 0; c < img.channels(); ++c) {
    const ScalarSample s = SampleChannel(img, c, u);
    if (!s.valid) return BilinearSample{};
    out.value[c] = s.value;
    out.grad_x[c] = s.grad_x;
    out.grad_y[c] = s.grad_y;
  }
  out.valid = true;
  return out;
}

ImagePyramid BuildPyramid(const IntensityImage& img, int n_levels) {
  CheckPyramidSize(img.width(), img.height(), n_levels);
  ImagePyramid pyr;
  pyr.levels.push_back(img);
  for (int l = 1; l < n_levels; ++l) {
    const IntensityImage& fine = pyr.levels.back();
    IntensityImage coarse(fine.width() / 2, fine.height() / 2, fine.channels());
    for (int c = 0; c < fine.channels(); ++c) {
      const auto plane = DownsamplePlane(fine.plane(c), fine.width(), fine.height());
      std::copy(plane.begin(), plane.end(), coarse.plane(c).begin());
    }
    pyr.levels.push_back(std::move(coarse));
  }
  return pyr;
}

DepthPyramid BuildDepthPyramid(const DepthMap& depth, int n_levels) {
  CheckPyramidSize(depth.width(), depth.height(), n_levels);
  DepthPyramid pyr;
  pyr.levels.push_back(depth);
  for (int l = 1; l < n_levels; ++l) {
    const DepthMap& fine = pyr.levels.back();
    pyr.levels.emplace_back(fine.width() / 2, fine.height() / 2,
                            DownsamplePlane(fine.data(), fine.width(), fine.height()));
  }
  return pyr;
}

SparsePyramid BuildSparsePyramid(const SparseDepth& depth, int n_levels) {
  CheckPyramidSize(depth.width(), depth.height(), n_levels);
  SparsePyramid pyr;
  pyr.levels.push_back(depth);
  for (int l = 1; l < n_levels; ++l) {
    const SparseDepth& fine = pyr.levels.back();
    SparseDepth coarse(fine.width() / 2, fine.height() / 2);
    for (int y = 0; y < coarse.height(); ++y) {
      for (int x = 0; x < coarse.width(); ++x) {
        double sum = 0.0;
        int n = 0;
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            if (fine.valid(2 * x + dx, 2 * y + dy)) {
              sum += fine.value(2 * x + dx, 2 * y + dy);
              ++n;
            }
          }
        }
        if (n > 0) coarse.Set(x, y, sum / n);
      }
    }
    pyr.levels.push_back(std::move(coarse));
  }
  return pyr;
}

std::vector<double> BoxDownsampleAdjoint(std::span<const double> coarse_grad,
                                         int coarse_width, int coarse_height,
                                         int fine_width, int fine_height) {
  std::vector<double> fine(static_cast<std::size_t>(fine_width) * fine_height, 0.0);
  for (int y = 0; y < coarse_height; ++y) {
    for (int x = 0; x < coarse_width; ++x) {
      const double g = coarse_grad[static_cast<std::size_t>(y) * coarse_width + x] * 0.25;
      for (int dy = 0; dy < 2; ++dy) {
        for (int dx = 0; dx < 2; ++dx) {
          fine[static_cast<std::size_t>(2 * y + dy) * fine_width + 2 * x + dx] += g;
        }
      }
    }
  }
  return fine;
}

SecondOrderGradients ComputeSecondOrderGradients(const DepthMap& depth) {
  const int w = depth.width();
  const int h = depth.height();
  if (w < 3 || h < 3) {
    throw Error(ErrorKind::kDimension, "second-order gradients need at least 3x3");
  }
  SecondOrderGradients g;
  g.width = w;
  g.height = h;
  const std::size_t n = depth.size();
  g.dxx.assign(n, 0.0);
  g.dyy.assign(n, 0.0);
  g.dxy.assign(n, 0.0);
  const auto& k = kernels::Active();
  const double* d = depth.data().data();
  for (int y = 1; y + 1 < h; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    k.second_diff_row(d + row - w, d + row, d + row + w, g.dxx.data() + row,
                      g.dyy.data() + row, g.dxy.data() + row, static_cast<std::size_t>(w));
  }
  return g;
}

WarpedImage InverseWarp(const IntensityImage& src, const DepthMap& depth_tgt,
                        const Se3Transform& t_tgt_to_src, const CameraIntrinsics& k) {
  if (depth_tgt.width() != k.width || depth_tgt.height() != k.height ||
      src.width() != k.width || src.height() != k.height) {
    throw Error(ErrorKind::kDimension, "inverse warp inputs disagree with intrinsics");
  }
  WarpedImage out{IntensityImage(k.width, k.height, src.channels()),
                  std::vector<std::uint8_t>(depth_tgt.size(), 0)};
  for (int y = 0; y < k.height; ++y) {
    for (int x = 0; x < k.width; ++x) {
      const WarpResult w = WarpPixel(k, t_tgt_to_src, depth_tgt.at(x, y), Vec2(x, y));
      if (!w.valid) continue;
      const BilinearSample s = Sample(src, w.pixel);
      if (!s.valid) continue;
      for (int c = 0; c < src.channels(); ++c) out.image.at(c, x, y) = s.value[c];
      out.valid[static_cast<std::size_t>(y) * k.width + x] = 1;
    }
  }
  return out;
}

}  // namespace depthpose
