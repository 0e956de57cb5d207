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


// TUM RGB-D style datasets, trajectory files and depth artifacts.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "depthpose/evaluation.hpp"
#include "depthpose/geometry.hpp"
#include "depthpose/imaging.hpp"

namespace depthpose {

// TUM depth PNGs store depth * 5000 as 16-bit integers; 0 means no reading.
inline constexpr double kTumDepthFactor = 5000.0;

struct DatasetFrame {
  double timestamp = 0.0;
  IntensityImage image;
  SparseDepth depth;                          // input measurements
  std::optional<DepthMap> gt_depth;           // dense ground truth, when known
  std::optional<Se3Transform> t_world_to_cam; // ground-truth T_{w->k}
};

struct SequenceDataset {
  std::vector<DatasetFrame> frames;
  CameraIntrinsics intrinsics;
};

// Reads rgb.txt, depth.txt and the optional groundtruth.txt, depth_gt.txt
// and intrinsics.json from `dir`. Every rgb frame is paired with the nearest
// depth frame within `max_offset`; unpaired rgb frames are dropped.
// Intrinsics come from intrinsics.json, else `fallback`, else the TUM
// default (525, 525, 319.5, 239.5) for 640x480 images. A depth entry whose
// path has a sibling ".f32" sidecar is read losslessly from it. Throws
// kLoad on missing files, unreadable images or zero associations.
SequenceDataset LoadTumSequence(const std::filesystem::path& dir,
                                double max_offset = kDefaultMaxTimeOffset,
                                const std::optional<CameraIntrinsics>& fallback = {});

// Writes the dataset in the layout LoadTumSequence reads. Returns the files
// written, relative to `dir`, in a stable order.
std::vector<std::filesystem::path> WriteTumSequence(const std::filesystem::path& dir,
                                                    const SequenceDataset& data);

// One line of an rgb.txt / depth.txt style index.
struct IndexEntry {
  double timestamp = 0.0;
  std::string path;
};

// Throws kLoad when unreadable, malformed or not strictly increasing.
std::vector<IndexEntry> ReadIndexFile(const std::filesystem::path& path);
void WriteIndexFile(const std::filesystem::path& path, const std::string& title,
                    const std::vector<IndexEntry>& entries);

// "%.6f", the name stem used for per-frame files.
std::string TimestampName(double t);

// TUM trajectory lines: `timestamp tx ty tz qx qy qz qw` (camera to world).
void WriteTrajectory(const Trajectory& traj, const std::filesystem::path& path);
// Throws kParse with the line number on a malformed line, kLoad when the file
// cannot be opened.
Trajectory ReadTrajectory(const std::filesystem::path& path);
std::string FormatTrajectoryLine(const TimedPose& pose);

// Planar samples of up to 16 bits; 8-bit images hold values in [0, 255].
struct PngImage {
  int width = 0;
  int height = 0;
  int channels = 1;   // 1 (gray) or 3 (RGB)
  int bit_depth = 8;  // 8 or 16
  std::vector<std::uint16_t> samples;  // interleaved, row-major
};

// Palette, alpha and low-bit-depth files are converted to gray or RGB.
PngImage ReadPng(const std::filesystem::path& path);
void WritePng(const std::filesystem::path& path, const PngImage& img);

// 8- or 16-bit gray/RGB PNG to [0, 1] intensities.
IntensityImage LoadImage(const std::filesystem::path& path);
// Quantized to 8 bits per channel.
void SaveImage(const std::filesystem::path& path, const IntensityImage& img);

SparseDepth LoadDepthPng(const std::filesystem::path& path, double factor = kTumDepthFactor);
// Invalid pixels are written as 0; valid depths are rounded and clamped to
// [1, 65535] units.
void SaveDepthPng(const std::filesystem::path& path, const SparseDepth& depth,
                  double factor = kTumDepthFactor);

// Lossless float32 sidecar: "DPDEPTH1", u32 width, u32 height, then
// width * height little-endian float32 values, 0 where invalid.
SparseDepth LoadDepthSidecar(const std::filesystem::path& path);
void SaveDepthSidecar(const std::filesystem::path& path, const SparseDepth& depth);

// Sidecar when "<stem>.f32" exists next to `path`, else the PNG itself.
SparseDepth LoadDepthArtifact(const std::filesystem::path& path);

// Throws kDomain when a pixel is invalid.
DepthMap ToDense(const SparseDepth& depth);

// Intrinsics JSON: {"fx", "fy", "cx", "cy", "width", "height"}.
CameraIntrinsics LoadIntrinsics(const std::filesystem::path& path);
void SaveIntrinsics(const std::filesystem::path& path, const CameraIntrinsics& k);

}  // namespace depthpose
