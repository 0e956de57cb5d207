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


#include "depthpose/dataio.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "depthpose/error.hpp"
#include "json.hpp"

namespace depthpose {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool ParseDouble(std::string_view s, double& out) {
  const char* end = s.data() + s.size();
  auto r = std::from_chars(s.data(), end, out);
  return r.ec == std::errc() && r.ptr == end && std::isfinite(out);
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool SkipLine(std::string_view line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::vector<double> Timestamps(const std::vector<IndexEntry>& e) {
  std::vector<double> t;
  for (const auto& x : e) t.push_back(x.timestamp);
  return t;
}

double Clean(double v) { return v == 0.0 ? 0.0 : v; }  // drops negative zero

std::string FormatG9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", Clean(v));
  return buf;
}

}  // namespace

std::vector<IndexEntry> ReadIndexFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kLoad, "cannot open " + path.string());
  std::vector<IndexEntry> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (SkipLine(line)) continue;
    const auto f = SplitFields(line);
    double t = 0.0;
    if (f.size() < 2 || !ParseDouble(f[0], t)) {
      throw Error(ErrorKind::kLoad, path.string() + ":" + std::to_string(line_no) +
                                        ": expected 'timestamp filename'");
    }
    if (!out.empty() && !(t > out.back().timestamp)) {
      throw Error(ErrorKind::kLoad, path.string() + ":" + std::to_string(line_no) +
                                        ": timestamps must increase");
    }
    out.push_back({t, std::string(f[1])});
  }
  return out;
}

void WriteIndexFile(const fs::path& path, const std::string& title,
                const std::vector<IndexEntry>& entries) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kLoad, "cannot write " + path.string());
  out << "# " << title << "\n# timestamp filename\n";
  for (const auto& e : entries) out << TimestampName(e.timestamp) << ' ' << e.path << '\n';
}

std::string TimestampName(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", Clean(t));
  return buf;
}

std::string FormatTrajectoryLine(const TimedPose& p) {
  Eigen::Quaterniond q = p.pose.quaternion().normalized();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  char ts[64];
  std::snprintf(ts, sizeof ts, "%.9f", Clean(p.timestamp));
  const Vec3& t = p.pose.translation();
  std::string line = ts;
  for (double v : {t.x(), t.y(), t.z(), q.x(), q.y(), q.z(), q.w()}) {
    line += ' ';
    line += FormatG9(v);
  }
  return line;
}

void WriteTrajectory(const Trajectory& traj, const fs::path& path) {
  ValidateTrajectory(traj);
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kLoad, "cannot write " + path.string());
  out << "# timestamp tx ty tz qx qy qz qw\n";
  for (const auto& p : traj) out << FormatTrajectoryLine(p) << '\n';
}

Trajectory ReadTrajectory(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kLoad, "cannot open " + path.string());
  Trajectory traj;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (SkipLine(line)) continue;
    const auto f = SplitFields(line);
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (f.size() != 8) {
      throw Error(ErrorKind::kParse, where + ": expected 8 fields, found " +
                                         std::to_string(f.size()));
    }
    double v[8];
    for (int i = 0; i < 8; ++i) {
      if (!ParseDouble(f[i], v[i])) {
        throw Error(ErrorKind::kParse, where + ": bad number '" + std::string(f[i]) + "'");
      }
    }
    const Eigen::Quaterniond q(v[7], v[4], v[5], v[6]);
    if (q.norm() < 1e-12) throw Error(ErrorKind::kParse, where + ": zero quaternion");
    if (!traj.empty() && !(v[0] > traj.back().timestamp)) {
      throw Error(ErrorKind::kParse, where + ": timestamps must increase");
    }
    traj.push_back({v[0], Se3Transform::FromQuaternion(q, Vec3(v[1], v[2], v[3]))});
  }
  return traj;
}

IntensityImage LoadImage(const fs::path& path) {
  const PngImage png = ReadPng(path);
  const double scale = png.bit_depth == 16 ? 1.0 / 65535.0 : 1.0 / 255.0;
  IntensityImage img(png.width, png.height, png.channels);
  for (int y = 0; y < png.height; ++y) {
    for (int x = 0; x < png.width; ++x) {
      for (int c = 0; c < png.channels; ++c) {
        const std::size_t i = (static_cast<std::size_t>(y) * png.width + x) * png.channels + c;
        img.at(c, x, y) = png.samples[i] * scale;
      }
    }
  }
  return img;
}

void SaveImage(const fs::path& path, const IntensityImage& img) {
  PngImage png;
  png.width = img.width();
  png.height = img.height();
  png.channels = img.channels();
  png.bit_depth = 8;
  png.samples.resize(static_cast<std::size_t>(png.width) * png.height * png.channels);
  for (int y = 0; y < png.height; ++y) {
    for (int x = 0; x < png.width; ++x) {
      for (int c = 0; c < png.channels; ++c) {
        const double v = std::clamp(img.at(c, x, y), 0.0, 1.0);
        png.samples[(static_cast<std::size_t>(y) * png.width + x) * png.channels + c] =
            static_cast<std::uint16_t>(std::lround(v * 255.0));
      }
    }
  }
  WritePng(path, png);
}

SparseDepth LoadDepthPng(const fs::path& path, double factor) {
  const PngImage png = ReadPng(path);
  if (png.channels != 1) {
    throw Error(ErrorKind::kLoad, path.string() + ": depth PNG must be single-channel");
  }
  SparseDepth d(png.width, png.height);
  for (int y = 0; y < png.height; ++y) {
    for (int x = 0; x < png.width; ++x) {
      const std::uint16_t v = png.samples[static_cast<std::size_t>(y) * png.width + x];
      if (v != 0) d.Set(x, y, v / factor);
    }
  }
  return d;
}

void SaveDepthPng(const fs::path& path, const SparseDepth& depth, double factor) {
  PngImage png;
  png.width = depth.width();
  png.height = depth.height();
  png.channels = 1;
  png.bit_depth = 16;
  png.samples.assign(depth.size(), 0);
  for (std::size_t i = 0; i < depth.size(); ++i) {
    if (!depth.valid_mask()[i]) continue;
    const double units = std::round(depth.values()[i] * factor);
    png.samples[i] = static_cast<std::uint16_t>(std::clamp(units, 1.0, 65535.0));
  }
  WritePng(path, png);
}

namespace {
constexpr char kSidecarMagic[8] = {'D', 'P', 'D', 'E', 'P', 'T', 'H', '1'};

void PutU32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t GetU32(const unsigned char* b) {
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}
}  // namespace

void SaveDepthSidecar(const fs::path& path, const SparseDepth& depth) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kLoad, "cannot write " + path.string());
  out.write(kSidecarMagic, 8);
  PutU32(out, static_cast<std::uint32_t>(depth.width()));
  PutU32(out, static_cast<std::uint32_t>(depth.height()));
  for (std::size_t i = 0; i < depth.size(); ++i) {
    const float f = depth.valid_mask()[i] ? static_cast<float>(depth.values()[i]) : 0.0f;
    PutU32(out, std::bit_cast<std::uint32_t>(f));
  }
  if (!out) throw Error(ErrorKind::kLoad, "write failed for " + path.string());
}

SparseDepth LoadDepthSidecar(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kLoad, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kSidecarMagic, 8) != 0) {
    throw Error(ErrorKind::kLoad, path.string() + " is not a depth sidecar");
  }
  const std::uint32_t w = GetU32(bytes.data() + 8);
  const std::uint32_t h = GetU32(bytes.data() + 12);
  if (w == 0 || h == 0 || bytes.size() != 16 + 4ull * w * h) {
    throw Error(ErrorKind::kLoad, path.string() + ": sidecar size does not match header");
  }
  SparseDepth d(static_cast<int>(w), static_cast<int>(h));
  for (std::uint32_t y = 0; y < h; ++y) {
    for (std::uint32_t x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const float f = std::bit_cast<float>(GetU32(bytes.data() + 16 + 4 * i));
      if (f > 0.0f && std::isfinite(f)) d.Set(static_cast<int>(x), static_cast<int>(y), f);
    }
  }
  return d;
}

SparseDepth LoadDepthArtifact(const fs::path& path) {
  if (path.extension() == ".f32") return LoadDepthSidecar(path);
  fs::path sidecar = path;
  sidecar.replace_extension(".f32");
  if (fs::exists(sidecar)) return LoadDepthSidecar(sidecar);
  return LoadDepthPng(path);
}

DepthMap ToDense(const SparseDepth& depth) {
  if (depth.ValidCount() != depth.size()) {
    throw Error(ErrorKind::kDomain, "depth map has invalid pixels");
  }
  return DepthMap(depth.width(), depth.height(), depth.values());
}

CameraIntrinsics LoadIntrinsics(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kLoad, "cannot open " + path.string());
  try {
    const json j = json::parse(in);
    CameraIntrinsics k;
    k.fx = j.at("fx").get<double>();
    k.fy = j.at("fy").get<double>();
    k.cx = j.at("cx").get<double>();
    k.cy = j.at("cy").get<double>();
    k.width = j.at("width").get<int>();
    k.height = j.at("height").get<int>();
    k.Validate();
    return k;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, path.string() + ": " + e.what());
  }
}

void SaveIntrinsics(const fs::path& path, const CameraIntrinsics& k) {
  const json j = {{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx},
                  {"cy", k.cy}, {"width", k.width}, {"height", k.height}};
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kLoad, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

SequenceDataset LoadTumSequence(const fs::path& dir, double max_offset,
                                const std::optional<CameraIntrinsics>& fallback) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::kLoad, dir.string() + " is not a directory");
  const auto rgb = ReadIndexFile(dir / "rgb.txt");
  const auto depth = ReadIndexFile(dir / "depth.txt");
  std::vector<IndexEntry> gt_depth;
  if (fs::exists(dir / "depth_gt.txt")) gt_depth = ReadIndexFile(dir / "depth_gt.txt");
  Trajectory gt_traj;
  const bool has_gt = fs::exists(dir / "groundtruth.txt");
  if (has_gt) gt_traj = ReadTrajectory(dir / "groundtruth.txt");

  const auto rgb_t = Timestamps(rgb);
  const auto matches = AssociateTimestamps(rgb_t, Timestamps(depth), max_offset);
  if (matches.empty()) {
    throw Error(ErrorKind::kLoad, dir.string() + ": no rgb/depth pair within " +
                                      std::to_string(max_offset) + " s");
  }
  std::vector<PoseMatch> gt_depth_match;
  if (!gt_depth.empty()) gt_depth_match = AssociateTimestamps(rgb_t, Timestamps(gt_depth), max_offset);
  std::vector<PoseMatch> pose_match;
  if (has_gt) {
    std::vector<double> gt_t;
    for (const auto& p : gt_traj) gt_t.push_back(p.timestamp);
    pose_match = AssociateTimestamps(rgb_t, gt_t, max_offset);
  }
  auto find = [](const std::vector<PoseMatch>& m, std::size_t a) -> std::optional<std::size_t> {
    for (const auto& x : m) {
      if (x.est == a) return x.gt;
    }
    return std::nullopt;
  };

  SequenceDataset data;
  for (const PoseMatch& m : matches) {
    DatasetFrame f;
    f.timestamp = rgb[m.est].timestamp;
    f.image = LoadImage(dir / rgb[m.est].path);
    f.depth = LoadDepthArtifact(dir / depth[m.gt].path);
    if (f.depth.width() != f.image.width() || f.depth.height() != f.image.height()) {
      throw Error(ErrorKind::kLoad, "depth " + depth[m.gt].path + " does not match its image size");
    }
    if (auto j = find(gt_depth_match, m.est)) {
      f.gt_depth = ToDense(LoadDepthArtifact(dir / gt_depth[*j].path));
    }
    if (auto j = find(pose_match, m.est)) f.t_world_to_cam = gt_traj[*j].pose.inverse();
    if (!data.frames.empty() && (f.image.width() != data.frames.front().image.width() ||
                                 f.image.height() != data.frames.front().image.height())) {
      throw Error(ErrorKind::kLoad, "frames of " + dir.string() + " differ in size");
    }
    data.frames.push_back(std::move(f));
  }

  const int w = data.frames.front().image.width();
  const int h = data.frames.front().image.height();
  if (fs::exists(dir / "intrinsics.json")) {
    data.intrinsics = LoadIntrinsics(dir / "intrinsics.json");
  } else if (fallback) {
    data.intrinsics = *fallback;
  } else if (w == 640 && h == 480) {
    data.intrinsics = {525.0, 525.0, 319.5, 239.5, 640, 480};
  } else {
    throw Error(ErrorKind::kLoad, dir.string() + ": no intrinsics.json and no default for " +
                                      std::to_string(w) + "x" + std::to_string(h));
  }
  if (data.intrinsics.width != w || data.intrinsics.height != h) {
    throw Error(ErrorKind::kLoad, "intrinsics size does not match the images");
  }
  return data;
}

std::vector<fs::path> WriteTumSequence(const fs::path& dir, const SequenceDataset& data) {
  fs::create_directories(dir / "rgb");
  fs::create_directories(dir / "depth");
  std::vector<fs::path> written;
  std::vector<IndexEntry> rgb, depth, gt_depth;
  Trajectory gt;
  for (const DatasetFrame& f : data.frames) {
    const std::string name = TimestampName(f.timestamp);
    const fs::path img = fs::path("rgb") / (name + ".png");
    SaveImage(dir / img, f.image);
    rgb.push_back({f.timestamp, img.string()});
    const fs::path dp = fs::path("depth") / (name + ".png");
    const fs::path ds = fs::path("depth") / (name + ".f32");
    SaveDepthPng(dir / dp, f.depth);
    SaveDepthSidecar(dir / ds, f.depth);
    depth.push_back({f.timestamp, dp.string()});
    written.insert(written.end(), {img, dp, ds});
    if (f.gt_depth) {
      fs::create_directories(dir / "depth_gt");
      const fs::path gp = fs::path("depth_gt") / (name + ".png");
      const fs::path gs = fs::path("depth_gt") / (name + ".f32");
      const SparseDepth dense = SparseDepth::FromDense(*f.gt_depth);
      SaveDepthPng(dir / gp, dense);
      SaveDepthSidecar(dir / gs, dense);
      gt_depth.push_back({f.timestamp, gp.string()});
      written.insert(written.end(), {gp, gs});
    }
    if (f.t_world_to_cam) gt.push_back({f.timestamp, f.t_world_to_cam->inverse()});
  }
  WriteIndexFile(dir / "rgb.txt", "color images", rgb);
  WriteIndexFile(dir / "depth.txt", "depth maps", depth);
  written.insert(written.end(), {"rgb.txt", "depth.txt"});
  if (!gt_depth.empty()) {
    WriteIndexFile(dir / "depth_gt.txt", "dense ground-truth depth", gt_depth);
    written.emplace_back("depth_gt.txt");
  }
  if (!gt.empty()) {
    WriteTrajectory(gt, dir / "groundtruth.txt");
    written.emplace_back("groundtruth.txt");
  }
  SaveIntrinsics(dir / "intrinsics.json", data.intrinsics);
  written.emplace_back("intrinsics.json");
  std::sort(written.begin(), written.end());
  return written;
}

}  // namespace depthpose
