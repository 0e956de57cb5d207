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


#include "depthpose/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Geometry>

#include "depthpose/error.hpp"
#include "depthpose/losses.hpp"

namespace depthpose {
namespace {

std::vector<PoseMatch> MatchOrThrow(const Trajectory& est, const Trajectory& gt,
                                    double max_offset) {
  std::vector<PoseMatch> m = AssociateTrajectories(est, gt, max_offset);
  if (m.size() < 2) {
    throw Error(ErrorKind::kInsufficientOverlap,
                "only " + std::to_string(m.size()) + " poses could be associated");
  }
  return m;
}

void AlignedErrors(const Trajectory& est, const Trajectory& gt,
                   const std::vector<PoseMatch>& m, std::size_t first, std::size_t count,
                   std::vector<double>& out) {
  Eigen::Matrix3Xd src(3, count);
  Eigen::Matrix3Xd dst(3, count);
  for (std::size_t i = 0; i < count; ++i) {
    src.col(i) = est[m[first + i].est].pose.translation();
    dst.col(i) = gt[m[first + i].gt].pose.translation();
  }
  const Eigen::Matrix4d t = Eigen::umeyama(src, dst, false);
  const Mat3 r = t.topLeftCorner<3, 3>();
  const Vec3 p = t.topRightCorner<3, 1>();
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back((r * src.col(i) + p - dst.col(i)).norm());
  }
}

}  // namespace

void ValidateTrajectory(const Trajectory& traj) {
  for (std::size_t i = 1; i < traj.size(); ++i) {
    if (!(traj[i].timestamp > traj[i - 1].timestamp)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "trajectory timestamps are not strictly increasing at index " +
                      std::to_string(i));
    }
  }
}

std::vector<PoseMatch> AssociateTimestamps(const std::vector<double>& a,
                                           const std::vector<double>& b, double max_offset) {
  struct Candidate {
    double dt;
    std::size_t a;
    std::size_t b;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t hi =
        static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), a[i]) - b.begin());
    for (std::size_t j : {hi - 1, hi}) {
      if (j >= b.size()) continue;
      const double dt = std::fabs(b[j] - a[i]);
      if (dt <= max_offset) candidates.push_back({dt, i, j});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) { return x.dt < y.dt; });
  std::vector<std::uint8_t> used_a(a.size(), 0);
  std::vector<std::uint8_t> used_b(b.size(), 0);
  std::vector<PoseMatch> out;
  for (const Candidate& c : candidates) {
    if (used_a[c.a] || used_b[c.b]) continue;
    used_a[c.a] = used_b[c.b] = 1;
    out.push_back({c.a, c.b});
  }
  std::sort(out.begin(), out.end(),
            [](const PoseMatch& x, const PoseMatch& y) { return x.est < y.est; });
  return out;
}

std::vector<PoseMatch> AssociateTrajectories(const Trajectory& est, const Trajectory& gt,
                                             double max_offset) {
  ValidateTrajectory(est);
  ValidateTrajectory(gt);
  std::vector<double> a, b;
  for (const auto& p : est) a.push_back(p.timestamp);
  for (const auto& p : gt) b.push_back(p.timestamp);
  return AssociateTimestamps(a, b, max_offset);
}

MeanStd ComputeMeanStd(const std::vector<double>& values) {
  MeanStd r;
  if (values.empty()) return r;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  r.mean = sum / n;
  double sq = 0.0;
  for (double v : values) sq += (v - r.mean) * (v - r.mean);
  r.std = std::sqrt(sq / n);
  return r;
}

MeanStd ComputeAte(const Trajectory& est, const Trajectory& gt, double max_offset) {
  const std::vector<PoseMatch> m = MatchOrThrow(est, gt, max_offset);
  std::vector<double> errors;
  AlignedErrors(est, gt, m, 0, m.size(), errors);
  return ComputeMeanStd(errors);
}

MeanStd ComputeAteWindowed(const Trajectory& est, const Trajectory& gt, std::size_t window,
                           double max_offset) {
  if (window < 2) throw Error(ErrorKind::kInvalidArgument, "ATE window must be >= 2");
  const std::vector<PoseMatch> m = MatchOrThrow(est, gt, max_offset);
  const std::size_t w = std::min(window, m.size());
  std::vector<double> errors;
  for (std::size_t first = 0; first + w <= m.size(); ++first) {
    AlignedErrors(est, gt, m, first, w, errors);
  }
  return ComputeMeanStd(errors);
}

MeanStd ComputeRe(const Trajectory& est, const Trajectory& gt, double max_offset) {
  const std::vector<PoseMatch> m = MatchOrThrow(est, gt, max_offset);
  std::vector<double> errors;
  for (std::size_t i = 1; i < m.size(); ++i) {
    const Se3Transform rel_est = est[m[i - 1].est].pose.inverse() * est[m[i].est].pose;
    const Se3Transform rel_gt = gt[m[i - 1].gt].pose.inverse() * gt[m[i].gt].pose;
    errors.push_back((rel_gt.inverse() * rel_est).translation().norm());
  }
  return ComputeMeanStd(errors);
}

DepthMetrics ComputeDepthMetrics(const DepthMap& pred, const SparseDepth& gt) {
  return ComputeDepthMetrics(std::vector<DepthMap>{pred}, std::vector<SparseDepth>{gt});
}

DepthMetrics ComputeDepthMetrics(const std::vector<DepthMap>& pred,
                                 const std::vector<SparseDepth>& gt) {
  if (pred.size() != gt.size()) {
    throw Error(ErrorKind::kDimension, "prediction and ground-truth frame counts differ");
  }
  double sq = 0.0, abs = 0.0, isq = 0.0, iabs = 0.0;
  std::size_t n = 0;
  for (std::size_t f = 0; f < pred.size(); ++f) {
    if (pred[f].width() != gt[f].width() || pred[f].height() != gt[f].height()) {
      throw Error(ErrorKind::kDimension, "prediction and ground-truth sizes differ");
    }
    const auto& p = pred[f].data();
    const auto& g = gt[f].values();
    const auto& valid = gt[f].valid_mask();
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!valid[i]) continue;
      const double e = p[i] - g[i];
      const double ie = 1.0 / p[i] - 1.0 / g[i];
      sq += e * e;
      abs += std::fabs(e);
      isq += ie * ie;
      iabs += std::fabs(ie);
      ++n;
    }
  }
  if (n == 0) throw Error(ErrorKind::kEmptyGroundTruth, "ground truth has no valid pixel");
  const double inv = 1.0 / static_cast<double>(n);
  DepthMetrics m;
  m.rmse_mm = std::sqrt(sq * inv) * 1000.0;
  m.mae_mm = abs * inv * 1000.0;
  m.irmse_per_km = std::sqrt(isq * inv) * 1000.0;
  m.imae_per_km = iabs * inv * 1000.0;
  return m;
}

double AveragePhotometricLoss(const std::vector<IntensityImage>& images,
                              const std::vector<DepthMap>& depths,
                              const std::vector<Se3Transform>& t_k_to_next,
                              const CameraIntrinsics& k, int levels) {
  if (images.size() < 2 || depths.size() != images.size() ||
      t_k_to_next.size() + 1 != images.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "need >= 2 frames, one depth per frame and one pose per pair");
  }
  std::vector<ImagePyramid> img;
  std::vector<DepthPyramid> dep;
  for (std::size_t f = 0; f < images.size(); ++f) {
    img.push_back(BuildPyramid(ToLuma(images[f]), levels));
    dep.push_back(BuildDepthPyramid(depths[f], levels));
  }
  double sum = 0.0;
  for (std::size_t p = 0; p + 1 < images.size(); ++p) {
    PhotometricInputs in;
    in.image1 = &img[p];
    in.image2 = &img[p + 1];
    in.depth1 = &dep[p];
    in.depth2 = &dep[p + 1];
    std::vector<ResidualMap> residuals;
    std::vector<ScalarMap> ones;
    for (int l = 0; l < levels; ++l) {
      residuals.push_back(
          PhotometricResidual(in, t_k_to_next[p], k, l, IndicatorMode::kAll, false));
      ones.emplace_back(residuals.back().width, residuals.back().height, 1.0);
    }
    sum += MaskedPhotometricLoss(residuals, ones).value;
  }
  return sum / static_cast<double>(images.size() - 1);
}

DepthMap NearestValidFill(const SparseDepth& sparse) {
  const int w = sparse.width();
  const int h = sparse.height();
  // Valid columns per row, ascending.
  std::vector<std::vector<int>> rows(h);
  bool any = false;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (sparse.valid(x, y)) {
        rows[y].push_back(x);
        any = true;
      }
    }
  }
  if (!any) throw Error(ErrorKind::kEmptyGroundTruth, "no valid pixel to fill from");
  std::vector<double> out(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      long best = -1;
      long best_key = 0;  // row-major index of the best pixel
      for (int dy = 0; dy < h; ++dy) {
        const long dy2 = static_cast<long>(dy) * dy;
        if (best >= 0 && dy2 > best) break;
        for (int yy : {y - dy, y + dy}) {
          if (yy < 0 || yy >= h || (dy == 0 && yy != y) || (dy != 0 && yy == y)) continue;
          const auto& cols = rows[yy];
          auto it = std::lower_bound(cols.begin(), cols.end(), x);
          for (auto jt : {it - 1, it}) {
            if (jt < cols.begin() || jt >= cols.end()) continue;
            const long dx = *jt - x;
            const long d2 = dx * dx + dy2;
            const long key = static_cast<long>(yy) * w + *jt;
            if (best < 0 || d2 < best || (d2 == best && key < best_key)) {
              best = d2;
              best_key = key;
            }
          }
        }
      }
      out[static_cast<std::size_t>(y) * w + x] = sparse.values()[best_key];
    }
  }
  return DepthMap(w, h, std::move(out));
}

std::vector<Se3Transform> RelativeMotions(const Trajectory& traj) {
  std::vector<Se3Transform> out;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    out.push_back(traj[i].pose.inverse() * traj[i - 1].pose);
  }
  return out;
}

}  // namespace depthpose
