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


#include "commands.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "depthpose/dataio.hpp"
#include "depthpose/error.hpp"
#include "depthpose/evaluation.hpp"
#include "depthpose/gradcheck.hpp"
#include "depthpose/sensorsim.hpp"
#include "depthpose/synthetic.hpp"
#include "manifest.hpp"

namespace depthpose::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t FrameSeed(std::uint64_t seed, std::size_t frame) {
  return seed ^ (0x9E3779B97F4A7C15ull * (frame + 1));
}

std::string Num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void WriteHistory(const fs::path& path, const std::vector<LossBreakdown>& history,
                  const LossBreakdown* final_loss) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kLoad, "cannot write " + path.string());
  out << "iter,total,supervised,photometric_masked,smoothness,mask_reg\n";
  auto row = [&out](const std::string& it, const LossBreakdown& l) {
    out << it << ',' << Num(l.total) << ',' << Num(l.supervised) << ','
        << Num(l.photometric_masked) << ',' << Num(l.smoothness) << ',' << Num(l.mask_reg)
        << '\n';
  };
  for (std::size_t i = 0; i < history.size(); ++i) row(std::to_string(i), history[i]);
  if (final_loss != nullptr) row("final", *final_loss);
}

SparseDepth GroundTruthDepth(const DatasetFrame& f) {
  return f.gt_depth ? SparseDepth::FromDense(*f.gt_depth) : f.depth;
}

}  // namespace

LossWeights ParseWeights(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::kParse, "bad weight '" + item + "'");
    }
  }
  if (v.size() != 4) throw Error(ErrorKind::kParse, "--weights needs alpha,beta,gamma,theta");
  LossWeights w{v[0], v[1], v[2], v[3]};
  w.Validate();
  return w;
}

std::pair<int, int> ParseSize(const std::string& s) {
  int h = 0, w = 0;
  char x = 0, extra = 0;
  if (std::sscanf(s.c_str(), "%d%c%d%c", &h, &x, &w, &extra) != 3 || (x != 'x' && x != 'X') ||
      h <= 0 || w <= 0) {
    throw Error(ErrorKind::kParse, "size must look like HxW, got '" + s + "'");
  }
  return {h, w};
}

int RunSimulate(const SimulateArgs& a, const RunConfig& base,
                const std::map<std::string, std::string>& args) {
  RunConfig config = base;
  if (a.noise_f) config.noise.f = *a.noise_f;
  if (a.sample_rate) config.noise.sample_rate = *a.sample_rate;
  if (a.seed) config.noise.seed = config.seed = *a.seed;
  config.Validate();

  SyntheticScene scene = fs::is_regular_file(a.scene)
                             ? LoadSceneFile(a.scene)
                             : MakePresetScene(a.scene, a.width, a.height, a.frames);
  SequenceDataset data = GenerateSynthetic(scene);
  for (std::size_t k = 0; k < data.frames.size(); ++k) {
    NoiseModel model = config.noise;
    model.seed = FrameSeed(config.noise.seed, k);
    data.frames[k].depth = CorruptDepth(*data.frames[k].gt_depth, model);
    spdlog::debug("frame {}: {} of {} depth samples kept", k, data.frames[k].depth.ValidCount(),
                  data.frames[k].depth.size());
  }
  RunManifest m;
  m.command = "simulate";
  m.args = args;
  m.config = ToJson(config);
  m.seed = config.noise.seed;
  m.inputs = {a.scene};
  m.root = a.out;
  m.outputs = WriteTumSequence(a.out, data);
  m.Write(a.out / "manifest.json");
  spdlog::info("wrote {} frames to {}", data.frames.size(), a.out.string());
  return kExitOk;
}

int RunRefine(const RefineArgs& a, const RunConfig& base,
              const std::map<std::string, std::string>& args) {
  if (a.iters < 1) throw Error(ErrorKind::kInvalidArgument, "--iters must be >= 1");
  RunConfig config = base;
  if (a.predictor) config.predictor = *a.predictor;
  if (a.weights) config.weights = ParseWeights(*a.weights);
  if (a.lr) config.adam.lr = *a.lr;
  if (a.levels) config.levels = *a.levels;
  if (a.seed) config.seed = *a.seed;
  config.Validate();

  const SequenceDataset data = LoadTumSequence(a.data, kDefaultMaxTimeOffset, config.intrinsics);
  if (data.frames.size() < 2) throw Error(ErrorKind::kLoad, "refinement needs >= 2 frames");
  std::vector<RefineFrame> frames;
  std::vector<PosedSparseDepth> posed;
  bool all_posed = true;
  for (const DatasetFrame& f : data.frames) {
    frames.push_back({f.image, f.depth});
    all_posed = all_posed && f.t_world_to_cam.has_value();
    posed.push_back({f.depth, f.t_world_to_cam.value_or(Se3Transform())});
  }
  std::vector<SparseDepth> supervision;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    supervision.push_back(all_posed ? AggregateSupervision(posed, k, data.intrinsics)
                                    : frames[k].sparse);
  }
  spdlog::info("supervision: {}", all_posed ? "aggregated over ground-truth poses"
                                            : "per-frame measurements");

  const PredictorPair predictors = MakePredictors(config.predictor, config.predictor_config);
  RefineOptions options;
  options.levels = config.levels;
  options.adam = config.adam;
  options.indicator = config.indicator;
  options.use_mask = config.use_mask;
  std::vector<LossBreakdown> history;
  options.on_iteration = [&history](int it, const LossBreakdown& l) {
    history.push_back(l);
    spdlog::debug("iter {} total {:.6g}", it, l.total);
  };

  fs::create_directories(a.out);
  RunManifest m;
  m.command = "refine";
  m.args = args;
  m.config = ToJson(config);
  m.seed = config.seed;
  m.inputs = {a.data.string()};
  m.root = a.out;

  RefinementResult result;
  try {
    result = JointRefine(frames, supervision, data.intrinsics, predictors, config.weights,
                         a.iters, config.seed, options);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kDiverged) throw;
    WriteHistory(a.out / "loss_history.csv", history, nullptr);
    m.outputs = {"loss_history.csv"};
    m.Write(a.out / "manifest.json");
    spdlog::error("{}; partial history kept in {}", e.what(),
                  (a.out / "loss_history.csv").string());
    return kExitFailure;
  }

  fs::create_directories(a.out / "depth");
  std::vector<IndexEntry> index;
  Trajectory traj;
  Se3Transform cam_to_world;  // first frame anchors the world
  for (std::size_t k = 0; k < data.frames.size(); ++k) {
    const std::string name = TimestampName(data.frames[k].timestamp);
    const fs::path png = fs::path("depth") / (name + ".png");
    const fs::path f32 = fs::path("depth") / (name + ".f32");
    const SparseDepth dense = SparseDepth::FromDense(result.depths[k]);
    SaveDepthPng(a.out / png, dense);
    SaveDepthSidecar(a.out / f32, dense);
    index.push_back({data.frames[k].timestamp, png.string()});
    m.outputs.insert(m.outputs.end(), {png, f32});
    if (k > 0) cam_to_world = cam_to_world * result.relative_poses[k - 1].inverse();
    traj.push_back({data.frames[k].timestamp, cam_to_world});
  }
  WriteIndexFile(a.out / "depth.txt", "refined depth maps", index);
  WriteTrajectory(traj, a.out / "trajectory.txt");
  WriteHistory(a.out / "loss_history.csv", result.history, &result.final_loss);
  result.params.Save(a.out / "params.bin");
  m.outputs.insert(m.outputs.end(),
                   {"depth.txt", "trajectory.txt", "loss_history.csv", "params.bin"});
  m.Write(a.out / "manifest.json");
  spdlog::info("loss {:.6g} -> {:.6g} after {} iterations", result.history.front().total,
               result.final_loss.total, a.iters);
  return kExitOk;
}

int RunEvaluate(const EvaluateArgs& a, const RunConfig& config,
                const std::map<std::string, std::string>& args) {
  const int levels = a.levels.value_or(config.levels);
  const SequenceDataset gt = LoadTumSequence(a.gt, kDefaultMaxTimeOffset, config.intrinsics);
  if (!fs::exists(a.gt / "groundtruth.txt")) {
    throw Error(ErrorKind::kLoad, a.gt.string() + " has no groundtruth.txt");
  }
  const Trajectory gt_traj = ReadTrajectory(a.gt / "groundtruth.txt");
  const Trajectory est_traj = ReadTrajectory(a.pred / "trajectory.txt");
  const auto pred_index = ReadIndexFile(a.pred / "depth.txt");

  std::vector<double> pred_t, gt_t;
  for (const auto& e : pred_index) pred_t.push_back(e.timestamp);
  for (const auto& f : gt.frames) gt_t.push_back(f.timestamp);
  const auto matches = AssociateTimestamps(pred_t, gt_t, kDefaultMaxTimeOffset);
  if (matches.empty()) {
    throw Error(ErrorKind::kInsufficientOverlap, "no predicted depth matches a ground-truth frame");
  }
  std::vector<DepthMap> pred_depths;
  std::vector<SparseDepth> gt_depths;
  std::vector<IntensityImage> images;
  Trajectory pred_poses;
  for (const PoseMatch& m : matches) {
    pred_depths.push_back(ToDense(LoadDepthArtifact(a.pred / pred_index[m.est].path)));
    gt_depths.push_back(GroundTruthDepth(gt.frames[m.gt]));
    images.push_back(gt.frames[m.gt].image);
    pred_poses.push_back({pred_index[m.est].timestamp, Se3Transform()});
  }
  const DepthMetrics dm = ComputeDepthMetrics(pred_depths, gt_depths);
  const MeanStd ate = ComputeAte(est_traj, gt_traj);
  const MeanStd re = ComputeRe(est_traj, gt_traj);

  json photometric = nullptr;
  const auto pose_match = AssociateTrajectories(pred_poses, est_traj);
  if (pose_match.size() == pred_poses.size() && pred_poses.size() >= 2) {
    Trajectory poses;
    for (const PoseMatch& m : pose_match) poses.push_back(est_traj[m.gt]);
    photometric = AveragePhotometricLoss(images, pred_depths, RelativeMotions(poses),
                                         gt.intrinsics, levels);
  } else {
    spdlog::warn("photometric metric skipped: predicted poses do not cover the depth frames");
  }

  const json metrics = {{"rmse_mm", dm.rmse_mm},          {"mae_mm", dm.mae_mm},
                        {"irmse_1perkm", dm.irmse_per_km}, {"imae_1perkm", dm.imae_per_km},
                        {"ate_m_mean", ate.mean},          {"ate_m_std", ate.std},
                        {"re_mean", re.mean},              {"re_std", re.std},
                        {"photometric", photometric}};
  if (a.out.has_parent_path()) fs::create_directories(a.out.parent_path());
  {
    std::ofstream out(a.out);
    if (!out) throw Error(ErrorKind::kLoad, "cannot write " + a.out.string());
    out << metrics.dump(2) << '\n';
  }
  RunManifest m;
  m.command = "evaluate";
  m.args = args;
  RunConfig snapshot = config;
  snapshot.levels = levels;
  m.config = ToJson(snapshot);
  m.inputs = {a.pred.string(), a.gt.string()};
  m.root = a.out.parent_path().empty() ? fs::path(".") : a.out.parent_path();
  m.outputs = {a.out.filename()};
  fs::path manifest = a.out;
  manifest.replace_extension(".manifest.json");
  m.Write(manifest);
  std::printf("%s\n", metrics.dump(2).c_str());
  return kExitOk;
}

int RunGradcheck(const GradcheckArgs& a, const std::map<std::string, std::string>& args) {
  GradcheckOptions o;
  o.width = a.width;
  o.height = a.height;
  o.levels = a.levels;
  o.seed = a.seed;
  o.plant_bug = a.plant_bug;
  const GradcheckSuiteResult r = RunGradcheckSuite(o);

  json report = json::array();
  for (const GradcheckEntry& e : r.entries) {
    std::printf("%s/%s (instance seed %llu): %s\n", e.predictor.c_str(), e.term.c_str(),
                static_cast<unsigned long long>(e.instance_seed), e.report.passed ? "PASS" : "FAIL");
    for (const BlockCheck& b : e.report.blocks) {
      std::printf("  %-32s coords %4zu  max_rel %.3e  max_abs %.3e  tol_ratio %.3f  %s\n",
                  b.name.c_str(), b.coords_checked, b.max_rel_error, b.max_abs_error,
                  b.max_tolerance_ratio, b.passed ? "ok" : "FAIL");
      report.push_back({{"predictor", e.predictor}, {"term", e.term}, {"block", b.name},
                        {"coords", b.coords_checked}, {"max_rel_error", b.max_rel_error},
                        {"max_abs_error", b.max_abs_error},
                        {"max_tolerance_ratio", b.max_tolerance_ratio}, {"passed", b.passed}});
    }
  }
  std::printf("gradcheck %s\n", r.passed ? "PASSED" : "FAILED");
  if (a.out) {
    fs::create_directories(*a.out);
    std::ofstream(*a.out / "gradcheck.json") << report.dump(2) << '\n';
    RunManifest m;
    m.command = "gradcheck";
    m.args = args;
    m.config = {{"size", std::to_string(a.height) + "x" + std::to_string(a.width)},
                {"levels", a.levels},
                {"rel_tol", o.fd.rel_tol},
                {"abs_floor", o.fd.abs_floor},
                {"step", o.fd.step}};
    m.seed = a.seed;
    m.root = *a.out;
    m.outputs = {"gradcheck.json"};
    m.Write(*a.out / "manifest.json");
  }
  return r.passed ? kExitOk : kExitFailure;
}

}  // namespace depthpose::cli
