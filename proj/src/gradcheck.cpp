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


#include "depthpose/gradcheck.hpp"

#include <cmath>
#include <random>

#include "depthpose/error.hpp"

namespace depthpose {
namespace {

struct Instance {
  std::vector<RefineFrame> frames;
  std::vector<SparseDepth> supervision;
  CameraIntrinsics k;
};

Instance RandomInstance(const GradcheckOptions& o, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> intensity(0.1, 0.9);
  std::uniform_real_distribution<double> depth(1.5, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Instance inst;
  inst.k = {static_cast<double>(o.width), static_cast<double>(o.width), (o.width - 1) / 2.0,
            (o.height - 1) / 2.0, o.width, o.height};
  for (int f = 0; f < o.frames; ++f) {
    IntensityImage img(o.width, o.height, 1);
    SparseDepth sparse(o.width, o.height);
    SparseDepth sup(o.width, o.height);
    for (int y = 0; y < o.height; ++y) {
      for (int x = 0; x < o.width; ++x) {
        img.at(0, x, y) = intensity(rng);
        if (unit(rng) < 0.3) sparse.Set(x, y, depth(rng));
        if (unit(rng) < 0.5) sup.Set(x, y, depth(rng));
      }
    }
    inst.frames.push_back({std::move(img), std::move(sparse)});
    inst.supervision.push_back(std::move(sup));
  }
  return inst;
}

bool NearLattice(double v, double margin) {
  return std::fabs(v - std::round(v)) < margin;
}

// True when no warp, residual or smoothness term sits on a kink.
bool KinkFree(const SequenceObjective& obj, const ParamVector& params, const Instance& inst,
              int levels, double margin) {
  const auto depths = obj.PredictDepths(params);
  const auto pairs = obj.PredictPairs(params);
  for (const DepthMap& d : depths) {
    const SecondOrderGradients g = ComputeSecondOrderGradients(d);
    for (int y = 1; y + 1 < g.height; ++y) {
      for (int x = 1; x + 1 < g.width; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * g.width + x;
        if (std::fabs(g.dxx[i]) < margin || std::fabs(g.dyy[i]) < margin ||
            std::fabs(g.dxy[i]) < margin) {
          return false;
        }
      }
    }
  }
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const TangentPose pose(pairs[p].tangent);
    const auto i1 = BuildPyramid(ToLuma(inst.frames[p].image), levels);
    const auto i2 = BuildPyramid(ToLuma(inst.frames[p + 1].image), levels);
    const auto d1 = BuildDepthPyramid(depths[p], levels);
    const auto d2 = BuildDepthPyramid(depths[p + 1], levels);
    for (int l = 0; l < levels; ++l) {
      const CameraIntrinsics ks = inst.k.AtLevel(l);
      for (int y = 0; y < ks.height; ++y) {
        for (int x = 0; x < ks.width; ++x) {
          const Vec2 u(x, y);
          for (int dir = 0; dir < 2; ++dir) {
            const Se3Transform& t = dir == 0 ? pose.forward() : pose.backward();
            const double z = dir == 0 ? d1[l].at(x, y) : d2[l].at(x, y);
            const WarpResult w = WarpPixel(ks, t, z, u);
            if (NearLattice(w.pixel.x(), margin) || NearLattice(w.pixel.y(), margin)) return false;
            if (!w.valid) continue;
            const IntensityImage& src = dir == 0 ? i2[l] : i1[l];
            const IntensityImage& ref = dir == 0 ? i1[l] : i2[l];
            const ScalarSample s = SampleChannel(src, 0, w.pixel);
            if (std::fabs(s.value - ref.at(0, x, y)) < margin) return false;
          }
        }
      }
    }
  }
  return true;
}

LossWeights TermWeights(const std::string& term) {
  if (term == "total") return LossWeights{};
  LossWeights w{0.0, 0.0, 0.0, 0.0};
  if (term == "supervised") w.alpha = 1.0;
  if (term == "photometric") w.beta = 1.0;
  if (term == "smoothness") w.gamma = 1.0;
  if (term == "mask_reg") w.theta = 1.0;
  return w;
}

// Direct fields start from random depths, poses and mask logits so every
// block carries a generic gradient.
void RandomizeDirect(ParamVector& params, const GradcheckOptions& o, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5bd1e995u);
  std::uniform_real_distribution<double> log_depth(std::log(1.5), std::log(3.0));
  std::uniform_real_distribution<double> rot(-0.05, 0.05);
  std::uniform_real_distribution<double> trans(-0.1, 0.1);
  std::uniform_real_distribution<double> logit(-1.5, 1.5);
  for (int f = 0; f < o.frames; ++f) {
    for (double& v : params.block(DirectDepthField::BlockName(f))) v = log_depth(rng);
  }
  for (int p = 0; p + 1 < o.frames; ++p) {
    Se3Tangent xi;
    xi.rot = Vec3(rot(rng), rot(rng), rot(rng));
    xi.trans = Vec3(trans(rng), trans(rng), trans(rng));
    DirectPoseField::SetTangent(params, p, xi);
    for (int l = 0; l < o.levels; ++l) {
      for (double& v : params.block(DirectPoseField::MaskBlock(p, l))) v = logit(rng);
    }
  }
}

}  // namespace

GradcheckSuiteResult RunGradcheckSuite(const GradcheckOptions& o) {
  if (o.width < 4 || o.height < 4 || o.levels < 1 || o.frames < 2) {
    throw Error(ErrorKind::kInvalidArgument, "gradcheck needs >= 4x4 images, >= 1 level, >= 2 frames");
  }
  GradcheckSuiteResult result;
  PredictorConfig pc;
  pc.depth_input_scale = 1.0 / 3.0;
  pc.pose_output_scale = 1.0;  // moves warps off the pixel lattice
  for (const std::string kind : {"direct", "toycnn"}) {
    const PredictorPair predictors = MakePredictors(kind, pc);
    RefineOptions ro;
    ro.levels = o.levels;
    for (const std::string term : {"supervised", "photometric", "smoothness", "mask_reg", "total"}) {
      bool found = false;
      for (int attempt = 0; attempt < o.max_redraws && !found; ++attempt) {
        const std::uint64_t seed = o.seed * 1000003u + static_cast<std::uint64_t>(attempt);
        const Instance inst = RandomInstance(o, seed);
        const SequenceObjective obj(inst.frames, inst.supervision, inst.k, predictors,
                                    TermWeights(term), ro);
        ParamVector params = obj.InitialParams(seed);
        if (kind == "direct") RandomizeDirect(params, o, seed);
        if (!KinkFree(obj, params, inst, o.levels, o.kink_margin)) continue;
        found = true;
        const bool plant = o.plant_bug;
        const LossFunction loss = [&obj, plant](const ParamVector& p, ParamVector* grad) {
          const double v = obj.Evaluate(p, grad).total;
          if (plant && grad != nullptr) grad->block(grad->num_blocks() - 1)[0] += 1e-3;
          return v;
        };
        FiniteDifferenceOptions fd = o.fd;
        fd.seed = seed;
        GradcheckEntry e{kind, term, seed, FiniteDifferenceCheck(loss, params, fd)};
        result.passed = result.passed && e.report.passed;
        result.entries.push_back(std::move(e));
      }
      if (!found) {
        throw Error(ErrorKind::kInvalidArgument,
                    "no kink-free instance for " + kind + "/" + term + " after " +
                        std::to_string(o.max_redraws) + " draws");
      }
    }
  }
  return result;
}

}  // namespace depthpose
