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


#include "depthpose/config.hpp"

#include <fstream>
#include <set>

#include "depthpose/error.hpp"

namespace depthpose {
using nlohmann::json;

namespace {

void CheckKeys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::kParse, where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw Error(ErrorKind::kParse, "unknown key '" + where + "." + key + "'");
  }
}

template <class T>
void Read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string ToString(IndicatorMode mode) {
  switch (mode) {
    case IndicatorMode::kUnmeasured: return "unmeasured";
    case IndicatorMode::kMeasured: return "measured";
    case IndicatorMode::kAll: return "all";
  }
  return "unknown";
}

IndicatorMode ParseIndicatorMode(const std::string& s) {
  if (s == "unmeasured") return IndicatorMode::kUnmeasured;
  if (s == "measured") return IndicatorMode::kMeasured;
  if (s == "all") return IndicatorMode::kAll;
  throw Error(ErrorKind::kParse, "unknown indicator mode '" + s + "'");
}

void RunConfig::Validate() const {
  if (intrinsics) intrinsics->Validate();
  noise.Validate();
  weights.Validate();
  adam.Validate();
  if (levels < 1 || levels > 8) throw Error(ErrorKind::kInvalidArgument, "levels must be in [1, 8]");
  if (predictor != "direct" && predictor != "toycnn") {
    throw Error(ErrorKind::kInvalidArgument, "predictor must be 'direct' or 'toycnn'");
  }
  if (!(predictor_config.depth_input_scale > 0.0) || !(predictor_config.output_depth_scale > 0.0) ||
      !(predictor_config.positive_eps > 0.0) || !(predictor_config.pose_output_scale > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "predictor scales must be > 0");
  }
}

json ToJson(const RunConfig& c) {
  json j;
  if (c.intrinsics) {
    const auto& k = *c.intrinsics;
    j["intrinsics"] = {{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx},
                       {"cy", k.cy}, {"width", k.width}, {"height", k.height}};
  }
  j["noise"] = {{"f", c.noise.f}, {"sample_rate", c.noise.sample_rate}, {"seed", c.noise.seed}};
  j["loss_weights"] = {{"alpha", c.weights.alpha}, {"beta", c.weights.beta},
                       {"gamma", c.weights.gamma}, {"theta", c.weights.theta}};
  j["optimizer"] = {{"lr", c.adam.lr}, {"beta1", c.adam.beta1}, {"beta2", c.adam.beta2},
                    {"weight_decay", c.adam.weight_decay}, {"epsilon", c.adam.epsilon}};
  j["levels"] = c.levels;
  j["predictor"] = c.predictor;
  j["depth_scale"] = c.predictor_config.depth_input_scale;
  j["output_depth_scale"] = c.predictor_config.output_depth_scale;
  j["pose_output_scale"] = c.predictor_config.pose_output_scale;
  j["indicator"] = ToString(c.indicator);
  j["use_mask"] = c.use_mask;
  j["seed"] = c.seed;
  return j;
}

RunConfig ConfigFromJson(const json& j, RunConfig c) {
  try {
    CheckKeys(j, {"intrinsics", "noise", "loss_weights", "optimizer", "levels", "predictor",
                  "depth_scale", "output_depth_scale", "pose_output_scale", "indicator",
                  "use_mask", "seed"},
              "config");
    if (j.contains("intrinsics")) {
      const json& k = j.at("intrinsics");
      CheckKeys(k, {"fx", "fy", "cx", "cy", "width", "height"}, "intrinsics");
      c.intrinsics = CameraIntrinsics{k.at("fx").get<double>(), k.at("fy").get<double>(),
                                      k.at("cx").get<double>(), k.at("cy").get<double>(),
                                      k.at("width").get<int>(), k.at("height").get<int>()};
    }
    if (j.contains("noise")) {
      const json& n = j.at("noise");
      CheckKeys(n, {"f", "sample_rate", "seed"}, "noise");
      Read(n, "f", c.noise.f);
      Read(n, "sample_rate", c.noise.sample_rate);
      Read(n, "seed", c.noise.seed);
    }
    if (j.contains("loss_weights")) {
      const json& w = j.at("loss_weights");
      CheckKeys(w, {"alpha", "beta", "gamma", "theta"}, "loss_weights");
      Read(w, "alpha", c.weights.alpha);
      Read(w, "beta", c.weights.beta);
      Read(w, "gamma", c.weights.gamma);
      Read(w, "theta", c.weights.theta);
    }
    if (j.contains("optimizer")) {
      const json& o = j.at("optimizer");
      CheckKeys(o, {"lr", "beta1", "beta2", "weight_decay", "epsilon"}, "optimizer");
      Read(o, "lr", c.adam.lr);
      Read(o, "beta1", c.adam.beta1);
      Read(o, "beta2", c.adam.beta2);
      Read(o, "weight_decay", c.adam.weight_decay);
      Read(o, "epsilon", c.adam.epsilon);
    }
    Read(j, "levels", c.levels);
    Read(j, "predictor", c.predictor);
    Read(j, "depth_scale", c.predictor_config.depth_input_scale);
    Read(j, "output_depth_scale", c.predictor_config.output_depth_scale);
    Read(j, "pose_output_scale", c.predictor_config.pose_output_scale);
    if (j.contains("indicator")) c.indicator = ParseIndicatorMode(j.at("indicator").get<std::string>());
    Read(j, "use_mask", c.use_mask);
    Read(j, "seed", c.seed);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("config: ") + e.what());
  }
  c.Validate();
  return c;
}

RunConfig LoadConfig(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kLoad, "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, path.string() + ": " + e.what());
  }
  return ConfigFromJson(j, std::move(base));
}

}  // namespace depthpose
