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


// depthpose command-line entry point.
//
//   depthpose simulate  --scene two-plane --noise-f 0.5 --sample-rate 0.07 --seed 1 --out sim/
//   depthpose refine    --data sim/ --predictor direct --iters 300 --out run/
//   depthpose evaluate  --pred run/ --gt sim/ --out run/metrics.json
//   depthpose gradcheck --size 16x16 --levels 2
//
// Log verbosity comes from DEPTHPOSE_LOG (trace, debug, info, warn, error, off).

#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "depthpose/error.hpp"

namespace {

using depthpose::Error;
using depthpose::ErrorKind;
namespace cli = depthpose::cli;

std::map<std::string, std::string> RecordArgs(const CLI::App& sub) {
  std::map<std::string, std::string> out;
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    std::string joined;
    for (const std::string& r : opt->results()) {
      if (!joined.empty()) joined += ',';
      joined += r;
    }
    out[opt->get_name()] = joined;
  }
  return out;
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDiverged:
      return cli::kExitFailure;
    default:
      return cli::kExitInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("depthpose");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* level = std::getenv("DEPTHPOSE_LOG")) spdlog::cfg::helpers::load_levels(level);

  CLI::App app{"Joint depth refinement and pose estimation"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);

  cli::SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "render a synthetic sequence with noisy sparse depth");
  simulate->add_option("--scene", sim.scene, "preset name (two-plane, fronto) or scene JSON file");
  simulate->add_option("--frames", sim.frames, "frames for a preset scene")->check(CLI::PositiveNumber);
  std::string sim_size = "64x64";
  simulate->add_option("--size", sim_size, "HxW for a preset scene");
  simulate->add_option("--noise-f", sim.noise_f, "noise std as a fraction of depth");
  simulate->add_option("--sample-rate", sim.sample_rate, "fraction of pixels kept");
  simulate->add_option("--seed", sim.seed, "noise seed");
  simulate->add_option("--out", sim.out, "output directory")->required();

  cli::RefineArgs ref;
  auto* refine = app.add_subcommand("refine", "jointly refine depth and poses of a sequence");
  refine->add_option("--data", ref.data, "TUM-layout sequence directory")->required()->check(CLI::ExistingDirectory);
  refine->add_option("--predictor", ref.predictor, "direct or toycnn")->check(CLI::IsMember({"direct", "toycnn"}));
  refine->add_option("--iters", ref.iters, "optimizer iterations");
  refine->add_option("--weights", ref.weights, "alpha,beta,gamma,theta (default 1.0,0.1,0.1,0.2)");
  refine->add_option("--lr", ref.lr, "Adam learning rate");
  refine->add_option("--levels", ref.levels, "pyramid levels");
  refine->add_option("--seed", ref.seed, "initialization seed");
  refine->add_option("--out", ref.out, "output directory")->required();

  cli::EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "depth, trajectory and photometric metrics");
  evaluate->add_option("--pred", ev.pred, "refine output directory")->required()->check(CLI::ExistingDirectory);
  evaluate->add_option("--gt", ev.gt, "ground-truth sequence directory")->required()->check(CLI::ExistingDirectory);
  evaluate->add_option("--out", ev.out, "metrics JSON path")->required();
  evaluate->add_option("--levels", ev.levels, "pyramid levels of the photometric metric");

  cli::GradcheckArgs gc;
  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference check of every loss and predictor");
  std::string gc_size = "16x16";
  gradcheck->add_option("--size", gc_size, "HxW");
  gradcheck->add_option("--levels", gc.levels, "pyramid levels")->check(CLI::PositiveNumber);
  gradcheck->add_option("--seed", gc.seed, "instance seed");
  gradcheck->add_option("--out", gc.out, "directory for the JSON report and manifest");
  gradcheck->add_flag("--plant-bug", gc.plant_bug, "corrupt one analytic gradient (debug)")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitInput;
  }

  try {
    depthpose::RunConfig config;
    if (!config_path.empty()) config = depthpose::LoadConfig(config_path);
    if (*simulate) {
      std::tie(sim.height, sim.width) = cli::ParseSize(sim_size);
      return cli::RunSimulate(sim, config, RecordArgs(*simulate));
    }
    if (*refine) return cli::RunRefine(ref, config, RecordArgs(*refine));
    if (*evaluate) return cli::RunEvaluate(ev, config, RecordArgs(*evaluate));
    if (*gradcheck) {
      std::tie(gc.height, gc.width) = cli::ParseSize(gc_size);
      return cli::RunGradcheck(gc, RecordArgs(*gradcheck));
    }
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return cli::kExitFailure;
  }
  return cli::kExitInput;
}
