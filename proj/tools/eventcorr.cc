// Copyright 2026 The eventcorr Authors.
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

// Command-line driver for the staged pipeline.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eventcorr/errors.h"
#include "eventcorr/pipeline.h"

namespace {

constexpr int kUsageError = 2;
constexpr int kDataError = 3;
constexpr int kInternalError = 4;

struct Flags {
  std::string out_dir = "eventcorr-out";
  eventcorr::Snapshot overrides;
  unsigned workers = 1;
};

// Registers a flag that, when given, overrides the manifest parameter `key`.
void add_param(CLI::App& app, Flags& flags, const std::string& name, const std::string& key,
               const std::string& help) {
  app.add_option_function<std::string>(
      name, [&flags, key](const std::string& v) { flags.overrides[key] = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  using eventcorr::Stage;
  CLI::App app{"eventcorr: log event correlation mining and failure prediction"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags flags;
  app.add_option("--out-dir", flags.out_dir, "Artifact directory (holds manifest.json)");
  add_param(app, flags, "--config", "config", "Log format configuration (XML or flat)");
  add_param(app, flags, "--input", "input", "Raw log file");
  add_param(app, flags, "--year-hint", "year_hint", "Year for syslog timestamps (0: current)");
  add_param(app, flags, "--repeat-window", "repeat_window", "Repeated-event window, seconds [10]");
  add_param(app, flags, "--cycle-count", "cycle_count", "Fixed-cycle count threshold [20]");
  add_param(app, flags, "--cycle-fraction", "cycle_fraction", "Fixed-cycle fraction threshold [0.25]");
  add_param(app, flags, "--tw", "tw", "Time window Tw, seconds [3600]");
  add_param(app, flags, "--sth", "sth", "Support threshold Sth [5]");
  add_param(app, flags, "--cth", "cth", "Confidence threshold Cth [0.25]");
  add_param(app, flags, "--scth", "scth", "Cluster support threshold [10]");
  add_param(app, flags, "--ccth", "ccth", "Cluster confidence threshold [0.8]");
  add_param(app, flags, "--cpth", "cpth", "Cluster posterior threshold [0.8]");
  add_param(app, flags, "--max-arity", "max_arity", "Longest TSL mined [3]");
  add_param(app, flags, "--algorithm", "algorithm", "apriori | apriori-s [apriori]");
  add_param(app, flags, "--eval-fraction", "eval_fraction",
            "Trailing share of the time span held out for prediction [0.25]");
  add_param(app, flags, "--pth", "pth", "Prediction probability threshold Pth [0.25]");
  add_param(app, flags, "--tp", "tp", "Prediction valid duration Tp, seconds [3600]");
  add_param(app, flags, "--strict-order", "strict_order", "Require chain order for recessive vertices (0|1) [0]");
  add_param(app, flags, "--seed", "seed", "Generator seed [1]");
  add_param(app, flags, "--nodes", "nodes", "Generated node count [40]");
  add_param(app, flags, "--sources-per-node", "sources_per_node", "Generated sources per node [50]");
  add_param(app, flags, "--days", "days", "Generated corpus length, days [60]");
  add_param(app, flags, "--planted", "planted", "Generated planted rules [400]");
  app.add_option("--workers", flags.workers, "Mining threads (output does not depend on it)")
      ->check(CLI::Range(1u, 256u));

  std::vector<Stage> stages;
  const std::vector<std::pair<Stage, std::string>> commands = {
      {Stage::kGenerate, "Write a seeded synthetic corpus, config and ground truth"},
      {Stage::kParse, "Parse raw logs into formatted events"},
      {Stage::kFilter, "Remove repeated and periodic events"},
      {Stage::kMine, "Mine event rules from the history period"},
      {Stage::kBuildFcg, "Build failure correlation graphs from the rules"},
      {Stage::kPredict, "Replay the evaluation period through the predictor"},
      {Stage::kEvaluate, "Score the prediction log"},
  };
  for (const auto& [stage, help] : commands) {
    app.add_subcommand(std::string(eventcorr::to_string(stage)), help)
        ->callback([&stages, stage = stage] { stages.push_back(stage); });
  }
  app.add_subcommand("run", "parse through evaluate; generates a corpus when no input is set")
      ->callback([&stages] {
        stages = {Stage::kParse,    Stage::kFilter,  Stage::kMine,
                  Stage::kBuildFcg, Stage::kPredict, Stage::kEvaluate};
      });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    eventcorr::Pipeline pipeline(flags.out_dir);
    try {
      eventcorr::apply_snapshot(pipeline.params(), flags.overrides);
    } catch (const std::invalid_argument& e) {
      std::cerr << "eventcorr: " << e.what() << '\n';
      return kUsageError;
    }
    pipeline.params().miner.workers = flags.workers;
    if (stages.size() > 1 && pipeline.params().input.empty()) {
      stages.insert(stages.begin(), Stage::kGenerate);
    }
    for (Stage stage : stages) pipeline.run(stage, std::cerr);
  } catch (const eventcorr::PipelineOrderError& e) {
    std::cerr << "eventcorr: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "eventcorr: " << e.what() << '\n';
    return kUsageError;
  } catch (const eventcorr::Error& e) {
    std::cerr << "eventcorr: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "eventcorr: internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return 0;
}
