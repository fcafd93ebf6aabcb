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

#ifndef EVENTCORR_PIPELINE_H_
#define EVENTCORR_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eventcorr/errors.h"
#include "eventcorr/filter.h"
#include "eventcorr/harness.h"
#include "eventcorr/miner.h"
#include "eventcorr/predictor.h"

namespace eventcorr {

enum class Stage : std::uint8_t {
  kGenerate,
  kParse,
  kFilter,
  kMine,
  kBuildFcg,
  kPredict,
  kEvaluate
};

std::string_view to_string(Stage stage);
std::optional<Stage> parse_stage(std::string_view text);

// An upstream artifact does not exist yet.
class MissingArtifactError : public PipelineOrderError {
 public:
  using PipelineOrderError::PipelineOrderError;
};

// An upstream artifact was produced under different parameters.
class StaleArtifactError : public PipelineOrderError {
 public:
  using PipelineOrderError::PipelineOrderError;
};

struct PipelineParams {
  std::string config;  // paths; empty until given or generated
  std::string input;
  int year_hint = 0;   // 0: current year
  FilterParams filter;
  MinerParams miner;
  PredictorParams predictor;  // mark lifetime follows miner.window
  Algorithm algorithm = Algorithm::kApriori;
  double eval_fraction = 0.25;
  // GENERATE
  std::uint64_t seed = 1;
  std::size_t nodes = 40;
  std::size_t sources_per_node = 50;
  std::size_t days = 60;
  std::size_t planted = 400;
};

using Snapshot = std::map<std::string, std::string>;

// Every tunable as canonical text, keyed by flag name.
Snapshot to_snapshot(const PipelineParams& params);
// Overwrites the fields named in `snapshot`. Throws std::invalid_argument.
void apply_snapshot(PipelineParams& params, const Snapshot& snapshot);

// Artifact header: "# params key=value key=value ...".
std::string snapshot_header(const Snapshot& snapshot);
std::optional<Snapshot> parse_snapshot_header(std::string_view line);

// Parameter keys an artifact of `stage` depends on, upstream keys included.
std::vector<std::string> stage_keys(Stage stage);
// Artifact file names produced by `stage`, relative to the output directory.
std::vector<std::string> stage_artifacts(Stage stage);

// A directory of artifacts plus manifest.json. Parameters persist in the
// manifest between runs; callers override them before run().
class Pipeline {
 public:
  explicit Pipeline(std::filesystem::path out_dir);

  PipelineParams& params() { return params_; }
  const PipelineParams& params() const { return params_; }
  const std::filesystem::path& out_dir() const { return out_dir_; }
  std::filesystem::path path(std::string_view artifact) const { return out_dir_ / artifact; }

  // Runs one stage and stamps the manifest. Throws MissingArtifactError or
  // StaleArtifactError when upstream artifacts are absent or out of date,
  // DataError or ConfigError on bad inputs. Progress and timings go to `log`.
  void run(Stage stage, std::ostream& log);

  // Sequence number of the last completed run of `stage`, 0 if never run.
  std::uint64_t stamp(Stage stage) const;

 private:
  void load_manifest();
  void save_manifest() const;
  // Current parameters restricted to `stage`'s keys, digests resolved.
  Snapshot current(Stage stage) const;
  void require(Stage producer, std::string_view artifact) const;

  void generate(std::ostream& log);
  void parse(std::ostream& log);
  void filter(std::ostream& log);
  void mine(std::ostream& log);
  void build_fcg(std::ostream& log);
  void predict(std::ostream& log);
  void evaluate(std::ostream& log);

  std::filesystem::path out_dir_;
  PipelineParams params_;
  std::map<Stage, std::uint64_t> stamps_;
  std::uint64_t sequence_ = 0;
};

// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

}  // namespace eventcorr

#endif  // EVENTCORR_PIPELINE_H_
