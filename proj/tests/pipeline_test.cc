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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "eventcorr/pipeline.h"

namespace eventcorr {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("eventcorr-pipeline-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void small(PipelineParams& p) {
  p.nodes = 4;
  p.sources_per_node = 10;
  p.days = 6;
  p.planted = 20;
  p.seed = 3;
  p.miner.support_threshold = 3;
}

constexpr Stage kAll[] = {Stage::kGenerate, Stage::kParse,   Stage::kFilter, Stage::kMine,
                          Stage::kBuildFcg, Stage::kPredict, Stage::kEvaluate};

void run_all(Pipeline& p) {
  std::ostringstream log;
  for (Stage s : kAll) p.run(s, log);
}

TEST(Pipeline, EndToEndOnGeneratedCorpus) {
  TempDir dir;
  Pipeline p(dir.path());
  small(p.params());
  run_all(p);
  std::uint64_t previous = 0;
  for (Stage s : kAll) {
    EXPECT_GT(p.stamp(s), previous) << to_string(s);
    previous = p.stamp(s);
    for (const std::string& name : stage_artifacts(s)) {
      EXPECT_TRUE(fs::exists(p.path(name))) << name;
    }
  }
  std::ifstream report(p.path("report.txt"));
  const EvalReport r = read_report(report);
  EXPECT_GT(r.evaluation_events, 0u);
  EXPECT_GT(r.true_positives + r.false_positives + r.pending, 0u);

  // Parameters persist in the manifest.
  Pipeline reopened(dir.path());
  EXPECT_EQ(to_snapshot(reopened.params()), to_snapshot(p.params()));
  EXPECT_EQ(reopened.stamp(Stage::kEvaluate), p.stamp(Stage::kEvaluate));
}

TEST(Pipeline, MineBeforeFilterIsMissingArtifact) {
  TempDir dir;
  Pipeline p(dir.path());
  small(p.params());
  std::ostringstream log;
  p.run(Stage::kGenerate, log);
  p.run(Stage::kParse, log);
  EXPECT_THROW(p.run(Stage::kMine, log), MissingArtifactError);
  EXPECT_EQ(p.stamp(Stage::kMine), 0u);
}

TEST(Pipeline, ChangedWindowMakesGraphsStale) {
  TempDir dir;
  Pipeline p(dir.path());
  small(p.params());
  std::ostringstream log;
  for (Stage s : {Stage::kGenerate, Stage::kParse, Stage::kFilter, Stage::kMine,
                  Stage::kBuildFcg}) {
    p.run(s, log);
  }
  p.params().miner.window = 7200;
  p.run(Stage::kMine, log);
  EXPECT_THROW(p.run(Stage::kPredict, log), StaleArtifactError);
  p.run(Stage::kBuildFcg, log);
  EXPECT_NO_THROW(p.run(Stage::kPredict, log));
}

TEST(Pipeline, ChangedThresholdLeavesUpstreamValid) {
  TempDir dir;
  Pipeline p(dir.path());
  small(p.params());
  run_all(p);
  p.params().predictor.probability_threshold = 0.5;
  std::ostringstream log;
  EXPECT_NO_THROW(p.run(Stage::kPredict, log));
  p.params().predictor.probability_threshold = 0.6;
  EXPECT_THROW(p.run(Stage::kEvaluate, log), StaleArtifactError);
}

TEST(Pipeline, RerunIsByteIdempotent) {
  TempDir a;
  TempDir b;
  Pipeline first(a.path());
  small(first.params());
  run_all(first);
  std::map<std::string, std::string> before;
  for (Stage s : kAll) {
    for (const std::string& name : stage_artifacts(s)) before[name] = slurp(first.path(name));
  }
  run_all(first);
  Pipeline second(b.path());
  small(second.params());
  run_all(second);
  for (const auto& [name, bytes] : before) {
    EXPECT_EQ(slurp(first.path(name)), bytes) << name;
    EXPECT_EQ(slurp(second.path(name)), bytes) << name;
  }
}

TEST(Pipeline, DefaultsMatchBaseline) {
  const Snapshot s = to_snapshot(PipelineParams{});
  EXPECT_EQ(s.at("tw"), "3600");
  EXPECT_EQ(s.at("sth"), "5");
  EXPECT_EQ(s.at("cth"), "0.25");
  EXPECT_EQ(s.at("scth"), "10");
  EXPECT_EQ(s.at("ccth"), "0.8");
  EXPECT_EQ(s.at("cpth"), "0.8");
  EXPECT_EQ(s.at("pth"), "0.25");
  EXPECT_EQ(s.at("tp"), "3600");
  EXPECT_EQ(s.at("repeat_window"), "10");
  EXPECT_EQ(s.at("cycle_count"), "20");
  EXPECT_EQ(s.at("cycle_fraction"), "0.25");
  EXPECT_EQ(s.at("max_arity"), "3");
  EXPECT_EQ(s.at("algorithm"), "apriori");
}

TEST(Pipeline, SnapshotHeaderRoundTrip) {
  PipelineParams p;
  p.miner.window = 1800;
  p.algorithm = Algorithm::kAprioriS;
  const Snapshot s = to_snapshot(p);
  EXPECT_EQ(parse_snapshot_header(snapshot_header(s)), s);
  PipelineParams q;
  apply_snapshot(q, s);
  EXPECT_EQ(to_snapshot(q), s);
  EXPECT_EQ(q.predictor.mark_lifetime, 1800);
  EXPECT_FALSE(parse_snapshot_header("tw=1").has_value());
  EXPECT_THROW(apply_snapshot(q, {{"tw", "soon"}}), std::invalid_argument);
}

TEST(Pipeline, StageKeysAreCumulative) {
  for (std::size_t i = 1; i < std::size(kAll); ++i) {
    const auto up = stage_keys(kAll[i - 1]);
    const auto down = stage_keys(kAll[i]);
    if (kAll[i - 1] == Stage::kGenerate) continue;
    for (const std::string& k : up) {
      EXPECT_NE(std::find(down.begin(), down.end(), k), down.end()) << k;
    }
  }
  EXPECT_EQ(parse_stage("build-fcg"), Stage::kBuildFcg);
  EXPECT_FALSE(parse_stage("deploy").has_value());
}

}  // namespace
}  // namespace eventcorr
