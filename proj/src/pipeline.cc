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

#include "eventcorr/pipeline.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "eventcorr/config.h"
#include "eventcorr/fcg.h"
#include "eventcorr/id_registry.h"
#include "eventcorr/parser.h"
#include "text_util.h"

namespace eventcorr {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, 7> kStageNames = {
    "generate", "parse", "filter", "mine", "build-fcg", "predict", "evaluate"};

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

template <typename Int>
Int parse_count(const std::string& key, const std::string& value) {
  auto v = detail::parse_int<Int>(value);
  if (!v) throw std::invalid_argument("bad value for " + key + ": " + value);
  return *v;
}

double parse_ratio(const std::string& key, const std::string& value) {
  auto v = detail::parse_double(value);
  if (!v) throw std::invalid_argument("bad value for " + key + ": " + value);
  return *v;
}

// Artifact each stage is judged by when a later stage consumes it.
constexpr std::array<std::string_view, 7> kPrimaryArtifact = {
    "raw.log", "events.tsv", "filtered.tsv", "rules.tsv",
    "fcgs.jsonl", "predictions.tsv", "report.txt"};

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifactError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void close(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw DataError("failed writing " + path.string());
}

std::vector<Event> read_events_file(const fs::path& path) {
  std::ifstream in = open_in(path);
  return read_events(in);
}

}  // namespace

std::string_view to_string(Stage stage) { return kStageNames[static_cast<std::size_t>(stage)]; }

std::optional<Stage> parse_stage(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return c == '_' ? '-' : std::tolower(c); });
  for (std::size_t i = 0; i < kStageNames.size(); ++i) {
    if (kStageNames[i] == lower) return static_cast<Stage>(i);
  }
  return std::nullopt;
}

Snapshot to_snapshot(const PipelineParams& p) {
  return {
      {"config", p.config},
      {"input", p.input},
      {"year_hint", std::to_string(p.year_hint)},
      {"repeat_window", std::to_string(p.filter.repeat_window)},
      {"cycle_count", std::to_string(p.filter.cycles.count_threshold)},
      {"cycle_fraction", format_double(p.filter.cycles.fraction_threshold)},
      {"cycle_tolerance", std::to_string(p.filter.cycles.tolerance)},
      {"tw", std::to_string(p.miner.window)},
      {"sth", std::to_string(p.miner.support_threshold)},
      {"cth", format_double(p.miner.confidence_threshold)},
      {"scth", std::to_string(p.miner.cluster_support)},
      {"ccth", format_double(p.miner.cluster_confidence)},
      {"cpth", format_double(p.miner.cluster_posterior)},
      {"max_arity", std::to_string(p.miner.max_arity)},
      {"algorithm", std::string(to_string(p.algorithm))},
      {"eval_fraction", format_double(p.eval_fraction)},
      {"pth", format_double(p.predictor.probability_threshold)},
      {"tp", std::to_string(p.predictor.valid_duration)},
      {"strict_order", p.predictor.strict_chain_order ? "1" : "0"},
      {"seed", std::to_string(p.seed)},
      {"nodes", std::to_string(p.nodes)},
      {"sources_per_node", std::to_string(p.sources_per_node)},
      {"days", std::to_string(p.days)},
      {"planted", std::to_string(p.planted)},
  };
}

void apply_snapshot(PipelineParams& p, const Snapshot& snapshot) {
  for (const auto& [key, value] : snapshot) {
    if (key == "config") p.config = value;
    else if (key == "input") p.input = value;
    else if (key == "year_hint") p.year_hint = parse_count<int>(key, value);
    else if (key == "repeat_window") p.filter.repeat_window = parse_count<Timestamp>(key, value);
    else if (key == "cycle_count") p.filter.cycles.count_threshold = parse_count<std::size_t>(key, value);
    else if (key == "cycle_fraction") p.filter.cycles.fraction_threshold = parse_ratio(key, value);
    else if (key == "cycle_tolerance") p.filter.cycles.tolerance = parse_count<Timestamp>(key, value);
    else if (key == "tw") p.miner.window = parse_count<Timestamp>(key, value);
    else if (key == "sth") p.miner.support_threshold = parse_count<std::size_t>(key, value);
    else if (key == "cth") p.miner.confidence_threshold = parse_ratio(key, value);
    else if (key == "scth") p.miner.cluster_support = parse_count<std::size_t>(key, value);
    else if (key == "ccth") p.miner.cluster_confidence = parse_ratio(key, value);
    else if (key == "cpth") p.miner.cluster_posterior = parse_ratio(key, value);
    else if (key == "max_arity") p.miner.max_arity = parse_count<std::size_t>(key, value);
    else if (key == "algorithm") {
      auto a = parse_algorithm(value);
      if (!a) throw std::invalid_argument("unknown algorithm " + value);
      p.algorithm = *a;
    } else if (key == "eval_fraction") p.eval_fraction = parse_ratio(key, value);
    else if (key == "pth") p.predictor.probability_threshold = parse_ratio(key, value);
    else if (key == "tp") p.predictor.valid_duration = parse_count<Timestamp>(key, value);
    else if (key == "strict_order") p.predictor.strict_chain_order = value == "1";
    else if (key == "seed") p.seed = parse_count<std::uint64_t>(key, value);
    else if (key == "nodes") p.nodes = parse_count<std::size_t>(key, value);
    else if (key == "sources_per_node") p.sources_per_node = parse_count<std::size_t>(key, value);
    else if (key == "days") p.days = parse_count<std::size_t>(key, value);
    else if (key == "planted") p.planted = parse_count<std::size_t>(key, value);
    else throw std::invalid_argument("unknown parameter " + key);
  }
  p.predictor.mark_lifetime = p.miner.window;
}

std::string snapshot_header(const Snapshot& snapshot) {
  std::string out = "# params";
  for (const auto& [key, value] : snapshot) out += " " + key + "=" + value;
  return out;
}

std::optional<Snapshot> parse_snapshot_header(std::string_view line) {
  constexpr std::string_view kPrefix = "# params";
  if (line.substr(0, kPrefix.size()) != kPrefix) return std::nullopt;
  Snapshot out;
  for (std::string_view token : detail::split(line.substr(kPrefix.size()), ' ')) {
    if (token.empty()) continue;
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) return std::nullopt;
    out.emplace(std::string(token.substr(0, eq)), std::string(token.substr(eq + 1)));
  }
  return out;
}

std::vector<std::string> stage_keys(Stage stage) {
  std::vector<std::string> keys;
  switch (stage) {
    case Stage::kGenerate:
      return {"days", "nodes", "planted", "seed", "sources_per_node"};
    case Stage::kEvaluate:
    case Stage::kPredict:
      keys = {"pth", "strict_order", "tp"};
      [[fallthrough]];
    case Stage::kBuildFcg:
    case Stage::kMine:
      for (const char* k : {"algorithm", "ccth", "cpth", "cth", "eval_fraction", "max_arity",
                            "scth", "sth", "tw"}) {
        keys.emplace_back(k);
      }
      [[fallthrough]];
    case Stage::kFilter:
      for (const char* k : {"cycle_count", "cycle_fraction", "cycle_tolerance", "repeat_window"}) {
        keys.emplace_back(k);
      }
      [[fallthrough]];
    case Stage::kParse:
      for (const char* k : {"config_digest", "input_digest", "year_hint"}) keys.emplace_back(k);
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::vector<std::string> stage_artifacts(Stage stage) {
  switch (stage) {
    case Stage::kGenerate: return {"raw.log", "synthetic.conf", "ground_truth.json"};
    case Stage::kParse:
      return {"events.tsv", "unparsed.txt", "registry/event_ids.tsv", "registry/log_ids.tsv",
              "registry/node_ids.tsv"};
    case Stage::kFilter: return {"filtered.tsv", "filter_report.txt", "cycles.tsv"};
    case Stage::kMine: return {"rules.tsv", "clusters.tsv"};
    case Stage::kBuildFcg:
      return {"fcgs.jsonl", "fcg_index.tsv", "skipped_rules.tsv", "recovered.tsv"};
    case Stage::kPredict: return {"predictions.tsv"};
    case Stage::kEvaluate: return {"report.txt"};
  }
  return {};
}

std::string file_digest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifactError("input " + path.string() + " does not exist");
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

Pipeline::Pipeline(fs::path out_dir) : out_dir_(std::move(out_dir)) {
  params_.predictor.mark_lifetime = params_.miner.window;
  load_manifest();
}

std::uint64_t Pipeline::stamp(Stage stage) const {
  auto it = stamps_.find(stage);
  return it == stamps_.end() ? 0 : it->second;
}

void Pipeline::load_manifest() {
  const fs::path file = out_dir_ / "manifest.json";
  if (!fs::exists(file)) return;
  std::ifstream in(file);
  nlohmann::json doc;
  try {
    in >> doc;
    apply_snapshot(params_, doc.at("params").get<Snapshot>());
    sequence_ = doc.at("sequence").get<std::uint64_t>();
    for (const auto& [name, seq] : doc.at("stages").items()) {
      auto stage = parse_stage(name);
      if (!stage) throw DataError("manifest names unknown stage " + name);
      stamps_[*stage] = seq.get<std::uint64_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed manifest " + file.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError("malformed manifest " + file.string() + ": " + e.what());
  }
}

void Pipeline::save_manifest() const {
  nlohmann::json doc;
  doc["params"] = to_snapshot(params_);
  doc["sequence"] = sequence_;
  nlohmann::json stages = nlohmann::json::object();
  nlohmann::json artifacts = nlohmann::json::object();
  for (const auto& [stage, seq] : stamps_) {
    stages[std::string(to_string(stage))] = seq;
    artifacts[std::string(to_string(stage))] = stage_artifacts(stage);
  }
  doc["stages"] = std::move(stages);
  doc["artifacts"] = std::move(artifacts);
  const fs::path file = out_dir_ / "manifest.json";
  std::ofstream out = open_out(file);
  out << doc.dump(2) << '\n';
  close(out, file);
}

Snapshot Pipeline::current(Stage stage) const {
  const Snapshot all = to_snapshot(params_);
  Snapshot out;
  for (const std::string& key : stage_keys(stage)) {
    if (key == "config_digest") {
      if (params_.config.empty()) throw MissingArtifactError("no --config given");
      out[key] = file_digest(params_.config);
    } else if (key == "input_digest") {
      if (params_.input.empty()) throw MissingArtifactError("no --input given");
      out[key] = file_digest(params_.input);
    } else {
      out[key] = all.at(key);
    }
  }
  return out;
}

void Pipeline::require(Stage producer, std::string_view artifact) const {
  const fs::path file = path(artifact);
  const std::string rerun = "run `eventcorr " + std::string(to_string(producer)) + "`";
  if (!fs::exists(file)) {
    throw MissingArtifactError(std::string(artifact) + " is missing; " + rerun + " first");
  }
  std::ifstream in(file);
  std::string first;
  std::getline(in, first);
  auto recorded = parse_snapshot_header(first);
  if (!recorded) {
    throw StaleArtifactError(std::string(artifact) + " has no parameter header; " + rerun);
  }
  std::string diff;
  for (const auto& [key, value] : current(producer)) {
    auto it = recorded->find(key);
    const std::string was = it == recorded->end() ? "<unset>" : it->second;
    if (was != value) diff += " " + key + " (artifact " + was + ", now " + value + ")";
  }
  if (!diff.empty()) {
    throw StaleArtifactError(std::string(artifact) + " is stale:" + diff + "; " + rerun +
                             " again");
  }
}

void Pipeline::run(Stage stage, std::ostream& log) {
  validate(params_.miner);
  validate(params_.predictor);
  fs::create_directories(out_dir_);
  switch (stage) {
    case Stage::kGenerate: generate(log); break;
    case Stage::kParse: parse(log); break;
    case Stage::kFilter: filter(log); break;
    case Stage::kMine: mine(log); break;
    case Stage::kBuildFcg: build_fcg(log); break;
    case Stage::kPredict: predict(log); break;
    case Stage::kEvaluate: evaluate(log); break;
  }
  stamps_[stage] = ++sequence_;
  save_manifest();
}

void Pipeline::generate(std::ostream& log) {
  const SyntheticSpec spec =
      benchmark_spec(params_.seed, params_.nodes, params_.sources_per_node, params_.days,
                     params_.planted);
  const GeneratedCorpus corpus = eventcorr::generate(spec);
  {
    const fs::path file = path("raw.log");
    std::ofstream out = open_out(file);
    write_syslog(out, spec, corpus);
    close(out, file);
  }
  {
    const fs::path file = path("synthetic.conf");
    std::ofstream out = open_out(file);
    out << to_flat_text(synthetic_config(spec));
    close(out, file);
  }
  {
    const fs::path file = path("ground_truth.json");
    std::ofstream out = open_out(file);
    write_ground_truth(out, spec, corpus);
    close(out, file);
  }
  params_.input = fs::absolute(path("raw.log")).lexically_normal().string();
  params_.config = fs::absolute(path("synthetic.conf")).lexically_normal().string();
  log << "generate: " << corpus.events.size() << " events from " << spec.templates.size()
      << " sources, " << spec.planted.size() << " planted rules\n";
}

void Pipeline::parse(std::ostream& log) {
  const Snapshot snap = current(Stage::kParse);
  const Config config = load_config_file(params_.config);
  for (const std::string& section : config.ignored_sections) {
    log << "parse: config section '" << section << "' ignored\n";
  }
  std::ifstream in(params_.input);
  if (!in) throw MissingArtifactError("cannot open input " + params_.input);
  IdRegistry registry;
  const int year = params_.year_hint != 0 ? params_.year_hint : current_year();
  ParseStreamResult result = parse_stream(in, config, registry, year);
  if (!result.time_ordered) {
    std::stable_sort(result.events.begin(), result.events.end(),
                     [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
    log << "parse: input was not time ordered; events sorted by timestamp\n";
  }
  {
    const fs::path file = path("events.tsv");
    std::ofstream out = open_out(file);
    out << snapshot_header(snap) << '\n';
    write_events(out, result.events);
    close(out, file);
  }
  {
    const fs::path file = path("unparsed.txt");
    std::ofstream out = open_out(file);
    out << snapshot_header(snap) << '\n';
    for (const Unparsed& u : result.unparsed) {
      out << u.reason << '\t' << detail::sanitize_field(u.line) << '\n';
    }
    close(out, file);
  }
  fs::create_directories(path("registry"));
  registry.save(path("registry"));
  log << "parse: " << result.events.size() << " events, " << result.unparsed.size()
      << " unparsed lines, " << registry.log_count() << " log ids\n";
}

void Pipeline::filter(std::ostream& log) {
  require(Stage::kParse, "events.tsv");
  const Snapshot snap = current(Stage::kFilter);
  const std::vector<Event> events = read_events_file(path("events.tsv"));
  const FilteredStream fs_out = run_filters(events, params_.filter);
  {
    const fs::path file = path("filtered.tsv");
    std::ofstream out = open_out(file);
    out << snapshot_header(snap) << '\n';
    write_events(out, fs_out.events);
    close(out, file);
  }
  {
    const fs::path file = path("filter_report.txt");
    std::ofstream out = open_out(file);
    out << snapshot_header(snap) << '\n';
    write_filter_report(out, fs_out.report);
    close(out, file);
  }
  {
    const fs::path file = path("cycles.tsv");
    std::ofstream out = open_out(file);
    out << snapshot_header(snap) << '\n' << "# log_id\tinterval\tcount\tfraction\n";
    char buf[32];
    for (const auto& [id, cycles] : fs_out.cycles) {
      for (const FixedCycle& c : cycles) {
        std::snprintf(buf, sizeof buf, "%.6f", c.fraction);
        out << id << '\t' << c.interval << '\t' << c.count << '\t' << buf << '\n';
      }
    }
    close(out, file);
  }
  log << "filter: " << fs_out.report.input << " in, " << fs_out.report.removed_repeated
      << " repeated, " << fs_out.report.removed_periodic << " periodic, "
      << fs_out.report.output << " out\n";
}

namespace {

struct Split {
  std::vector<Event> history;
  std::vector<Event> evaluation;
};

Split split_events(std::vector<Event> events, double eval_fraction) {
  const std::size_t cut = split_point(events, eval_fraction);
  Split s;
  s.evaluation.assign(std::make_move_iterator(events.begin() + static_cast<std::ptrdiff_t>(cut)),
                      std::make_move_iterator(events.end()));
  events.resize(cut);
  s.history = std::move(events);
  return s;
}

}  // namespace

void Pipeline::mine(std::ostream& log) {
  require(Stage::kFilter, "filtered.tsv");
  const Snapshot snap = current(Stage::kMine);
  const Split split = split_events(read_events_file(path("filtered.tsv")), params_.eval_fraction);
  MiningResult mined = eventcorr::mine(split.history, params_.miner, params_.algorithm);
  flag_clusters(mined.rules, params_.miner);
  const std::vector<RuleStats> clusters =
      extract_clusters(mined.rules, params_.miner.cluster_support,
                       params_.miner.cluster_confidence, params_.miner.cluster_posterior);
  for (const auto& [name, rules] :
       {std::pair{"rules.tsv", static_cast<const std::vector<RuleStats>*>(&mined.rules)}, std::pair{"clusters.tsv", &clusters}}) {
    const fs::path file = path(name);
    std::ofstream out = open_out(file);
    out << snapshot_header(snap) << '\n';
    write_rules(out, *rules);
    close(out, file);
  }
  char seconds[32];
  std::snprintf(seconds, sizeof seconds, "%.3f", mined.analysis_seconds);
  log << "mine: " << to_string(params_.algorithm) << " over " << split.history.size()
      << " history events, " << mined.candidates_counted << " candidates, "
      << mined.rules.size() << " rules, " << clusters.size() << " clusters, analysis "
      << seconds << " s\n";
}

void Pipeline::build_fcg(std::ostream& log) {
  require(Stage::kMine, "rules.tsv");
  const Snapshot snap = current(Stage::kBuildFcg);
  std::vector<RuleStats> rules;
  {
    std::ifstream in = open_in(path("rules.tsv"));
    rules = read_rules(in);
  }
  const Split split = split_events(read_events_file(path("filtered.tsv")), params_.eval_fraction);
  const LogCatalog catalog(split.history);
  const FcgSet set = build_fcgs(rules, catalog);
  std::vector<RuleStats> clusters;
  std::copy_if(rules.begin(), rules.end(), std::back_inserter(clusters),
               [](const RuleStats& r) { return r.cluster; });
  const auto recovered = recover_missing(split.history, clusters, catalog, params_.miner.window);

  auto emit = [&](const char* name, auto&& body) {
    const fs::path file = path(name);
    std::ofstream out = open_out(file);
    out << snapshot_header(snap) << '\n';
    body(out);
    close(out, file);
  };
  emit("fcgs.jsonl", [&](std::ostream& out) { write_fcgs(out, set.fcgs); });
  emit("fcg_index.tsv", [&](std::ostream& out) { write_index(out, set.index); });
  emit("skipped_rules.tsv", [&](std::ostream& out) {
    std::vector<RuleStats> skipped;
    for (const SkippedRule& s : set.skipped) skipped.push_back(s.rule);
    out << "# rules left out because they would close a directed cycle\n";
    write_rules(out, skipped);
  });
  emit("recovered.tsv", [&](std::ostream& out) {
    std::vector<Event> events;
    for (const RecoveredEvent& r : recovered) events.push_back(r.event);
    write_events(out, events);
  });
  log << "build-fcg: " << set.fcgs.size() << " graphs, " << set.skipped.size()
      << " rules skipped, " << recovered.size() << " missing events recovered\n";
}

void Pipeline::predict(std::ostream& log) {
  require(Stage::kBuildFcg, "fcgs.jsonl");
  const Snapshot snap = current(Stage::kPredict);
  FcgSet set;
  {
    std::ifstream in = open_in(path("fcgs.jsonl"));
    set.fcgs = read_fcgs(in);
  }
  {
    std::ifstream in = open_in(path("fcg_index.tsv"));
    set.index = read_index(in);
  }
  const Split split = split_events(read_events_file(path("filtered.tsv")), params_.eval_fraction);
  const LogCatalog catalog(split.history);
  PredictorParams pp = params_.predictor;
  pp.mark_lifetime = params_.miner.window;
  const auto records = run_predictor(split.evaluation, set, catalog, pp);
  const fs::path file = path("predictions.tsv");
  std::ofstream out = open_out(file);
  out << snapshot_header(snap) << '\n';
  write_prediction_log(out, records);
  close(out, file);
  log << "predict: " << split.evaluation.size() << " evaluation events, " << records.size()
      << " prediction log records\n";
}

void Pipeline::evaluate(std::ostream& log) {
  require(Stage::kPredict, "predictions.tsv");
  const Snapshot snap = current(Stage::kEvaluate);
  std::vector<PredictionRecord> records;
  {
    std::ifstream in = open_in(path("predictions.tsv"));
    records = read_prediction_log(in);
  }
  const Split split = split_events(read_events_file(path("filtered.tsv")), params_.eval_fraction);
  const EvalReport report = score(records, split.evaluation.size());
  const fs::path file = path("report.txt");
  std::ofstream out = open_out(file);
  out << snapshot_header(snap) << '\n';
  write_report(out, report);
  close(out, file);
  log << "evaluate:\n";
  write_report(log, report);
}

}  // namespace eventcorr
