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

#ifndef EVENTCORR_HARNESS_H_
#define EVENTCORR_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eventcorr/config.h"
#include "eventcorr/event.h"
#include "eventcorr/fcg.h"
#include "eventcorr/id_registry.h"
#include "eventcorr/miner.h"
#include "eventcorr/predictor.h"

namespace eventcorr {

// One synthetic log source: a fixed (node, application, pid, severity, type)
// tuple, i.e. one log id once parsed.
struct LogTemplate {
  std::string node;
  std::string application;
  std::string process_id;
  Severity severity = Severity::kInfo;
  EventType event_type = EventType::kSystem;
  double rate_per_hour = 0.0;  // Poisson background rate
};

// Each occurrence of `trigger` fires `consequent` with `probability` after a
// uniform delay in [min_delay, max_delay]. Rules apply in list order and see
// occurrences produced by earlier rules, so chains can be planted.
struct PlantedRule {
  std::size_t trigger = 0;  // template index
  std::size_t consequent = 0;
  Timestamp min_delay = 1;
  Timestamp max_delay = 60;
  double probability = 1.0;
  // Extra trigger occurrences, evenly spread over the duration with a small
  // jitter on top of the trigger's background rate.
  std::size_t trigger_count = 0;
};

struct PeriodicInjection {
  std::size_t source = 0;  // template index
  Timestamp start = 0;     // offset from SyntheticSpec::start
  Timestamp interval = 300;
  std::size_t count = 0;
};

struct BurstInjection {
  std::size_t source = 0;
  Timestamp start = 0;  // offset from SyntheticSpec::start
  std::size_t count = 0;
  Timestamp spacing = 1;
};

struct SyntheticSpec {
  Timestamp start = 1262304000;  // 2010-01-01T00:00:00Z
  Timestamp duration = 86400;
  std::vector<LogTemplate> templates;
  std::vector<PlantedRule> planted;
  std::vector<PeriodicInjection> periodic;
  std::vector<BurstInjection> bursts;
  std::uint64_t seed = 1;
};

// Throws std::invalid_argument on out-of-range indices, probabilities outside
// [0,1], or delays that are not below `window`.
void validate(const SyntheticSpec& spec, Timestamp window);

// `nodes` x `per_node` templates with pids unique per template, applications
// drawn from `applications` names and (severity, type) spread evenly.
std::vector<LogTemplate> grid_templates(std::size_t nodes, std::size_t per_node,
                                        std::size_t applications, double rate_per_hour,
                                        std::uint64_t seed);

// The standing evaluation corpus: `nodes` x `per_node` sources over `days`
// days with about 22 background occurrences per source, twelve
// applications, and `planted` rules with delays up to 3000 s. Most rules
// stay inside one node.
SyntheticSpec benchmark_spec(std::uint64_t seed, std::size_t nodes = 40,
                             std::size_t per_node = 50, std::size_t days = 60,
                             std::size_t planted = 400);

struct GeneratedCorpus {
  std::vector<Event> events;  // time ordered, ids as the parser would assign
  IdRegistry registry;
  // Log id of each template, nullopt when the template never occurred.
  std::vector<std::optional<LogId>> template_log_ids;
  std::vector<std::size_t> fired;  // consequent occurrences per planted rule
  std::vector<std::size_t> triggers;  // trigger occurrences per planted rule
};

// Deterministic for a given spec (seed included).
GeneratedCorpus generate(const SyntheticSpec& spec);

// Config that parses write_syslog() output back into the same events.
Config synthetic_config(const SyntheticSpec& spec);
// One line per event: "<iso8601> <node> <app>[<pid>]: [SEV/TYPE] ...".
void write_syslog(std::ostream& out, const SyntheticSpec& spec, const GeneratedCorpus& corpus);
// JSON document describing templates, planted rules and injections.
void write_ground_truth(std::ostream& out, const SyntheticSpec& spec,
                        const GeneratedCorpus& corpus);

inline constexpr std::size_t kOracleMaxEvents = 200;
inline constexpr std::size_t kOracleMaxLogIds = 8;

// Brute-force reference miner: enumerates every ordered tuple of frequent
// log ids, keeps those whose (k-1)-subsequences are all frequent, and counts
// matches exhaustively. Throws std::invalid_argument above the guard limits.
std::vector<RuleStats> oracle_mine(std::span<const Event> events, const MinerParams& params);
RuleStats oracle_count(std::span<const Event> events, const Tsl& tsl, Timestamp window);

struct RandomCase {
  std::vector<Event> events;
  MinerParams params;
};

// A small random corpus within the oracle guard plus random Tw, Sth, Cth.
RandomCase random_case(std::uint64_t seed);

enum class Algorithm : std::uint8_t { kApriori, kAprioriS };

std::string_view to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view text);

MiningResult mine(std::span<const Event> events, const MinerParams& params, Algorithm algorithm);

struct EvalReport {
  std::size_t true_positives = 0;   // HIT
  std::size_t false_positives = 0;  // EXPIRED
  std::size_t pending = 0;          // unresolved at the end, not scored
  std::size_t late_arrivals = 0;
  std::size_t evaluation_events = 0;
  std::optional<double> precision;  // nullopt when nothing was resolved
  double recall = 0.0;
  std::optional<double> average_lead_time;  // seconds, over HITs

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

// Scores a prediction log against `evaluation_events` filtered events.
EvalReport score(std::span<const PredictionRecord> records, std::size_t evaluation_events);

void write_report(std::ostream& out, const EvalReport& report);
EvalReport read_report(std::istream& in);

// Index of the first evaluation event when the last `eval_fraction` of the
// covered time span is held out. Events before it form the history.
std::size_t split_point(std::span<const Event> events, double eval_fraction);

struct ReplayResult {
  std::vector<RuleStats> rules;
  FcgSet fcgs;
  std::vector<PredictionRecord> records;
  EvalReport report;
  double analysis_seconds = 0.0;
};

// Mines `history`, builds graphs and predicts over `evaluation`. Both streams
// are expected to be filtered already. Throws std::invalid_argument when the
// evaluation period does not start after the history period.
ReplayResult replay(std::span<const Event> history, std::span<const Event> evaluation,
                    const MinerParams& miner, const PredictorParams& predictor,
                    Algorithm algorithm);

enum class Trend : std::uint8_t { kIncreasing, kDecreasing };

// 3-point moving average, then non-strict monotonicity in the given direction
// with the last smoothed value strictly beyond the first.
std::vector<double> smooth3(std::span<const double> values);
bool follows_trend(std::span<const double> values, Trend trend);

struct SweepPoint {
  double value = 0.0;
  std::size_t rules = 0;
  EvalReport report;
  double analysis_seconds = 0.0;
};

// Tab-separated table: parameter, value, rules, tp, fp, precision, recall,
// average lead time, analysis seconds.
void write_sweep_table(std::ostream& out, std::string_view parameter,
                       std::span<const SweepPoint> points);

}  // namespace eventcorr

#endif  // EVENTCORR_HARNESS_H_
