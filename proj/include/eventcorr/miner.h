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

#ifndef EVENTCORR_MINER_H_
#define EVENTCORR_MINER_H_

#include <iosfwd>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "eventcorr/event.h"

namespace eventcorr {

// Timed set of logs: distinct log ids, each expected after its predecessor.
using Tsl = std::vector<LogId>;

enum class RuleKind : std::uint8_t { kLocal, kDistributed };

std::string_view to_string(RuleKind kind);

struct RuleStats {
  Tsl tsl;
  std::size_t support_count = 0;
  std::size_t posterior_count = 0;
  std::size_t preceding_occurrences = 0;
  std::size_t posterior_event_occurrences = 0;
  double confidence = 0.0;
  double posterior = 0.0;
  RuleKind kind = RuleKind::kLocal;
  bool cluster = false;

  std::size_t arity() const { return tsl.size(); }
  friend bool operator==(const RuleStats&, const RuleStats&) = default;
};

// Fills confidence and posterior from the four counts (0 on a 0 denominator).
void finalize_ratios(RuleStats& stats);

struct MinerParams {
  Timestamp window = 3600;            // Tw, seconds
  std::size_t support_threshold = 5;  // Sth
  double confidence_threshold = 0.25; // Cth
  std::size_t cluster_support = 10;   // SCth
  double cluster_confidence = 0.8;    // CCth
  double cluster_posterior = 0.8;     // CPth
  std::size_t max_arity = 3;
  unsigned workers = 1;
};

// Throws std::invalid_argument when a parameter is out of range.
void validate(const MinerParams& params);

// Per log id, the ascending timestamps of its occurrences.
class OccurrenceIndex {
 public:
  OccurrenceIndex() = default;
  // Throws DataError if `events` is not time ordered.
  explicit OccurrenceIndex(std::span<const Event> events);

  const std::vector<Timestamp>* find(LogId id) const;
  std::size_t occurrences(LogId id) const;
  std::vector<LogId> log_ids() const;  // ascending

 private:
  std::unordered_map<LogId, std::vector<Timestamp>> times_;
};

// A match of (X1..Xk) takes one occurrence of each Xi with strictly
// increasing timestamps and last - first <= window.
//   support_count       occurrences of X1 that start a match
//   posterior_count     occurrences of Xk that end a match
//   preceding_occurrences  k = 2: occurrences of X1; k > 2: occurrences of
//                          X1 that start a match of (X1..Xk-1)
//   posterior_event_occurrences  occurrences of Xk
// A tsl naming an unseen log id yields all-zero stats.
RuleStats count_tsl(const OccurrenceIndex& index, const Tsl& tsl, Timestamp window);
RuleStats count_tsl(std::span<const Event> events, const Tsl& tsl, Timestamp window);

std::set<LogId> frequent_events(std::span<const Event> events, std::size_t support_threshold);

// k-ary candidates from frequent (k-1)-ary tsls: a candidate qualifies when
// every order-preserving (k-1)-subset is in `frequent`. Singletons produce
// every ordered pair. Output is sorted and unique.
std::vector<Tsl> gen_candidates(const std::vector<Tsl>& frequent);

struct MiningResult {
  std::vector<RuleStats> rules;  // sorted by (arity, tsl)
  double analysis_seconds = 0.0;
  std::size_t candidates_counted = 0;
};

RuleKind kind_of(const Tsl& tsl, const LogCatalog& catalog);

// Level-wise mining over the whole stream.
MiningResult mine_apriori(std::span<const Event> events, const MinerParams& params);

// Pass 1 mines each node on its own (local rules); pass 2 mines each
// application group and each event-type group, keeping tsls that span two
// or more nodes (distributed rules). Events without an application name do
// not form an application group.
MiningResult mine_apriori_s(std::span<const Event> events, const MinerParams& params);

// True when a 2-ary rule falls inside one of the Apriori-S groups.
bool shares_group(LogId a, LogId b, const LogCatalog& catalog);

std::vector<RuleStats> extract_clusters(std::span<const RuleStats> rules,
                                        std::size_t support = 10,
                                        double confidence = 0.8,
                                        double posterior = 0.8);

// Marks the rules that clear the cluster thresholds in `params`.
void flag_clusters(std::vector<RuleStats>& rules, const MinerParams& params);

void sort_rules(std::vector<RuleStats>& rules);

// Rules file: one tab-separated rule per line,
//   arity  log_ids(comma separated)  support  posterior_count  preceding
//   posterior_event_occurrences  confidence  posterior  LOCAL|DISTRIBUTED  cluster(0|1)
// Ratios are recomputed from the counts on load.
void write_rules(std::ostream& out, std::span<const RuleStats> rules);
std::vector<RuleStats> read_rules(std::istream& in);

}  // namespace eventcorr

#endif  // EVENTCORR_MINER_H_
