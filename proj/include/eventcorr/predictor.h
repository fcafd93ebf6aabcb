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

#ifndef EVENTCORR_PREDICTOR_H_
#define EVENTCORR_PREDICTOR_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eventcorr/event.h"
#include "eventcorr/fcg.h"

namespace eventcorr {

struct PredictorParams {
  double probability_threshold = 0.25;  // Pth
  Timestamp valid_duration = 3600;      // Tp, seconds
  Timestamp mark_lifetime = 3600;       // defaults to the mining window
  // Require a recessive chain's members to have been marked in chain order.
  bool strict_chain_order = false;
};

// Throws std::invalid_argument.
void validate(const PredictorParams& params);

enum class Outcome : std::uint8_t { kPending, kHit, kExpired };

std::string_view to_string(Outcome outcome);

struct Prediction {
  LogId log_id = 0;
  NodeId node_id = 0;
  EventId event_id = 0;
  Severity severity = Severity::kInfo;
  EventType event_type = EventType::kSystem;
  std::string application;
  double probability = 0.0;
  Timestamp predicting_point = 0;
  Timestamp expiry = 0;  // predicting_point + Tp
  Outcome outcome = Outcome::kPending;
  Timestamp actual = 0;  // HIT only

  Timestamp lead_time() const { return actual - predicting_point; }
  friend bool operator==(const Prediction&, const Prediction&) = default;
};

enum class Transition : std::uint8_t { kEmit, kRefresh, kHit, kExpire, kLateArrival };

std::string_view to_string(Transition transition);
std::optional<Transition> parse_transition(std::string_view text);

// One line of the prediction log.
struct PredictionRecord {
  Timestamp at = 0;
  Transition transition = Transition::kEmit;
  Prediction prediction;  // state after the transition

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

// Single-owner state machine over one time-ordered event stream. The graphs
// are borrowed and must outlive the predictor.
class Predictor {
 public:
  Predictor(const FcgSet& fcgs, const LogCatalog& catalog, PredictorParams params);

  // Expires stale marks and predictions, resolves a pending prediction for
  // the event's log id, marks and propagates. Throws DataError when `event`
  // is older than the previous one.
  std::vector<PredictionRecord> observe(const Event& event);
  // Every PENDING prediction with expiry < now becomes EXPIRED; marks older
  // than the lifetime are cleared.
  std::vector<PredictionRecord> resolve_expired(Timestamp now);

  double probability(FcgId fcg, VertexId vertex) const;
  bool marked(FcgId fcg, VertexId vertex) const;
  const std::map<LogId, Prediction>& active() const { return active_; }
  const PredictorParams& params() const { return params_; }

 private:
  struct GraphState {
    std::vector<VertexId> order;
    std::vector<std::vector<EdgeId>> incoming_rules;
    std::vector<std::vector<VertexId>> members;  // recessive: chain order
    std::vector<std::optional<Timestamp>> marks;
    std::vector<double> probability;
  };

  void recompute(FcgId id);
  void expire_marks(Timestamp now, std::vector<FcgId>& touched);
  Prediction make_prediction(LogId log_id, double p, Timestamp now) const;

  const FcgSet* fcgs_;
  const LogCatalog* catalog_;
  PredictorParams params_;
  std::vector<GraphState> graphs_;  // index fcg id - 1
  std::map<LogId, Prediction> active_;
  std::map<LogId, Prediction> expired_;  // most recent EXPIRED per log id
  std::optional<Timestamp> last_;
};

// Replays `events` and appends all transitions. Predictions still pending
// at the end stay PENDING.
std::vector<PredictionRecord> run_predictor(std::span<const Event> events, const FcgSet& fcgs,
                                            const LogCatalog& catalog,
                                            const PredictorParams& params);

// Tab-separated:
//   at  transition  log_id  node_id  event_id  severity  type  application
//   probability  predicting_point  expiry  outcome  lead_time
void write_prediction_log(std::ostream& out, std::span<const PredictionRecord> records);
std::vector<PredictionRecord> read_prediction_log(std::istream& in);

}  // namespace eventcorr

#endif  // EVENTCORR_PREDICTOR_H_
