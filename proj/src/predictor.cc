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

#include "eventcorr/predictor.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "eventcorr/errors.h"
#include "text_util.h"

namespace eventcorr {

void validate(const PredictorParams& params) {
  if (!(params.probability_threshold > 0.0 && params.probability_threshold <= 1.0)) {
    throw std::invalid_argument("probability threshold must lie in (0, 1]");
  }
  if (params.valid_duration <= 0) throw std::invalid_argument("Tp must be positive");
  if (params.mark_lifetime < 0) throw std::invalid_argument("mark lifetime must be >= 0");
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kPending: return "PENDING";
    case Outcome::kHit: return "HIT";
    case Outcome::kExpired: return "EXPIRED";
  }
  return "?";
}

namespace {
constexpr std::array<std::string_view, 5> kTransitionNames = {"EMIT", "REFRESH", "HIT",
                                                              "EXPIRE", "LATE_ARRIVAL"};
}  // namespace

std::string_view to_string(Transition transition) {
  return kTransitionNames[static_cast<std::size_t>(transition)];
}

std::optional<Transition> parse_transition(std::string_view text) {
  for (std::size_t i = 0; i < kTransitionNames.size(); ++i) {
    if (kTransitionNames[i] == text) return static_cast<Transition>(i);
  }
  return std::nullopt;
}

Predictor::Predictor(const FcgSet& fcgs, const LogCatalog& catalog, PredictorParams params)
    : fcgs_(&fcgs), catalog_(&catalog), params_(params) {
  validate(params_);
  graphs_.reserve(fcgs.fcgs.size());
  for (const Fcg& f : fcgs.fcgs) {
    GraphState g;
    auto order = f.topological_order();
    if (!order) throw DataError("fcg " + std::to_string(f.id) + " is not acyclic");
    g.order = std::move(*order);
    g.incoming_rules.resize(f.vertices.size());
    g.members.resize(f.vertices.size());
    std::vector<std::vector<std::pair<std::size_t, VertexId>>> ranked(f.vertices.size());
    for (const Edge& e : f.edges) {
      if (e.role == EdgeRole::kRule) {
        g.incoming_rules[e.head].push_back(e.id);
      } else {
        ranked[e.head].emplace_back(e.order, e.tail);
      }
    }
    for (VertexId v = 0; v < f.vertices.size(); ++v) {
      std::sort(ranked[v].begin(), ranked[v].end());
      for (const auto& [order_in_chain, tail] : ranked[v]) g.members[v].push_back(tail);
    }
    g.marks.assign(f.vertices.size(), std::nullopt);
    g.probability.assign(f.vertices.size(), 0.0);
    graphs_.push_back(std::move(g));
  }
}

double Predictor::probability(FcgId fcg, VertexId vertex) const {
  return graphs_.at(fcg - 1).probability.at(vertex);
}

bool Predictor::marked(FcgId fcg, VertexId vertex) const {
  return graphs_.at(fcg - 1).marks.at(vertex).has_value();
}

void Predictor::recompute(FcgId id) {
  const Fcg& f = fcgs_->at(id);
  GraphState& g = graphs_[id - 1];
  for (VertexId v : g.order) {
    const Vertex& vertex = f.vertices[v];
    double p = 0.0;
    if (vertex.kind == VertexKind::kRecessive) {
      const auto& members = g.members[v];
      const bool all_marked = std::all_of(members.begin(), members.end(),
                                          [&](VertexId m) { return g.marks[m].has_value(); });
      if (all_marked) {
        p = 1.0;
        if (params_.strict_chain_order) {
          for (std::size_t i = 1; i < members.size(); ++i) {
            if (*g.marks[members[i]] <= *g.marks[members[i - 1]]) p = 0.0;
          }
        }
      } else {
        p = 1.0;
        for (VertexId m : members) p *= g.probability[m];
      }
    } else if (g.marks[v]) {
      p = 1.0;
    } else {
      for (EdgeId e : g.incoming_rules[v]) {
        const Edge& edge = f.edges[e];
        p = std::max(p, g.probability[edge.tail] * edge.confidence);
      }
    }
    g.probability[v] = p;
  }
}

Prediction Predictor::make_prediction(LogId log_id, double p, Timestamp now) const {
  Prediction out;
  out.log_id = log_id;
  if (const LogInfo* info = catalog_->find(log_id)) {
    out.node_id = info->node_id;
    out.event_id = info->event_id;
    out.severity = info->severity;
    out.event_type = info->event_type;
    out.application = info->application;
  }
  out.probability = p;
  out.predicting_point = now;
  out.expiry = now + params_.valid_duration;
  return out;
}

void Predictor::expire_marks(Timestamp now, std::vector<FcgId>& touched) {
  for (std::size_t i = 0; i < graphs_.size(); ++i) {
    bool changed = false;
    for (auto& mark : graphs_[i].marks) {
      if (mark && now - *mark > params_.mark_lifetime) {
        mark.reset();
        changed = true;
      }
    }
    if (changed) touched.push_back(static_cast<FcgId>(i + 1));
  }
}

std::vector<PredictionRecord> Predictor::resolve_expired(Timestamp now) {
  std::vector<PredictionRecord> out;
  for (auto it = active_.begin(); it != active_.end();) {
    if (it->second.expiry < now) {
      it->second.outcome = Outcome::kExpired;
      out.push_back({now, Transition::kExpire, it->second});
      expired_[it->first] = it->second;
      it = active_.erase(it);
    } else {
      ++it;
    }
  }
  std::vector<FcgId> touched;
  expire_marks(now, touched);
  for (FcgId id : touched) recompute(id);
  return out;
}

std::vector<PredictionRecord> Predictor::observe(const Event& event) {
  const Timestamp now = event.timestamp;
  if (last_ && now < *last_) {
    throw DataError("predictor input out of order at " + std::to_string(now));
  }
  last_ = now;
  std::vector<PredictionRecord> out = resolve_expired(now);

  if (auto it = active_.find(event.log_id); it != active_.end()) {
    if (it->second.predicting_point < now) {
      it->second.outcome = Outcome::kHit;
      it->second.actual = now;
      out.push_back({now, Transition::kHit, it->second});
      active_.erase(it);
    }
  } else if (auto late = expired_.find(event.log_id); late != expired_.end()) {
    Prediction p = late->second;
    p.actual = now;
    out.push_back({now, Transition::kLateArrival, p});
    expired_.erase(late);
  }

  std::set<FcgId> touched;
  for (const FcgPosition& pos : lookup(fcgs_->index, event.log_id)) {
    graphs_[pos.fcg_id - 1].marks[pos.vertex_id] = now;
    touched.insert(pos.fcg_id);
  }
  std::map<LogId, double> candidates;
  for (FcgId id : touched) {
    recompute(id);
    const Fcg& f = fcgs_->at(id);
    const GraphState& g = graphs_[id - 1];
    for (const Vertex& v : f.vertices) {
      if (v.kind != VertexKind::kDominant || g.marks[v.id]) continue;
      const double p = g.probability[v.id];
      if (p <= 0.0 || p < params_.probability_threshold) continue;
      auto [it, inserted] = candidates.try_emplace(v.log_id, p);
      if (!inserted) it->second = std::max(it->second, p);
    }
  }
  for (const auto& [log_id, p] : candidates) {
    auto it = active_.find(log_id);
    if (it == active_.end()) {
      Prediction pred = make_prediction(log_id, p, now);
      out.push_back({now, Transition::kEmit, pred});
      active_.emplace(log_id, std::move(pred));
    } else if (p > it->second.probability) {
      it->second.probability = p;
      it->second.predicting_point = now;
      it->second.expiry = now + params_.valid_duration;
      out.push_back({now, Transition::kRefresh, it->second});
    }
  }
  return out;
}

std::vector<PredictionRecord> run_predictor(std::span<const Event> events, const FcgSet& fcgs,
                                            const LogCatalog& catalog,
                                            const PredictorParams& params) {
  Predictor predictor(fcgs, catalog, params);
  std::vector<PredictionRecord> log;
  for (const Event& e : events) {
    auto records = predictor.observe(e);
    log.insert(log.end(), std::make_move_iterator(records.begin()),
               std::make_move_iterator(records.end()));
  }
  return log;
}

void write_prediction_log(std::ostream& out, std::span<const PredictionRecord> records) {
  out << "# at\ttransition\tlog_id\tnode_id\tevent_id\tseverity\ttype\tapplication\t"
         "probability\tpredicting_point\texpiry\toutcome\tlead_time\n";
  char prob[32];
  for (const PredictionRecord& r : records) {
    const Prediction& p = r.prediction;
    std::snprintf(prob, sizeof prob, "%.6f", p.probability);
    out << r.at << '\t' << to_string(r.transition) << '\t' << p.log_id << '\t' << p.node_id
        << '\t' << p.event_id << '\t' << to_string(p.severity) << '\t'
        << to_string(p.event_type) << '\t' << detail::sanitize_field(p.application) << '\t'
        << prob << '\t' << p.predicting_point << '\t' << p.expiry << '\t'
        << to_string(p.outcome) << '\t';
    if (r.transition == Transition::kHit || r.transition == Transition::kLateArrival) {
      out << p.lead_time();
    } else {
      out << '-';
    }
    out << '\n';
  }
}

std::vector<PredictionRecord> read_prediction_log(std::istream& in) {
  std::vector<PredictionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto bad = [&] {
      return DataError("prediction log line " + std::to_string(line_no) + " is malformed");
    };
    const auto cols = detail::split(line, '\t');
    if (cols.size() != 13) throw bad();
    PredictionRecord r;
    Prediction& p = r.prediction;
    auto at = detail::parse_int<Timestamp>(cols[0]);
    auto transition = parse_transition(cols[1]);
    auto log_id = detail::parse_int<LogId>(cols[2]);
    auto node_id = detail::parse_int<NodeId>(cols[3]);
    auto event_id = detail::parse_int<EventId>(cols[4]);
    auto severity = parse_severity(cols[5]);
    auto type = parse_event_type(cols[6]);
    auto prob = detail::parse_double(cols[8]);
    auto point = detail::parse_int<Timestamp>(cols[9]);
    auto expiry = detail::parse_int<Timestamp>(cols[10]);
    if (!at || !transition || !log_id || !node_id || !event_id || !severity || !type ||
        !prob || !point || !expiry) {
      throw bad();
    }
    r.at = *at;
    r.transition = *transition;
    p.log_id = *log_id;
    p.node_id = *node_id;
    p.event_id = *event_id;
    p.severity = *severity;
    p.event_type = *type;
    p.application = std::string(cols[7]);
    p.probability = *prob;
    p.predicting_point = *point;
    p.expiry = *expiry;
    if (cols[11] == "PENDING") {
      p.outcome = Outcome::kPending;
    } else if (cols[11] == "HIT") {
      p.outcome = Outcome::kHit;
    } else if (cols[11] == "EXPIRED") {
      p.outcome = Outcome::kExpired;
    } else {
      throw bad();
    }
    if (cols[12] != "-") {
      auto lead = detail::parse_int<Timestamp>(cols[12]);
      if (!lead) throw bad();
      p.actual = p.predicting_point + *lead;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace eventcorr
