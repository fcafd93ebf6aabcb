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

#include "eventcorr/harness.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "eventcorr/errors.h"
#include "eventcorr/parser.h"
#include "text_util.h"

namespace eventcorr {

void validate(const SyntheticSpec& spec, Timestamp window) {
  const std::size_t n = spec.templates.size();
  if (spec.duration < 0) throw std::invalid_argument("duration must be >= 0");
  for (const LogTemplate& t : spec.templates) {
    if (!(t.rate_per_hour >= 0.0)) throw std::invalid_argument("rates must be >= 0");
  }
  for (const PlantedRule& r : spec.planted) {
    if (r.trigger >= n || r.consequent >= n || r.trigger == r.consequent) {
      throw std::invalid_argument("planted rule references a bad template");
    }
    if (!(r.probability >= 0.0 && r.probability <= 1.0)) {
      throw std::invalid_argument("planted probability must lie in [0, 1]");
    }
    if (r.min_delay < 1 || r.max_delay < r.min_delay || r.max_delay >= window) {
      throw std::invalid_argument("planted delays must satisfy 1 <= min <= max < Tw");
    }
  }
  for (const PeriodicInjection& p : spec.periodic) {
    if (p.source >= n || p.interval <= 0) throw std::invalid_argument("bad periodic injection");
  }
  for (const BurstInjection& b : spec.bursts) {
    if (b.source >= n || b.spacing < 0) throw std::invalid_argument("bad burst injection");
  }
}

std::vector<LogTemplate> grid_templates(std::size_t nodes, std::size_t per_node,
                                        std::size_t applications, double rate_per_hour,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> app(0, applications == 0 ? 0 : applications - 1);
  std::vector<LogTemplate> out;
  out.reserve(nodes * per_node);
  char buf[32];
  for (std::size_t n = 0; n < nodes; ++n) {
    std::snprintf(buf, sizeof buf, "cn%03zu", n + 1);
    const std::string node = buf;
    for (std::size_t j = 0; j < per_node; ++j) {
      const std::size_t idx = n * per_node + j;
      LogTemplate t;
      t.node = node;
      if (applications > 0) {
        std::snprintf(buf, sizeof buf, "app%02zu", app(rng) + 1);
        t.application = buf;
      } else {
        t.application = "kernel";
      }
      t.process_id = std::to_string(1000 + idx);
      t.event_type = kAllEventTypes[idx % kAllEventTypes.size()];
      t.severity = kAllSeverities[(idx / kAllEventTypes.size()) % kAllSeverities.size()];
      t.rate_per_hour = rate_per_hour;
      out.push_back(std::move(t));
    }
  }
  return out;
}

SyntheticSpec benchmark_spec(std::uint64_t seed, std::size_t nodes, std::size_t per_node,
                             std::size_t days, std::size_t planted) {
  SyntheticSpec spec;
  spec.seed = seed;
  spec.duration = static_cast<Timestamp>(days) * 86400;
  const double rate = 22.0 / (static_cast<double>(days) * 24.0);
  spec.templates = grid_templates(nodes, per_node, 12, rate, seed ^ 0x9e3779b97f4a7c15ull);
  const std::size_t n = spec.templates.size();
  if (n < 2 || per_node < 2) return spec;
  std::mt19937_64 rng(seed * 0x2545f4914f6cdd1dull + 7);
  std::uniform_int_distribution<std::size_t> any(0, n - 1);
  std::uniform_int_distribution<std::size_t> slot(0, per_node - 1);
  std::bernoulli_distribution local(0.85);
  std::uniform_int_distribution<Timestamp> reach(600, 3000);
  std::uniform_real_distribution<double> strength(0.3, 1.0);
  for (std::size_t i = 0; i < planted; ++i) {
    PlantedRule r;
    r.trigger = any(rng);
    do {
      r.consequent = local(rng) ? (r.trigger / per_node) * per_node + slot(rng) : any(rng);
    } while (r.consequent == r.trigger);
    r.min_delay = 30;
    r.max_delay = reach(rng);
    r.probability = std::round(strength(rng) * 100.0) / 100.0;
    spec.planted.push_back(r);
  }
  return spec;
}

GeneratedCorpus generate(const SyntheticSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  const Timestamp end = spec.start + spec.duration;
  std::vector<std::vector<Timestamp>> occ(spec.templates.size());

  for (std::size_t i = 0; i < spec.templates.size(); ++i) {
    const double rate = spec.templates[i].rate_per_hour / 3600.0;
    if (rate <= 0.0) continue;
    std::exponential_distribution<double> gap(rate);
    double offset = gap(rng);
    while (offset < static_cast<double>(spec.duration)) {
      occ[i].push_back(spec.start + static_cast<Timestamp>(std::floor(offset)));
      offset += gap(rng);
    }
  }
  for (const PeriodicInjection& p : spec.periodic) {
    for (std::size_t i = 0; i < p.count; ++i) {
      const Timestamp t = spec.start + p.start + static_cast<Timestamp>(i) * p.interval;
      if (t < end) occ[p.source].push_back(t);
    }
  }
  for (const BurstInjection& b : spec.bursts) {
    for (std::size_t i = 0; i < b.count; ++i) {
      const Timestamp t = spec.start + b.start + static_cast<Timestamp>(i) * b.spacing;
      if (t < end) occ[b.source].push_back(t);
    }
  }
  for (auto& o : occ) std::sort(o.begin(), o.end());

  GeneratedCorpus corpus;
  for (const PlantedRule& r : spec.planted) {
    auto& trig = occ[r.trigger];
    if (r.trigger_count > 0) {
      const Timestamp slot = spec.duration / static_cast<Timestamp>(r.trigger_count);
      std::uniform_int_distribution<Timestamp> jitter(0, std::max<Timestamp>(0, slot / 4));
      for (std::size_t i = 0; i < r.trigger_count; ++i) {
        trig.push_back(spec.start + static_cast<Timestamp>(i) * slot + jitter(rng));
      }
      std::sort(trig.begin(), trig.end());
    }
    std::bernoulli_distribution fire(r.probability);
    std::uniform_int_distribution<Timestamp> delay(r.min_delay, r.max_delay);
    std::size_t fired = 0;
    auto& cons = occ[r.consequent];
    for (Timestamp t : trig) {
      if (!fire(rng)) continue;
      const Timestamp at = t + delay(rng);
      if (at >= end) continue;
      cons.push_back(at);
      ++fired;
    }
    std::sort(cons.begin(), cons.end());
    corpus.triggers.push_back(trig.size());
    corpus.fired.push_back(fired);
  }

  std::vector<std::pair<Timestamp, std::size_t>> timeline;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    for (Timestamp t : occ[i]) timeline.emplace_back(t, i);
  }
  std::sort(timeline.begin(), timeline.end());

  for (const auto& [name, id] : synthetic_config(spec).node_name_map) {
    corpus.registry.bind_node(name, id);
  }
  corpus.template_log_ids.assign(spec.templates.size(), std::nullopt);
  corpus.events.reserve(timeline.size());
  for (const auto& [t, i] : timeline) {
    const LogTemplate& tpl = spec.templates[i];
    const EventId eid = corpus.registry.assign_event_id(tpl.severity, tpl.event_type);
    const NodeId node = *corpus.registry.find_node(tpl.node);
    const LogId lid = corpus.registry.assign_log_id(node, eid, tpl.application, tpl.process_id);
    corpus.template_log_ids[i] = lid;
    corpus.events.push_back(corpus.registry.make_event(lid, t));
  }
  return corpus;
}

namespace {

std::string keyword_text(Severity s, EventType t) {
  return "[" + std::string(to_string(s)) + "/" + std::string(to_string(t)) + "]";
}

}  // namespace

Config synthetic_config(const SyntheticSpec& spec) {
  Config config;
  for (const char* name : {"timestamp", "nodename", "application", "processid", "description"}) {
    config.definitions.push_back({name, default_definition_patterns().find(name)->second});
  }
  config.formats.push_back({"synthetic", "%timestamp %nodename %application[%processid]: %description"});
  for (Severity s : kAllSeverities) {
    for (EventType t : kAllEventTypes) config.keywords.push_back({keyword_text(s, t), s, t});
  }
  NodeId next = 1;
  for (const LogTemplate& t : spec.templates) {
    if (config.node_name_map.try_emplace(t.node, next).second) ++next;
  }
  return config;
}

void write_syslog(std::ostream& out, const SyntheticSpec& spec, const GeneratedCorpus& corpus) {
  std::map<LogId, std::size_t> template_of;
  for (std::size_t i = 0; i < corpus.template_log_ids.size(); ++i) {
    if (corpus.template_log_ids[i]) template_of[*corpus.template_log_ids[i]] = i;
  }
  for (const Event& e : corpus.events) {
    const std::size_t i = template_of.at(e.log_id);
    const LogTemplate& t = spec.templates[i];
    out << format_iso8601(e.timestamp) << ' ' << t.node << ' ' << t.application << '['
        << t.process_id << "]: " << keyword_text(t.severity, t.event_type)
        << " synthetic event from source " << i << '\n';
  }
}

void write_ground_truth(std::ostream& out, const SyntheticSpec& spec,
                        const GeneratedCorpus& corpus) {
  using nlohmann::json;
  auto log_id = [&](std::size_t i) -> json {
    return corpus.template_log_ids[i] ? json(*corpus.template_log_ids[i]) : json(nullptr);
  };
  json doc;
  doc["seed"] = spec.seed;
  doc["start"] = spec.start;
  doc["duration"] = spec.duration;
  doc["events"] = corpus.events.size();
  json templates = json::array();
  for (std::size_t i = 0; i < spec.templates.size(); ++i) {
    const LogTemplate& t = spec.templates[i];
    templates.push_back({{"source", i},
                         {"log_id", log_id(i)},
                         {"node", t.node},
                         {"application", t.application},
                         {"process_id", t.process_id},
                         {"severity", to_string(t.severity)},
                         {"type", to_string(t.event_type)},
                         {"rate_per_hour", t.rate_per_hour}});
  }
  doc["templates"] = std::move(templates);
  json planted = json::array();
  for (std::size_t i = 0; i < spec.planted.size(); ++i) {
    const PlantedRule& r = spec.planted[i];
    planted.push_back({{"trigger", r.trigger},
                       {"consequent", r.consequent},
                       {"trigger_log_id", log_id(r.trigger)},
                       {"consequent_log_id", log_id(r.consequent)},
                       {"min_delay", r.min_delay},
                       {"max_delay", r.max_delay},
                       {"probability", r.probability},
                       {"trigger_count", r.trigger_count},
                       {"trigger_occurrences", corpus.triggers[i]},
                       {"fired", corpus.fired[i]}});
  }
  doc["planted"] = std::move(planted);
  json periodic = json::array();
  for (const PeriodicInjection& p : spec.periodic) {
    periodic.push_back({{"source", p.source},
                        {"log_id", log_id(p.source)},
                        {"start", p.start},
                        {"interval", p.interval},
                        {"count", p.count}});
  }
  doc["periodic"] = std::move(periodic);
  json bursts = json::array();
  for (const BurstInjection& b : spec.bursts) {
    bursts.push_back({{"source", b.source},
                      {"log_id", log_id(b.source)},
                      {"start", b.start},
                      {"count", b.count},
                      {"spacing", b.spacing}});
  }
  doc["bursts"] = std::move(bursts);
  out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Brute-force oracle. Shares nothing with the miner beyond the data types.

namespace {

using Occurrences = std::map<LogId, std::vector<Timestamp>>;

bool match_forward(const Occurrences& occ, const Tsl& tsl, std::size_t level, Timestamp prev,
                   Timestamp first, Timestamp window) {
  for (Timestamp t : occ.at(tsl[level])) {
    if (t <= prev || t - first > window) continue;
    if (level + 1 == tsl.size() || match_forward(occ, tsl, level + 1, t, first, window)) {
      return true;
    }
  }
  return false;
}

bool match_backward(const Occurrences& occ, const Tsl& tsl, std::size_t level, Timestamp next,
                    Timestamp last, Timestamp window) {
  for (Timestamp t : occ.at(tsl[level])) {
    if (t >= next || last - t > window) continue;
    if (level == 0 || match_backward(occ, tsl, level - 1, t, last, window)) return true;
  }
  return false;
}

std::size_t count_starts(const Occurrences& occ, const Tsl& tsl, Timestamp window) {
  std::size_t n = 0;
  for (Timestamp t : occ.at(tsl[0])) {
    if (match_forward(occ, tsl, 1, t, t, window)) ++n;
  }
  return n;
}

RuleStats oracle_count_occ(const Occurrences& occ, const Tsl& tsl, Timestamp window) {
  RuleStats s;
  s.tsl = tsl;
  const std::size_t k = tsl.size();
  for (LogId id : tsl) {
    if (!occ.count(id)) return s;
  }
  s.support_count = count_starts(occ, tsl, window);
  for (Timestamp t : occ.at(tsl[k - 1])) {
    if (match_backward(occ, tsl, k - 2, t, t, window)) ++s.posterior_count;
  }
  s.preceding_occurrences =
      k == 2 ? occ.at(tsl[0]).size() : count_starts(occ, Tsl(tsl.begin(), tsl.end() - 1), window);
  s.posterior_event_occurrences = occ.at(tsl[k - 1]).size();
  if (s.preceding_occurrences > 0) {
    s.confidence = static_cast<double>(s.support_count) / static_cast<double>(s.preceding_occurrences);
  }
  if (s.posterior_event_occurrences > 0) {
    s.posterior = static_cast<double>(s.posterior_count) /
                  static_cast<double>(s.posterior_event_occurrences);
  }
  return s;
}

Occurrences occurrences_of(std::span<const Event> events) {
  Occurrences occ;
  for (const Event& e : events) occ[e.log_id].push_back(e.timestamp);
  return occ;
}

}  // namespace

RuleStats oracle_count(std::span<const Event> events, const Tsl& tsl, Timestamp window) {
  if (tsl.size() < 2) throw std::invalid_argument("oracle_count needs k >= 2");
  return oracle_count_occ(occurrences_of(events), tsl, window);
}

std::vector<RuleStats> oracle_mine(std::span<const Event> events, const MinerParams& params) {
  const Occurrences occ = occurrences_of(events);
  if (events.size() > kOracleMaxEvents || occ.size() > kOracleMaxLogIds) {
    throw std::invalid_argument("oracle_mine: corpus exceeds the tractability guard");
  }
  std::map<LogId, NodeId> node_of;
  for (const Event& e : events) node_of[e.log_id] = e.node_id;

  std::vector<LogId> f1;
  for (const auto& [id, times] : occ) {
    if (times.size() >= params.support_threshold) f1.push_back(id);
  }
  std::vector<RuleStats> rules;
  std::set<Tsl> frequent;  // previous level
  for (std::size_t k = 2; k <= params.max_arity; ++k) {
    std::set<Tsl> next;
    Tsl tuple;
    std::function<void()> visit = [&] {
      if (tuple.size() == k) {
        if (k > 2) {
          for (std::size_t drop = 0; drop < k; ++drop) {
            Tsl sub;
            for (std::size_t i = 0; i < k; ++i) {
              if (i != drop) sub.push_back(tuple[i]);
            }
            if (!frequent.count(sub)) return;
          }
        }
        RuleStats s = oracle_count_occ(occ, tuple, params.window);
        if (s.support_count < params.support_threshold) return;
        next.insert(tuple);
        if (s.confidence < params.confidence_threshold) return;
        s.kind = RuleKind::kLocal;
        for (LogId id : tuple) {
          if (node_of.at(id) != node_of.at(tuple[0])) s.kind = RuleKind::kDistributed;
        }
        rules.push_back(std::move(s));
        return;
      }
      for (LogId id : f1) {
        if (std::find(tuple.begin(), tuple.end(), id) != tuple.end()) continue;
        tuple.push_back(id);
        visit();
        tuple.pop_back();
      }
    };
    visit();
    if (next.empty()) break;
    frequent = std::move(next);
  }
  std::sort(rules.begin(), rules.end(), [](const RuleStats& a, const RuleStats& b) {
    return std::make_pair(a.tsl.size(), a.tsl) < std::make_pair(b.tsl.size(), b.tsl);
  });
  return rules;
}

RandomCase random_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  RandomCase out;
  const std::size_t logs = static_cast<std::size_t>(uniform(1, kOracleMaxLogIds));
  const std::size_t n = static_cast<std::size_t>(uniform(1, kOracleMaxEvents));
  const Timestamp horizon = uniform(20, 1500);
  const std::vector<std::string> apps = {"", "sshd", "pbs_mom"};

  std::vector<Event> proto(logs);
  for (std::size_t i = 0; i < logs; ++i) {
    Event& e = proto[i];
    e.log_id = static_cast<LogId>(i + 1);
    e.node_id = static_cast<NodeId>(uniform(1, 3));
    e.severity = kAllSeverities[uniform(0, 4)];
    e.event_type = kAllEventTypes[uniform(0, 2)];
    e.event_id = static_cast<EventId>(static_cast<int>(e.severity) * 5 +
                                      static_cast<int>(e.event_type) + 1);
    e.application = apps[uniform(0, 2)];
    e.process_id = std::to_string(100 + i);
  }
  std::vector<double> weights(logs);
  for (double& w : weights) w = static_cast<double>(uniform(1, 10));
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  for (std::size_t i = 0; i < n; ++i) {
    Event e = proto[pick(rng)];
    e.timestamp = uniform(0, horizon);
    out.events.push_back(std::move(e));
  }
  std::stable_sort(out.events.begin(), out.events.end(),
                   [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
  out.params.window = uniform(1, std::max<Timestamp>(1, horizon / 5));
  out.params.support_threshold = static_cast<std::size_t>(uniform(1, 6));
  out.params.confidence_threshold = static_cast<double>(uniform(0, 10)) / 10.0;
  out.params.max_arity = static_cast<std::size_t>(uniform(2, 4));
  return out;
}

std::string_view to_string(Algorithm algorithm) {
  return algorithm == Algorithm::kApriori ? "apriori" : "apriori-s";
}

std::optional<Algorithm> parse_algorithm(std::string_view text) {
  if (text == "apriori") return Algorithm::kApriori;
  if (text == "apriori-s") return Algorithm::kAprioriS;
  return std::nullopt;
}

MiningResult mine(std::span<const Event> events, const MinerParams& params, Algorithm algorithm) {
  return algorithm == Algorithm::kApriori ? mine_apriori(events, params)
                                          : mine_apriori_s(events, params);
}

EvalReport score(std::span<const PredictionRecord> records, std::size_t evaluation_events) {
  EvalReport r;
  r.evaluation_events = evaluation_events;
  std::map<LogId, bool> open;
  double lead = 0.0;
  for (const PredictionRecord& rec : records) {
    switch (rec.transition) {
      case Transition::kEmit:
      case Transition::kRefresh:
        open[rec.prediction.log_id] = true;
        break;
      case Transition::kHit:
        ++r.true_positives;
        lead += static_cast<double>(rec.prediction.lead_time());
        open[rec.prediction.log_id] = false;
        break;
      case Transition::kExpire:
        ++r.false_positives;
        open[rec.prediction.log_id] = false;
        break;
      case Transition::kLateArrival:
        ++r.late_arrivals;
        break;
    }
  }
  for (const auto& [id, pending] : open) r.pending += pending ? 1 : 0;
  const std::size_t resolved = r.true_positives + r.false_positives;
  if (resolved > 0) {
    r.precision = static_cast<double>(r.true_positives) / static_cast<double>(resolved);
  }
  if (evaluation_events > 0) {
    r.recall = static_cast<double>(r.true_positives) / static_cast<double>(evaluation_events);
  }
  if (r.true_positives > 0) r.average_lead_time = lead / static_cast<double>(r.true_positives);
  return r;
}

void write_report(std::ostream& out, const EvalReport& r) {
  char buf[64];
  auto fixed = [&](const std::optional<double>& v) -> std::string {
    if (!v) return "undefined";
    std::snprintf(buf, sizeof buf, "%.6f", *v);
    return buf;
  };
  out << "true_positives=" << r.true_positives << '\n'
      << "false_positives=" << r.false_positives << '\n'
      << "pending=" << r.pending << '\n'
      << "late_arrivals=" << r.late_arrivals << '\n'
      << "evaluation_events=" << r.evaluation_events << '\n'
      << "precision=" << fixed(r.precision) << '\n'
      << "recall=" << fixed(r.recall) << '\n'
      << "average_lead_time=" << fixed(r.average_lead_time) << '\n';
}

EvalReport read_report(std::istream& in) {
  EvalReport r;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DataError("malformed report line: " + line);
    const std::string key = line.substr(0, eq);
    const std::string_view value = std::string_view(line).substr(eq + 1);
    auto count = [&](std::size_t& field) {
      auto v = detail::parse_int<std::size_t>(value);
      if (!v) throw DataError("bad value for " + key);
      field = *v;
    };
    auto ratio = [&]() -> std::optional<double> {
      if (value == "undefined") return std::nullopt;
      auto v = detail::parse_double(value);
      if (!v) throw DataError("bad value for " + key);
      return v;
    };
    if (key == "true_positives") count(r.true_positives);
    else if (key == "false_positives") count(r.false_positives);
    else if (key == "pending") count(r.pending);
    else if (key == "late_arrivals") count(r.late_arrivals);
    else if (key == "evaluation_events") count(r.evaluation_events);
    else if (key == "precision") r.precision = ratio();
    else if (key == "recall") r.recall = ratio().value_or(0.0);
    else if (key == "average_lead_time") r.average_lead_time = ratio();
    else throw DataError("unknown report key " + key);
  }
  return r;
}

std::size_t split_point(std::span<const Event> events, double eval_fraction) {
  if (!(eval_fraction >= 0.0 && eval_fraction <= 1.0)) {
    throw std::invalid_argument("evaluation fraction must lie in [0, 1]");
  }
  if (events.empty()) return 0;
  const Timestamp first = events.front().timestamp;
  const Timestamp span = events.back().timestamp - first;
  const Timestamp cut =
      first + static_cast<Timestamp>(std::ceil(static_cast<double>(span) * (1.0 - eval_fraction)));
  auto it = std::lower_bound(events.begin(), events.end(), cut,
                             [](const Event& e, Timestamp t) { return e.timestamp < t; });
  if (eval_fraction > 0.0 && it == events.end()) --it;
  if (eval_fraction == 0.0) it = events.end();
  // Keep equal timestamps on one side so the periods stay disjoint.
  while (it != events.begin() && it != events.end() &&
         std::prev(it)->timestamp == it->timestamp) {
    ++it;
  }
  return static_cast<std::size_t>(it - events.begin());
}

ReplayResult replay(std::span<const Event> history, std::span<const Event> evaluation,
                    const MinerParams& miner, const PredictorParams& predictor,
                    Algorithm algorithm) {
  if (!history.empty() && !evaluation.empty() &&
      evaluation.front().timestamp <= history.back().timestamp) {
    throw std::invalid_argument("replay: evaluation period must start after the history");
  }
  ReplayResult out;
  MiningResult mined = mine(history, miner, algorithm);
  out.analysis_seconds = mined.analysis_seconds;
  out.rules = std::move(mined.rules);
  const LogCatalog catalog(history);
  out.fcgs = build_fcgs(out.rules, catalog);
  out.records = run_predictor(evaluation, out.fcgs, catalog, predictor);
  out.report = score(out.records, evaluation.size());
  return out;
}

std::vector<double> smooth3(std::span<const double> values) {
  if (values.size() < 3) return {values.begin(), values.end()};
  std::vector<double> out;
  for (std::size_t i = 0; i + 2 < values.size(); ++i) {
    out.push_back((values[i] + values[i + 1] + values[i + 2]) / 3.0);
  }
  return out;
}

bool follows_trend(std::span<const double> values, Trend trend) {
  const std::vector<double> s = smooth3(values);
  if (s.size() < 2) return false;
  const double sign = trend == Trend::kIncreasing ? 1.0 : -1.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (sign * (s[i] - s[i - 1]) < 0.0) return false;
  }
  return sign * (s.back() - s.front()) > 0.0;
}

void write_sweep_table(std::ostream& out, std::string_view parameter,
                       std::span<const SweepPoint> points) {
  out << "parameter\tvalue\trules\ttp\tfp\tprecision\trecall\tlead_time\tanalysis_seconds\n";
  char buf[256];
  for (const SweepPoint& p : points) {
    std::snprintf(buf, sizeof buf, "%g\t%zu\t%zu\t%zu\t%.6f\t%.6f\t%.1f\t%.3f", p.value, p.rules,
                  p.report.true_positives, p.report.false_positives,
                  p.report.precision.value_or(0.0), p.report.recall,
                  p.report.average_lead_time.value_or(0.0), p.analysis_seconds);
    out << parameter << '\t' << buf << '\n';
  }
}

}  // namespace eventcorr
