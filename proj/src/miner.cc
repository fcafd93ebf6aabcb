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

#include "eventcorr/miner.h"

#include <algorithm>
#include <chrono>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "eventcorr/errors.h"
#include "text_util.h"

namespace eventcorr {

std::string_view to_string(RuleKind kind) {
  return kind == RuleKind::kLocal ? "LOCAL" : "DISTRIBUTED";
}

void finalize_ratios(RuleStats& s) {
  s.confidence = s.preceding_occurrences == 0
                     ? 0.0
                     : static_cast<double>(s.support_count) /
                           static_cast<double>(s.preceding_occurrences);
  s.posterior = s.posterior_event_occurrences == 0
                    ? 0.0
                    : static_cast<double>(s.posterior_count) /
                          static_cast<double>(s.posterior_event_occurrences);
}

void validate(const MinerParams& p) {
  if (p.window <= 0) throw std::invalid_argument("window must be > 0");
  if (p.support_threshold < 1) throw std::invalid_argument("support threshold must be >= 1");
  auto ratio = [](double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument(std::string(what) + " must be in [0, 1]");
    }
  };
  ratio(p.confidence_threshold, "confidence threshold");
  ratio(p.cluster_confidence, "cluster confidence threshold");
  ratio(p.cluster_posterior, "cluster posterior threshold");
  if (p.max_arity < 2) throw std::invalid_argument("max arity must be >= 2");
}

OccurrenceIndex::OccurrenceIndex(std::span<const Event> events) {
  if (!is_time_ordered(events)) {
    throw DataError("occurrence index: events are not sorted by timestamp");
  }
  for (const Event& e : events) times_[e.log_id].push_back(e.timestamp);
}

const std::vector<Timestamp>* OccurrenceIndex::find(LogId id) const {
  auto it = times_.find(id);
  return it == times_.end() ? nullptr : &it->second;
}

std::size_t OccurrenceIndex::occurrences(LogId id) const {
  const auto* t = find(id);
  return t == nullptr ? 0 : t->size();
}

std::vector<LogId> OccurrenceIndex::log_ids() const {
  std::vector<LogId> out;
  out.reserve(times_.size());
  for (const auto& [id, t] : times_) out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void check_tsl(const Tsl& tsl) {
  if (tsl.size() < 2) throw std::invalid_argument("count_tsl needs k >= 2");
  Tsl sorted = tsl;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("tsl log ids must be distinct");
  }
}

// Two-pointer specialisation of count_tsl for k = 2.
RuleStats count_pair(LogId a, LogId b, const std::vector<Timestamp>& ta,
                     const std::vector<Timestamp>& tb, Timestamp window) {
  RuleStats s;
  s.tsl = {a, b};
  std::size_t j = 0;
  for (Timestamp t : ta) {
    while (j < tb.size() && tb[j] <= t) ++j;
    if (j == tb.size()) break;
    if (tb[j] - t <= window) ++s.support_count;
  }
  std::size_t i = 0;
  for (Timestamp t : tb) {
    while (i < ta.size() && ta[i] < t) ++i;
    if (i > 0 && t - ta[i - 1] <= window) ++s.posterior_count;
  }
  s.preceding_occurrences = ta.size();
  s.posterior_event_occurrences = tb.size();
  finalize_ratios(s);
  return s;
}

RuleStats count_general(const std::vector<const std::vector<Timestamp>*>& times,
                        const Tsl& tsl, Timestamp window) {
  RuleStats s;
  s.tsl = tsl;
  const std::size_t k = tsl.size();
  if (k == 2) return count_pair(tsl[0], tsl[1], *times[0], *times[1], window);

  for (Timestamp start : *times[0]) {
    // Earliest continuation is optimal for existence of a match.
    Timestamp cur = start;
    bool ok = true;
    for (std::size_t i = 1; i < k; ++i) {
      const auto& ti = *times[i];
      auto it = std::upper_bound(ti.begin(), ti.end(), cur);
      if (it == ti.end() || *it - start > window) {
        ok = false;
        break;
      }
      cur = *it;
      if (i == k - 2) ++s.preceding_occurrences;
    }
    if (ok) ++s.support_count;
  }
  for (Timestamp end : *times[k - 1]) {
    // Latest predecessor is optimal when anchoring at the last element.
    Timestamp cur = end;
    bool ok = true;
    for (std::size_t i = k - 1; i-- > 0;) {
      const auto& ti = *times[i];
      auto it = std::lower_bound(ti.begin(), ti.end(), cur);
      if (it == ti.begin() || end - *std::prev(it) > window) {
        ok = false;
        break;
      }
      cur = *std::prev(it);
    }
    if (ok) ++s.posterior_count;
  }
  s.posterior_event_occurrences = times[k - 1]->size();
  finalize_ratios(s);
  return s;
}

template <typename Fn>
void run_chunks(std::size_t n, unsigned workers, Fn&& fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) {
    fn(std::size_t{0}, n, 0u);
    return;
  }
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::vector<std::thread> pool;
  const std::size_t step = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = w * step;
    const std::size_t end = std::min(n, begin + step);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end, w] { fn(begin, end, w); });
  }
  for (auto& t : pool) t.join();
}

struct LevelOutput {
  std::vector<Tsl> frequent;
  std::vector<RuleStats> rules;
};

// Keeps frequent tsls and rules, in candidate order.
void absorb(const RuleStats& s, const MinerParams& p, LevelOutput& out) {
  if (s.support_count < p.support_threshold) return;
  out.frequent.push_back(s.tsl);
  if (s.confidence >= p.confidence_threshold) out.rules.push_back(s);
}

void merge(std::vector<LevelOutput>& parts, LevelOutput& into) {
  for (LevelOutput& part : parts) {
    std::move(part.frequent.begin(), part.frequent.end(), std::back_inserter(into.frequent));
    std::move(part.rules.begin(), part.rules.end(), std::back_inserter(into.rules));
  }
}

// Level-wise mining restricted to `universe` (ascending log ids). Counting
// always uses the full index, so stats do not depend on the restriction.
std::vector<RuleStats> mine_levelwise(const OccurrenceIndex& index,
                                      const std::vector<LogId>& universe,
                                      const MinerParams& p, std::size_t& counted) {
  std::vector<LogId> f1;
  for (LogId id : universe) {
    if (index.occurrences(id) >= p.support_threshold) f1.push_back(id);
  }
  std::vector<RuleStats> rules;
  if (f1.size() < 2) return rules;

  // k = 2: every ordered pair, generated on the fly.
  LevelOutput level;
  {
    std::vector<LevelOutput> parts(std::max(1u, p.workers));
    run_chunks(f1.size(), p.workers, [&](std::size_t begin, std::size_t end, unsigned w) {
      for (std::size_t i = begin; i < end; ++i) {
        const auto& ta = *index.find(f1[i]);
        for (std::size_t j = 0; j < f1.size(); ++j) {
          if (i == j) continue;
          absorb(count_pair(f1[i], f1[j], ta, *index.find(f1[j]), p.window), p, parts[w]);
        }
      }
    });
    merge(parts, level);
    counted += f1.size() * (f1.size() - 1);
  }
  std::move(level.rules.begin(), level.rules.end(), std::back_inserter(rules));

  for (std::size_t k = 3; k <= p.max_arity && !level.frequent.empty(); ++k) {
    const std::vector<Tsl> candidates = gen_candidates(level.frequent);
    counted += candidates.size();
    LevelOutput next;
    std::vector<LevelOutput> parts(std::max(1u, p.workers));
    run_chunks(candidates.size(), p.workers,
               [&](std::size_t begin, std::size_t end, unsigned w) {
                 std::vector<const std::vector<Timestamp>*> times(k);
                 for (std::size_t c = begin; c < end; ++c) {
                   for (std::size_t i = 0; i < k; ++i) times[i] = index.find(candidates[c][i]);
                   absorb(count_general(times, candidates[c], p.window), p, parts[w]);
                 }
               });
    merge(parts, next);
    std::move(next.rules.begin(), next.rules.end(), std::back_inserter(rules));
    level = std::move(next);
  }
  return rules;
}

struct TslHash {
  std::size_t operator()(const Tsl& t) const noexcept {
    std::size_t h = t.size();
    for (LogId id : t) h = h * 1000003u ^ std::hash<LogId>{}(id);
    return h;
  }
};

}  // namespace

RuleStats count_tsl(const OccurrenceIndex& index, const Tsl& tsl, Timestamp window) {
  check_tsl(tsl);
  std::vector<const std::vector<Timestamp>*> times;
  for (LogId id : tsl) {
    const auto* t = index.find(id);
    if (t == nullptr) {
      RuleStats zero;
      zero.tsl = tsl;
      return zero;
    }
    times.push_back(t);
  }
  return count_general(times, tsl, window);
}

RuleStats count_tsl(std::span<const Event> events, const Tsl& tsl, Timestamp window) {
  return count_tsl(OccurrenceIndex(events), tsl, window);
}

std::set<LogId> frequent_events(std::span<const Event> events,
                                std::size_t support_threshold) {
  std::unordered_map<LogId, std::size_t> counts;
  for (const Event& e : events) ++counts[e.log_id];
  std::set<LogId> out;
  for (const auto& [id, n] : counts) {
    if (n >= support_threshold) out.insert(id);
  }
  return out;
}

std::vector<Tsl> gen_candidates(const std::vector<Tsl>& frequent) {
  std::vector<Tsl> out;
  if (frequent.empty()) return out;
  const std::size_t m = frequent.front().size();
  for (const Tsl& t : frequent) {
    if (t.size() != m) throw std::invalid_argument("gen_candidates: mixed arities");
  }
  if (m == 1) {
    std::set<LogId> ids;
    for (const Tsl& t : frequent) ids.insert(t[0]);
    for (LogId a : ids) {
      for (LogId b : ids) {
        if (a != b) out.push_back({a, b});
      }
    }
    return out;
  }

  const std::unordered_set<Tsl, TslHash> known(frequent.begin(), frequent.end());
  // Group by the first m-1 elements so p[1..] can be joined with q[..m-1].
  std::map<Tsl, std::vector<LogId>> by_prefix;
  for (const Tsl& t : frequent) {
    by_prefix[Tsl(t.begin(), t.end() - 1)].push_back(t.back());
  }
  std::set<Tsl> unique;
  Tsl subset(m);
  for (const Tsl& p : frequent) {
    auto it = by_prefix.find(Tsl(p.begin() + 1, p.end()));
    if (it == by_prefix.end()) continue;
    for (LogId last : it->second) {
      if (std::find(p.begin(), p.end(), last) != p.end()) continue;
      Tsl candidate = p;
      candidate.push_back(last);
      bool closed = true;
      for (std::size_t drop = 0; drop <= m && closed; ++drop) {
        subset.clear();
        for (std::size_t i = 0; i <= m; ++i) {
          if (i != drop) subset.push_back(candidate[i]);
        }
        closed = known.count(subset) != 0;
      }
      if (closed) unique.insert(std::move(candidate));
    }
  }
  out.assign(unique.begin(), unique.end());
  return out;
}

RuleKind kind_of(const Tsl& tsl, const LogCatalog& catalog) {
  const NodeId first = catalog.at(tsl.front()).node_id;
  for (LogId id : tsl) {
    if (catalog.at(id).node_id != first) return RuleKind::kDistributed;
  }
  return RuleKind::kLocal;
}

void sort_rules(std::vector<RuleStats>& rules) {
  std::sort(rules.begin(), rules.end(), [](const RuleStats& a, const RuleStats& b) {
    if (a.tsl.size() != b.tsl.size()) return a.tsl.size() < b.tsl.size();
    return a.tsl < b.tsl;
  });
}

MiningResult mine_apriori(std::span<const Event> events, const MinerParams& params) {
  validate(params);
  const auto started = std::chrono::steady_clock::now();
  MiningResult result;
  const OccurrenceIndex index(events);
  const LogCatalog catalog(events);
  result.rules = mine_levelwise(index, index.log_ids(), params, result.candidates_counted);
  for (RuleStats& r : result.rules) r.kind = kind_of(r.tsl, catalog);
  sort_rules(result.rules);
  result.analysis_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

bool shares_group(LogId a, LogId b, const LogCatalog& catalog) {
  const LogInfo& x = catalog.at(a);
  const LogInfo& y = catalog.at(b);
  return x.node_id == y.node_id ||
         (!x.application.empty() && x.application == y.application) ||
         x.event_type == y.event_type;
}

MiningResult mine_apriori_s(std::span<const Event> events, const MinerParams& params) {
  validate(params);
  const auto started = std::chrono::steady_clock::now();
  MiningResult result;
  const OccurrenceIndex index(events);
  const LogCatalog catalog(events);

  std::map<NodeId, std::vector<LogId>> by_node;
  std::map<std::string, std::vector<LogId>> by_application;
  std::map<EventType, std::vector<LogId>> by_type;
  for (LogId id : index.log_ids()) {
    const LogInfo& info = catalog.at(id);
    by_node[info.node_id].push_back(id);
    if (!info.application.empty()) by_application[info.application].push_back(id);
    by_type[info.event_type].push_back(id);
  }

  std::map<Tsl, RuleStats> merged;
  for (const auto& [node, ids] : by_node) {
    for (RuleStats& r : mine_levelwise(index, ids, params, result.candidates_counted)) {
      r.kind = RuleKind::kLocal;
      merged.emplace(r.tsl, std::move(r));
    }
  }
  auto distributed_pass = [&](const std::vector<LogId>& ids) {
    for (RuleStats& r : mine_levelwise(index, ids, params, result.candidates_counted)) {
      if (kind_of(r.tsl, catalog) != RuleKind::kDistributed) continue;
      r.kind = RuleKind::kDistributed;
      merged.emplace(r.tsl, std::move(r));
    }
  };
  for (const auto& [app, ids] : by_application) distributed_pass(ids);
  for (const auto& [type, ids] : by_type) distributed_pass(ids);

  result.rules.reserve(merged.size());
  for (auto& [tsl, r] : merged) result.rules.push_back(std::move(r));
  sort_rules(result.rules);
  result.analysis_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

std::vector<RuleStats> extract_clusters(std::span<const RuleStats> rules,
                                        std::size_t support, double confidence,
                                        double posterior) {
  std::vector<RuleStats> out;
  for (const RuleStats& r : rules) {
    if (r.support_count >= support && r.confidence >= confidence &&
        r.posterior >= posterior) {
      out.push_back(r);
      out.back().cluster = true;
    }
  }
  return out;
}

void flag_clusters(std::vector<RuleStats>& rules, const MinerParams& p) {
  for (RuleStats& r : rules) {
    r.cluster = r.support_count >= p.cluster_support &&
                r.confidence >= p.cluster_confidence &&
                r.posterior >= p.cluster_posterior;
  }
}

void write_rules(std::ostream& out, std::span<const RuleStats> rules) {
  char buf[32];
  for (const RuleStats& r : rules) {
    out << r.arity() << '\t';
    for (std::size_t i = 0; i < r.tsl.size(); ++i) {
      if (i) out << ',';
      out << r.tsl[i];
    }
    out << '\t' << r.support_count << '\t' << r.posterior_count << '\t'
        << r.preceding_occurrences << '\t' << r.posterior_event_occurrences;
    std::snprintf(buf, sizeof buf, "\t%.6f", r.confidence);
    out << buf;
    std::snprintf(buf, sizeof buf, "\t%.6f", r.posterior);
    out << buf << '\t' << to_string(r.kind) << '\t' << (r.cluster ? 1 : 0) << '\n';
  }
}

std::vector<RuleStats> read_rules(std::istream& in) {
  std::vector<RuleStats> rules;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto cols = detail::split(line, '\t');
    auto bad = [&](const std::string& why) {
      return DataError("rules line " + std::to_string(lineno) + ": " + why);
    };
    if (cols.size() != 10) throw bad("expected 10 fields");
    RuleStats r;
    for (std::string_view id : detail::split(cols[1], ',')) {
      auto v = detail::parse_int<LogId>(id);
      if (!v) throw bad("bad log id");
      r.tsl.push_back(*v);
    }
    auto arity = detail::parse_int<std::size_t>(cols[0]);
    auto sup = detail::parse_int<std::size_t>(cols[2]);
    auto post = detail::parse_int<std::size_t>(cols[3]);
    auto pre = detail::parse_int<std::size_t>(cols[4]);
    auto pev = detail::parse_int<std::size_t>(cols[5]);
    if (!arity || !sup || !post || !pre || !pev || *arity != r.tsl.size()) {
      throw bad("malformed counts");
    }
    r.support_count = *sup;
    r.posterior_count = *post;
    r.preceding_occurrences = *pre;
    r.posterior_event_occurrences = *pev;
    finalize_ratios(r);
    if (cols[8] == "LOCAL") r.kind = RuleKind::kLocal;
    else if (cols[8] == "DISTRIBUTED") r.kind = RuleKind::kDistributed;
    else throw bad("bad rule kind");
    if (cols[9] != "0" && cols[9] != "1") throw bad("bad cluster flag");
    r.cluster = cols[9] == "1";
    rules.push_back(std::move(r));
  }
  return rules;
}

}  // namespace eventcorr
