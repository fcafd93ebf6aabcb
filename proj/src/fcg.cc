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

#include "eventcorr/fcg.h"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <set>

#include <json.hpp>

#include "eventcorr/errors.h"
#include "text_util.h"

namespace eventcorr {

std::string_view to_string(VertexKind kind) {
  return kind == VertexKind::kDominant ? "DOMINANT" : "RECESSIVE";
}
std::string_view to_string(EdgeKind kind) {
  return kind == EdgeKind::kDominant ? "DOMINANT" : "RECESSIVE";
}
std::string_view to_string(EdgeRole role) {
  return role == EdgeRole::kRule ? "RULE" : "MEMBERSHIP";
}

std::size_t Fcg::count(VertexKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      vertices.begin(), vertices.end(), [&](const Vertex& v) { return v.kind == kind; }));
}

std::size_t Fcg::count(EdgeKind kind, EdgeRole role) const {
  return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](const Edge& e) {
    return e.kind == kind && e.role == role;
  }));
}

std::optional<std::vector<VertexId>> Fcg::topological_order() const {
  std::vector<std::size_t> indegree(vertices.size(), 0);
  std::vector<std::vector<VertexId>> out(vertices.size());
  for (const Edge& e : edges) {
    ++indegree[e.head];
    out[e.tail].push_back(e.head);
  }
  std::priority_queue<VertexId, std::vector<VertexId>, std::greater<>> ready;
  for (VertexId v = 0; v < vertices.size(); ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<VertexId> order;
  order.reserve(vertices.size());
  while (!ready.empty()) {
    const VertexId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (VertexId h : out[v]) {
      if (--indegree[h] == 0) ready.push(h);
    }
  }
  if (order.size() != vertices.size()) return std::nullopt;
  return order;
}

std::vector<RuleStats> Fcg::rules() const {
  std::vector<RuleStats> out;
  for (const Edge& e : edges) {
    if (e.role != EdgeRole::kRule) continue;
    const Vertex& tail = vertices[e.tail];
    RuleStats r;
    r.tsl = tail.kind == VertexKind::kDominant ? Tsl{tail.log_id} : tail.chain;
    r.tsl.push_back(vertices[e.head].log_id);
    r.support_count = e.support_count;
    r.posterior_count = e.posterior_count;
    r.preceding_occurrences = e.preceding_occurrences;
    r.posterior_event_occurrences = e.posterior_event_occurrences;
    r.confidence = e.confidence;
    r.posterior = e.posterior;
    r.cluster = e.cluster;
    r.kind = scope.kind;
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

// Mutable graph for one scope while rules are being inserted.
class ScopeGraph {
 public:
  struct PendingEdge {
    std::size_t tail;
    std::size_t head;
    EdgeRole role;
    std::size_t order;
    const RuleStats* rule;
  };

  std::optional<std::size_t> find(LogId id) const {
    auto it = dominant_.find(id);
    if (it == dominant_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::size_t> find(const Tsl& chain) const {
    auto it = recessive_.find(chain);
    if (it == recessive_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t dominant(LogId id) {
    auto [it, inserted] = dominant_.try_emplace(id, keys_.size());
    if (inserted) add_vertex(Key{id, {}});
    return it->second;
  }
  std::pair<std::size_t, bool> recessive(const Tsl& chain) {
    auto [it, inserted] = recessive_.try_emplace(chain, keys_.size());
    if (inserted) add_vertex(Key{0, chain});
    return {it->second, inserted};
  }

  void connect(std::size_t tail, std::size_t head, EdgeRole role, std::size_t order,
               const RuleStats* rule) {
    out_[tail].push_back(head);
    edges_.push_back({tail, head, role, order, rule});
  }

  // Whether `from` reaches any vertex in `targets` along directed edges.
  bool reaches(std::size_t from, const std::vector<std::size_t>& targets) {
    if (out_[from].empty()) return false;
    ++stamp_;
    for (std::size_t t : targets) seen_[t] = stamp_ + kTargetBit;
    std::vector<std::size_t> stack{from};
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      if (seen_[v] == stamp_ + kTargetBit) return true;
      if (seen_[v] == stamp_) continue;
      seen_[v] = stamp_;
      for (std::size_t h : out_[v]) {
        if (seen_[h] != stamp_) stack.push_back(h);
      }
    }
    return false;
  }

  struct Key {
    LogId log_id;
    Tsl chain;  // empty for dominant vertices
  };

  const std::vector<Key>& keys() const { return keys_; }
  const std::vector<PendingEdge>& edges() const { return edges_; }

 private:
  static constexpr std::uint64_t kTargetBit = 1ull << 40;

  void add_vertex(Key key) {
    keys_.push_back(std::move(key));
    out_.emplace_back();
    seen_.push_back(0);
  }

  std::map<LogId, std::size_t> dominant_;
  std::map<Tsl, std::size_t> recessive_;
  std::vector<Key> keys_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<PendingEdge> edges_;
  std::vector<std::uint64_t> seen_;
  std::uint64_t stamp_ = 0;
};

bool insert_rule(ScopeGraph& g, const RuleStats& rule) {
  const Tsl chain(rule.tsl.begin(), rule.tsl.end() - 1);
  const LogId head_id = rule.tsl.back();
  if (auto head = g.find(head_id)) {
    std::vector<std::size_t> targets;
    for (LogId id : chain) {
      if (auto v = g.find(id)) targets.push_back(*v);
    }
    if (!targets.empty() && g.reaches(*head, targets)) return false;
  }
  if (chain.size() == 1) {
    const std::size_t tail = g.dominant(chain[0]);
    const std::size_t head = g.dominant(head_id);
    g.connect(tail, head, EdgeRole::kRule, 0, &rule);
    return true;
  }
  std::vector<std::size_t> members;
  for (LogId id : chain) members.push_back(g.dominant(id));
  const std::size_t head = g.dominant(head_id);
  const auto [rec, created] = g.recessive(chain);
  if (created) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      g.connect(members[i], rec, EdgeRole::kMembership, i, nullptr);
    }
  }
  g.connect(rec, head, EdgeRole::kRule, 0, &rule);
  return true;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

std::vector<Fcg> split_components(const ScopeGraph& g, FcgScope scope,
                                  const LogCatalog& catalog) {
  const auto& keys = g.keys();
  std::vector<std::size_t> parent(keys.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& e : g.edges()) {
    parent[find_root(parent, e.tail)] = find_root(parent, e.head);
  }
  std::map<std::size_t, std::vector<std::size_t>> members;
  for (std::size_t v = 0; v < keys.size(); ++v) members[find_root(parent, v)].push_back(v);

  std::vector<Fcg> out;
  for (auto& [root, vs] : members) {
    // Dominant vertices by log id, then recessive vertices by chain.
    std::sort(vs.begin(), vs.end(), [&](std::size_t a, std::size_t b) {
      const bool ra = !keys[a].chain.empty();
      const bool rb = !keys[b].chain.empty();
      if (ra != rb) return !ra;
      return ra ? keys[a].chain < keys[b].chain : keys[a].log_id < keys[b].log_id;
    });
    std::map<std::size_t, VertexId> local;
    Fcg fcg;
    fcg.scope = scope;
    for (std::size_t gid : vs) {
      Vertex v;
      v.id = static_cast<VertexId>(fcg.vertices.size());
      if (keys[gid].chain.empty()) {
        const LogInfo& info = catalog.at(keys[gid].log_id);
        v.kind = VertexKind::kDominant;
        v.log_id = info.log_id;
        v.node_id = info.node_id;
        v.event_id = info.event_id;
        v.support = info.occurrences;
      } else {
        v.kind = VertexKind::kRecessive;
        v.chain = keys[gid].chain;
      }
      local[gid] = v.id;
      fcg.vertices.push_back(std::move(v));
    }
    for (const auto& pe : g.edges()) {
      auto t = local.find(pe.tail);
      if (t == local.end()) continue;
      Edge e;
      e.id = static_cast<EdgeId>(fcg.edges.size());
      e.tail = t->second;
      e.head = local.at(pe.head);
      e.role = pe.role;
      e.kind = fcg.vertices[e.tail].kind == VertexKind::kDominant &&
                       fcg.vertices[e.head].kind == VertexKind::kDominant
                   ? EdgeKind::kDominant
                   : EdgeKind::kRecessive;
      if (pe.rule != nullptr) {
        e.support_count = pe.rule->support_count;
        e.posterior_count = pe.rule->posterior_count;
        e.preceding_occurrences = pe.rule->preceding_occurrences;
        e.posterior_event_occurrences = pe.rule->posterior_event_occurrences;
        e.confidence = pe.rule->confidence;
        e.posterior = pe.rule->posterior;
        e.cluster = pe.rule->cluster;
      }
      e.order = pe.order;
      fcg.vertices[e.tail].children.push_back(e.head);
      fcg.edges.push_back(e);
    }
    std::vector<bool> has_incoming(fcg.vertices.size(), false);
    for (Vertex& v : fcg.vertices) {
      std::sort(v.children.begin(), v.children.end());
      v.children.erase(std::unique(v.children.begin(), v.children.end()), v.children.end());
    }
    for (const Edge& e : fcg.edges) has_incoming[e.head] = true;
    for (VertexId v = 0; v < fcg.vertices.size(); ++v) {
      if (!has_incoming[v]) {
        fcg.entrance = v;
        break;
      }
    }
    out.push_back(std::move(fcg));
  }
  return out;
}

}  // namespace

FcgSet build_fcgs(std::span<const RuleStats> rules, const LogCatalog& catalog) {
  std::vector<const RuleStats*> ordered;
  for (const RuleStats& r : rules) {
    if (r.tsl.size() >= 2) ordered.push_back(&r);
  }
  std::stable_sort(ordered.begin(), ordered.end(), [](const RuleStats* a, const RuleStats* b) {
    if (a->support_count != b->support_count) return a->support_count > b->support_count;
    if (a->confidence != b->confidence) return a->confidence > b->confidence;
    return a->tsl < b->tsl;
  });

  std::map<NodeId, ScopeGraph> local;
  ScopeGraph distributed;
  FcgSet result;
  for (const RuleStats* r : ordered) {
    const bool is_local = kind_of(r->tsl, catalog) == RuleKind::kLocal;
    ScopeGraph& g = is_local ? local[catalog.at(r->tsl.front()).node_id] : distributed;
    if (!insert_rule(g, *r)) {
      result.skipped.push_back({*r, "would close a directed cycle"});
    }
  }

  for (auto& [node, g] : local) {
    for (Fcg& f : split_components(g, {RuleKind::kLocal, node}, catalog)) {
      result.fcgs.push_back(std::move(f));
    }
  }
  for (Fcg& f : split_components(distributed, {RuleKind::kDistributed, 0}, catalog)) {
    result.fcgs.push_back(std::move(f));
  }
  for (std::size_t i = 0; i < result.fcgs.size(); ++i) {
    result.fcgs[i].id = static_cast<FcgId>(i + 1);
  }
  result.index = build_index(result.fcgs);
  return result;
}

FcgIndex build_index(const std::vector<Fcg>& fcgs) {
  FcgIndex index;
  for (const Fcg& f : fcgs) {
    for (const Vertex& v : f.vertices) {
      if (v.kind == VertexKind::kDominant) index[v.log_id].push_back({f.id, v.id});
    }
  }
  return index;
}

std::vector<FcgPosition> lookup(const FcgIndex& index, LogId log_id) {
  auto it = index.find(log_id);
  return it == index.end() ? std::vector<FcgPosition>{} : it->second;
}

std::vector<RecoveredEvent> recover_missing(std::span<const Event> events,
                                            std::span<const RuleStats> clusters,
                                            const LogCatalog& catalog,
                                            Timestamp window) {
  const OccurrenceIndex index(events);
  std::set<std::pair<Timestamp, LogId>> emitted;
  std::vector<RecoveredEvent> out;
  for (const RuleStats& c : clusters) {
    if (c.tsl.size() != 2) continue;
    const LogId preceding = c.tsl[0];
    const auto* heads = index.find(c.tsl[1]);
    if (heads == nullptr) continue;
    const auto* tails = index.find(preceding);
    const LogInfo* info = catalog.find(preceding);
    if (info == nullptr) continue;
    for (Timestamp t : *heads) {
      bool covered = false;
      if (tails != nullptr) {
        auto it = std::lower_bound(tails->begin(), tails->end(), t);
        covered = it != tails->begin() && t - *std::prev(it) <= window;
      }
      if (covered || !emitted.emplace(t, preceding).second) continue;
      Event e;
      e.timestamp = t;
      e.log_id = preceding;
      e.node_id = info->node_id;
      e.event_id = info->event_id;
      e.severity = info->severity;
      e.event_type = info->event_type;
      e.application = info->application;
      e.process_id = info->process_id;
      out.push_back({std::move(e), c.tsl});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const RecoveredEvent& a, const RecoveredEvent& b) {
    return std::tie(a.event.timestamp, a.event.log_id) < std::tie(b.event.timestamp, b.event.log_id);
  });
  return out;
}

namespace {

using nlohmann::json;

json to_json(const Fcg& f) {
  json doc;
  doc["fcg_id"] = f.id;
  doc["scope"] = to_string(f.scope.kind);
  if (f.scope.kind == RuleKind::kLocal) doc["node_id"] = f.scope.node_id;
  doc["entrance"] = f.entrance;
  json vertices = json::array();
  for (const Vertex& v : f.vertices) {
    json jv;
    jv["id"] = v.id;
    jv["kind"] = to_string(v.kind);
    if (v.kind == VertexKind::kDominant) {
      jv["log_id"] = v.log_id;
      jv["node_id"] = v.node_id;
      jv["event_id"] = v.event_id;
      jv["support"] = v.support;
    } else {
      jv["chain"] = v.chain;
    }
    jv["children"] = v.children;
    vertices.push_back(std::move(jv));
  }
  doc["vertices"] = std::move(vertices);
  json edges = json::array();
  for (const Edge& e : f.edges) {
    json je;
    je["id"] = e.id;
    je["tail"] = e.tail;
    je["head"] = e.head;
    je["kind"] = to_string(e.kind);
    je["role"] = to_string(e.role);
    if (e.role == EdgeRole::kRule) {
      je["support_count"] = e.support_count;
      je["posterior_count"] = e.posterior_count;
      je["preceding_occurrences"] = e.preceding_occurrences;
      je["posterior_event_occurrences"] = e.posterior_event_occurrences;
      je["confidence"] = e.confidence;
      je["posterior"] = e.posterior;
      je["cluster"] = e.cluster;
    } else {
      je["order"] = e.order;
    }
    edges.push_back(std::move(je));
  }
  doc["edges"] = std::move(edges);
  return doc;
}

Fcg from_json(const json& doc) {
  Fcg f;
  f.id = doc.at("fcg_id").get<FcgId>();
  const std::string scope = doc.at("scope").get<std::string>();
  if (scope == "LOCAL") {
    f.scope = {RuleKind::kLocal, doc.at("node_id").get<NodeId>()};
  } else if (scope == "DISTRIBUTED") {
    f.scope = {RuleKind::kDistributed, 0};
  } else {
    throw DataError("fcg " + std::to_string(f.id) + ": bad scope " + scope);
  }
  f.entrance = doc.at("entrance").get<VertexId>();
  for (const json& jv : doc.at("vertices")) {
    Vertex v;
    v.id = jv.at("id").get<VertexId>();
    const std::string kind = jv.at("kind").get<std::string>();
    if (kind == "DOMINANT") {
      v.kind = VertexKind::kDominant;
      v.log_id = jv.at("log_id").get<LogId>();
      v.node_id = jv.at("node_id").get<NodeId>();
      v.event_id = jv.at("event_id").get<EventId>();
      v.support = jv.at("support").get<std::size_t>();
    } else {
      v.kind = VertexKind::kRecessive;
      v.chain = jv.at("chain").get<std::vector<LogId>>();
    }
    v.children = jv.at("children").get<std::vector<VertexId>>();
    if (v.id != f.vertices.size()) throw DataError("fcg vertex ids must be dense");
    f.vertices.push_back(std::move(v));
  }
  for (const json& je : doc.at("edges")) {
    Edge e;
    e.id = je.at("id").get<EdgeId>();
    e.tail = je.at("tail").get<VertexId>();
    e.head = je.at("head").get<VertexId>();
    e.kind = je.at("kind").get<std::string>() == "DOMINANT" ? EdgeKind::kDominant
                                                           : EdgeKind::kRecessive;
    e.role = je.at("role").get<std::string>() == "RULE" ? EdgeRole::kRule
                                                        : EdgeRole::kMembership;
    if (e.role == EdgeRole::kRule) {
      e.support_count = je.at("support_count").get<std::size_t>();
      e.posterior_count = je.at("posterior_count").get<std::size_t>();
      e.preceding_occurrences = je.at("preceding_occurrences").get<std::size_t>();
      e.posterior_event_occurrences = je.at("posterior_event_occurrences").get<std::size_t>();
      e.confidence = je.at("confidence").get<double>();
      e.posterior = je.at("posterior").get<double>();
      e.cluster = je.at("cluster").get<bool>();
    } else {
      e.order = je.at("order").get<std::size_t>();
    }
    if (e.id != f.edges.size() || e.tail >= f.vertices.size() ||
        e.head >= f.vertices.size()) {
      throw DataError("fcg " + std::to_string(f.id) + ": malformed edge");
    }
    f.edges.push_back(e);
  }
  return f;
}

}  // namespace

void write_fcgs(std::ostream& out, const std::vector<Fcg>& fcgs) {
  for (const Fcg& f : fcgs) out << to_json(f).dump() << '\n';
}

std::vector<Fcg> read_fcgs(std::istream& in) {
  std::vector<Fcg> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    try {
      out.push_back(from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw DataError(std::string("malformed fcg document: ") + e.what());
    }
    if (out.back().id != out.size()) throw DataError("fcg ids must be dense from 1");
  }
  return out;
}

void write_index(std::ostream& out, const FcgIndex& index) {
  for (const auto& [log_id, positions] : index) {
    out << log_id << '\t';
    for (std::size_t i = 0; i < positions.size(); ++i) {
      if (i) out << ',';
      out << positions[i].fcg_id << ':' << positions[i].vertex_id;
    }
    out << '\n';
  }
}

FcgIndex read_index(std::istream& in) {
  FcgIndex index;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cols = detail::split(line, '\t');
    auto id = cols.size() == 2 ? detail::parse_int<LogId>(cols[0]) : std::nullopt;
    if (!id) throw DataError("malformed index line: " + line);
    auto& positions = index[*id];
    for (std::string_view pos : detail::split(cols[1], ',')) {
      auto parts = detail::split(pos, ':');
      auto f = parts.size() == 2 ? detail::parse_int<FcgId>(parts[0]) : std::nullopt;
      auto v = parts.size() == 2 ? detail::parse_int<VertexId>(parts[1]) : std::nullopt;
      if (!f || !v) throw DataError("malformed index entry: " + std::string(pos));
      positions.push_back({*f, *v});
    }
  }
  return index;
}

}  // namespace eventcorr
