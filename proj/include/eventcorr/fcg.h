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

#ifndef EVENTCORR_FCG_H_
#define EVENTCORR_FCG_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eventcorr/event.h"
#include "eventcorr/miner.h"

namespace eventcorr {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using FcgId = std::uint32_t;

enum class VertexKind : std::uint8_t { kDominant, kRecessive };
enum class EdgeKind : std::uint8_t { kDominant, kRecessive };
// Rule edges carry a mined rule; membership edges link a chain element to
// its recessive vertex.
enum class EdgeRole : std::uint8_t { kRule, kMembership };

std::string_view to_string(VertexKind kind);
std::string_view to_string(EdgeKind kind);
std::string_view to_string(EdgeRole role);

struct Vertex {
  VertexId id = 0;
  VertexKind kind = VertexKind::kDominant;
  // Dominant vertices.
  LogId log_id = 0;
  NodeId node_id = 0;
  EventId event_id = 0;
  std::size_t support = 0;  // occurrences of log_id
  // Recessive vertices: the ordered preceding chain, e.g. A^B.
  std::vector<LogId> chain;
  std::vector<VertexId> children;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Edge {
  EdgeId id = 0;
  VertexId tail = 0;
  VertexId head = 0;
  EdgeKind kind = EdgeKind::kDominant;
  EdgeRole role = EdgeRole::kRule;
  // Rule edges.
  std::size_t support_count = 0;
  std::size_t posterior_count = 0;
  std::size_t preceding_occurrences = 0;
  std::size_t posterior_event_occurrences = 0;
  double confidence = 0.0;
  double posterior = 0.0;
  bool cluster = false;
  // Membership edges: position of the tail inside the chain.
  std::size_t order = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct FcgScope {
  RuleKind kind = RuleKind::kLocal;
  NodeId node_id = 0;  // LOCAL only

  friend bool operator==(const FcgScope&, const FcgScope&) = default;
};

// An indexed DAG of correlated events. Vertex and edge ids are dense
// positions in `vertices` and `edges`.
struct Fcg {
  FcgId id = 0;
  FcgScope scope;
  VertexId entrance = 0;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;

  std::size_t count(VertexKind kind) const;
  std::size_t count(EdgeKind kind, EdgeRole role) const;
  // Topological order of vertex ids, or nullopt if the graph has a cycle.
  std::optional<std::vector<VertexId>> topological_order() const;
  // The rule each rule edge stands for.
  std::vector<RuleStats> rules() const;

  friend bool operator==(const Fcg&, const Fcg&) = default;
};

struct FcgPosition {
  FcgId fcg_id = 0;
  VertexId vertex_id = 0;

  friend bool operator==(const FcgPosition&, const FcgPosition&) = default;
  auto operator<=>(const FcgPosition&) const = default;
};

using FcgIndex = std::map<LogId, std::vector<FcgPosition>>;

struct SkippedRule {
  RuleStats rule;
  std::string reason;
};

struct FcgSet {
  std::vector<Fcg> fcgs;  // fcgs[i].id == i + 1
  FcgIndex index;
  std::vector<SkippedRule> skipped;

  const Fcg& at(FcgId id) const { return fcgs.at(id - 1); }
};

// Local rules give one LOCAL graph per node and weakly connected component,
// distributed rules one DISTRIBUTED graph per component. Rules are inserted
// by descending (support, confidence) then ascending tsl; a rule whose edges
// would close a directed cycle is skipped and reported.
FcgSet build_fcgs(std::span<const RuleStats> rules, const LogCatalog& catalog);

std::vector<FcgPosition> lookup(const FcgIndex& index, LogId log_id);

struct RecoveredEvent {
  Event event;          // the inferred preceding event
  Tsl cluster;          // the 2-ary cluster that implied it
};

// For every 2-ary cluster (A, B): each B without an A in the preceding
// `window` seconds implies a missing A, timestamped at that B.
std::vector<RecoveredEvent> recover_missing(std::span<const Event> events,
                                            std::span<const RuleStats> clusters,
                                            const LogCatalog& catalog,
                                            Timestamp window);

// One JSON document per line per graph.
void write_fcgs(std::ostream& out, const std::vector<Fcg>& fcgs);
std::vector<Fcg> read_fcgs(std::istream& in);
// log_id <TAB> fcg:vertex[,fcg:vertex...]
void write_index(std::ostream& out, const FcgIndex& index);
FcgIndex read_index(std::istream& in);
FcgIndex build_index(const std::vector<Fcg>& fcgs);

}  // namespace eventcorr

#endif  // EVENTCORR_FCG_H_
