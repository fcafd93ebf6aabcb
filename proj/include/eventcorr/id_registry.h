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

#ifndef EVENTCORR_ID_REGISTRY_H_
#define EVENTCORR_ID_REGISTRY_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "eventcorr/event.h"

namespace eventcorr {

struct LogKey {
  NodeId node_id = 0;
  EventId event_id = 0;
  std::string application;
  std::string process_id;

  auto operator<=>(const LogKey&) const = default;
};

// Injective id assignment for (severity, type) -> event id and
// (node, event id, application, process id) -> log id. Ids are dense and
// handed out in first-seen order starting at 1. Node names get the same
// treatment so that node ids are reproducible across runs.
class IdRegistry {
 public:
  EventId assign_event_id(Severity severity, EventType type);
  // Throws PipelineOrderError if `event_id` was never assigned.
  LogId assign_log_id(NodeId node_id, EventId event_id,
                      const std::string& application,
                      const std::string& process_id);
  NodeId assign_node_id(const std::string& node_name);
  // Pins a node name to a caller-chosen id. Throws DataError if either side
  // is already bound to something else.
  void bind_node(const std::string& node_name, NodeId id);

  std::pair<Severity, EventType> event_tuple(EventId id) const;
  const LogKey& log_tuple(LogId id) const;
  const std::string& node_name(NodeId id) const;
  std::optional<NodeId> find_node(const std::string& node_name) const;
  std::optional<LogId> find_log(const LogKey& key) const;

  std::size_t event_count() const { return event_tuples_.size(); }
  std::size_t log_count() const { return log_tuples_.size(); }
  std::size_t node_count() const { return node_names_.size(); }

  // Builds a fully populated Event for a log id.
  Event make_event(LogId id, Timestamp ts, std::string user = {}) const;
  LogInfo log_info(LogId id) const;

  // Three tab-separated tables: event ids, log ids, node names.
  void save(const std::filesystem::path& dir) const;
  static IdRegistry load(const std::filesystem::path& dir);

  void write_event_table(std::ostream& out) const;
  void write_log_table(std::ostream& out) const;
  void write_node_table(std::ostream& out) const;
  void read_event_table(std::istream& in);
  void read_log_table(std::istream& in);
  void read_node_table(std::istream& in);

  friend bool operator==(const IdRegistry&, const IdRegistry&) = default;

 private:
  std::map<std::pair<Severity, EventType>, EventId> event_ids_;
  std::vector<std::pair<Severity, EventType>> event_tuples_;  // index id-1
  std::map<LogKey, LogId> log_ids_;
  std::vector<LogKey> log_tuples_;
  std::map<std::string, NodeId> node_ids_;
  std::map<NodeId, std::string> node_names_;
  NodeId next_node_ = 1;
};

}  // namespace eventcorr

#endif  // EVENTCORR_ID_REGISTRY_H_
