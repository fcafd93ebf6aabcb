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

#include "eventcorr/id_registry.h"

#include <fstream>
#include <istream>
#include <ostream>

#include "eventcorr/errors.h"
#include "text_util.h"

namespace eventcorr {

EventId IdRegistry::assign_event_id(Severity severity, EventType type) {
  const auto key = std::make_pair(severity, type);
  auto it = event_ids_.find(key);
  if (it != event_ids_.end()) return it->second;
  const auto id = static_cast<EventId>(event_tuples_.size() + 1);
  event_ids_.emplace(key, id);
  event_tuples_.push_back(key);
  return id;
}

LogId IdRegistry::assign_log_id(NodeId node_id, EventId event_id,
                                const std::string& application,
                                const std::string& process_id) {
  if (event_id == 0 || event_id > event_tuples_.size()) {
    throw PipelineOrderError("log id requested for unregistered event id " +
                             std::to_string(event_id));
  }
  LogKey key{node_id, event_id, application, process_id};
  auto it = log_ids_.find(key);
  if (it != log_ids_.end()) return it->second;
  const auto id = static_cast<LogId>(log_tuples_.size() + 1);
  log_tuples_.push_back(key);
  log_ids_.emplace(std::move(key), id);
  return id;
}

NodeId IdRegistry::assign_node_id(const std::string& node_name) {
  auto it = node_ids_.find(node_name);
  if (it != node_ids_.end()) return it->second;
  while (node_names_.count(next_node_) != 0) ++next_node_;
  const NodeId id = next_node_++;
  node_ids_.emplace(node_name, id);
  node_names_.emplace(id, node_name);
  return id;
}

void IdRegistry::bind_node(const std::string& node_name, NodeId id) {
  if (id == 0) throw DataError("node id must be >= 1 for '" + node_name + "'");
  auto by_name = node_ids_.find(node_name);
  auto by_id = node_names_.find(id);
  if (by_name != node_ids_.end() && by_name->second == id) return;
  if (by_name != node_ids_.end() || by_id != node_names_.end()) {
    throw DataError("conflicting node binding " + node_name + " -> " +
                    std::to_string(id));
  }
  node_ids_.emplace(node_name, id);
  node_names_.emplace(id, node_name);
}

std::pair<Severity, EventType> IdRegistry::event_tuple(EventId id) const {
  if (id == 0 || id > event_tuples_.size()) {
    throw std::out_of_range("unknown event id " + std::to_string(id));
  }
  return event_tuples_[id - 1];
}

const LogKey& IdRegistry::log_tuple(LogId id) const {
  if (id == 0 || id > log_tuples_.size()) {
    throw std::out_of_range("unknown log id " + std::to_string(id));
  }
  return log_tuples_[id - 1];
}

const std::string& IdRegistry::node_name(NodeId id) const {
  auto it = node_names_.find(id);
  if (it == node_names_.end()) {
    throw std::out_of_range("unknown node id " + std::to_string(id));
  }
  return it->second;
}

std::optional<NodeId> IdRegistry::find_node(const std::string& node_name) const {
  auto it = node_ids_.find(node_name);
  if (it == node_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<LogId> IdRegistry::find_log(const LogKey& key) const {
  auto it = log_ids_.find(key);
  if (it == log_ids_.end()) return std::nullopt;
  return it->second;
}

Event IdRegistry::make_event(LogId id, Timestamp ts, std::string user) const {
  const LogKey& key = log_tuple(id);
  const auto [severity, type] = event_tuple(key.event_id);
  Event e;
  e.timestamp = ts;
  e.log_id = id;
  e.node_id = key.node_id;
  e.event_id = key.event_id;
  e.severity = severity;
  e.event_type = type;
  e.application = key.application;
  e.process_id = key.process_id;
  e.user = std::move(user);
  return e;
}

LogInfo IdRegistry::log_info(LogId id) const {
  const LogKey& key = log_tuple(id);
  const auto [severity, type] = event_tuple(key.event_id);
  LogInfo info;
  info.log_id = id;
  info.node_id = key.node_id;
  info.event_id = key.event_id;
  info.severity = severity;
  info.event_type = type;
  info.application = key.application;
  info.process_id = key.process_id;
  return info;
}

void IdRegistry::write_event_table(std::ostream& out) const {
  out << "# event_id\tseverity\tevent_type\n";
  for (std::size_t i = 0; i < event_tuples_.size(); ++i) {
    out << (i + 1) << '\t' << to_string(event_tuples_[i].first) << '\t'
        << to_string(event_tuples_[i].second) << '\n';
  }
}

void IdRegistry::write_log_table(std::ostream& out) const {
  out << "# log_id\tnode_id\tevent_id\tapplication\tprocess_id\n";
  for (std::size_t i = 0; i < log_tuples_.size(); ++i) {
    const LogKey& k = log_tuples_[i];
    out << (i + 1) << '\t' << k.node_id << '\t' << k.event_id << '\t'
        << detail::sanitize_field(k.application) << '\t'
        << detail::sanitize_field(k.process_id) << '\n';
  }
}

void IdRegistry::write_node_table(std::ostream& out) const {
  out << "# node_id\tnode_name\n";
  for (const auto& [id, name] : node_names_) {
    out << id << '\t' << detail::sanitize_field(name) << '\n';
  }
}

namespace {

template <typename Fn>
void for_each_record(std::istream& in, std::size_t fields, const char* table,
                     Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto cols = detail::split(line, '\t');
    if (cols.size() != fields) {
      throw DataError(std::string(table) + " line " + std::to_string(lineno) +
                      ": expected " + std::to_string(fields) + " fields");
    }
    fn(cols, lineno);
  }
}

[[noreturn]] void bad_record(const char* table, std::size_t lineno,
                             const std::string& why) {
  throw DataError(std::string(table) + " line " + std::to_string(lineno) + ": " +
                  why);
}

}  // namespace

void IdRegistry::read_event_table(std::istream& in) {
  for_each_record(in, 3, "event table", [&](const auto& cols, std::size_t n) {
    auto id = detail::parse_int<EventId>(cols[0]);
    auto sev = parse_severity(cols[1]);
    auto type = parse_event_type(cols[2]);
    if (!id || !sev || !type) bad_record("event table", n, "malformed record");
    if (assign_event_id(*sev, *type) != *id) {
      bad_record("event table", n, "ids are not dense in first-seen order");
    }
  });
}

void IdRegistry::read_log_table(std::istream& in) {
  for_each_record(in, 5, "log table", [&](const auto& cols, std::size_t n) {
    auto id = detail::parse_int<LogId>(cols[0]);
    auto node = detail::parse_int<NodeId>(cols[1]);
    auto event = detail::parse_int<EventId>(cols[2]);
    if (!id || !node || !event) bad_record("log table", n, "malformed record");
    if (assign_log_id(*node, *event, std::string(cols[3]), std::string(cols[4])) !=
        *id) {
      bad_record("log table", n, "ids are not dense in first-seen order");
    }
  });
}

void IdRegistry::read_node_table(std::istream& in) {
  for_each_record(in, 2, "node table", [&](const auto& cols, std::size_t n) {
    auto id = detail::parse_int<NodeId>(cols[0]);
    if (!id) bad_record("node table", n, "malformed record");
    bind_node(std::string(cols[1]), *id);
  });
  next_node_ = node_names_.empty() ? 1 : node_names_.rbegin()->first + 1;
}

void IdRegistry::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream events(dir / "event_ids.tsv", std::ios::binary);
  std::ofstream logs(dir / "log_ids.tsv", std::ios::binary);
  std::ofstream nodes(dir / "node_ids.tsv", std::ios::binary);
  write_event_table(events);
  write_log_table(logs);
  write_node_table(nodes);
  if (!events || !logs || !nodes) {
    throw Error("failed writing registry tables under " + dir.string());
  }
}

IdRegistry IdRegistry::load(const std::filesystem::path& dir) {
  IdRegistry reg;
  for (const char* name : {"event_ids.tsv", "log_ids.tsv", "node_ids.tsv"}) {
    if (!std::filesystem::exists(dir / name)) {
      throw DataError("missing registry table " + (dir / name).string());
    }
  }
  std::ifstream events(dir / "event_ids.tsv");
  std::ifstream logs(dir / "log_ids.tsv");
  std::ifstream nodes(dir / "node_ids.tsv");
  reg.read_event_table(events);
  reg.read_log_table(logs);
  reg.read_node_table(nodes);
  return reg;
}

}  // namespace eventcorr
