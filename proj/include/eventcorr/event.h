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

#ifndef EVENTCORR_EVENT_H_
#define EVENTCORR_EVENT_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace eventcorr {

using Timestamp = std::int64_t;  // seconds since the epoch, UTC
using LogId = std::uint32_t;
using NodeId = std::uint32_t;
using EventId = std::uint32_t;

// Ordered by increasing gravity.
enum class Severity : std::uint8_t { kInfo, kWarning, kError, kFailure, kFault };

enum class EventType : std::uint8_t {
  kHardware,
  kSystem,
  kApplication,
  kFilesystem,
  kNetwork
};

inline constexpr std::array<Severity, 5> kAllSeverities = {
    Severity::kInfo, Severity::kWarning, Severity::kError, Severity::kFailure,
    Severity::kFault};
inline constexpr std::array<EventType, 5> kAllEventTypes = {
    EventType::kHardware, EventType::kSystem, EventType::kApplication,
    EventType::kFilesystem, EventType::kNetwork};

// Upper-case canonical names ("ERROR", "FILESYSTEM").
std::string_view to_string(Severity s);
std::string_view to_string(EventType t);
// Case-insensitive.
std::optional<Severity> parse_severity(std::string_view text);
std::optional<EventType> parse_event_type(std::string_view text);

// One normalized log record.
struct Event {
  Timestamp timestamp = 0;
  LogId log_id = 0;
  NodeId node_id = 0;
  EventId event_id = 0;
  Severity severity = Severity::kInfo;
  EventType event_type = EventType::kSystem;
  std::string application;
  std::string process_id;
  std::string user;

  friend bool operator==(const Event&, const Event&) = default;
};

bool is_time_ordered(std::span<const Event> events);

// Static attributes shared by every occurrence of one log id, plus its
// occurrence count in the stream the catalog was built from.
struct LogInfo {
  LogId log_id = 0;
  NodeId node_id = 0;
  EventId event_id = 0;
  Severity severity = Severity::kInfo;
  EventType event_type = EventType::kSystem;
  std::string application;
  std::string process_id;
  std::size_t occurrences = 0;
};

class LogCatalog {
 public:
  LogCatalog() = default;
  explicit LogCatalog(std::span<const Event> events) { add(events); }

  void add(std::span<const Event> events);
  void add(const Event& event);

  const LogInfo* find(LogId id) const;
  const LogInfo& at(LogId id) const;
  bool contains(LogId id) const { return find(id) != nullptr; }
  std::size_t size() const { return infos_.size(); }

  std::vector<LogId> ids() const;  // ascending

 private:
  std::unordered_map<LogId, LogInfo> infos_;
};

}  // namespace eventcorr

#endif  // EVENTCORR_EVENT_H_
