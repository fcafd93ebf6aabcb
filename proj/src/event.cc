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

#include "eventcorr/event.h"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace eventcorr {

namespace {

constexpr std::array<std::string_view, 5> kSeverityNames = {
    "INFO", "WARNING", "ERROR", "FAILURE", "FAULT"};
constexpr std::array<std::string_view, 5> kTypeNames = {
    "HARDWARE", "SYSTEM", "APPLICATION", "FILESYSTEM", "NETWORK"};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::toupper(static_cast<unsigned char>(x)) ==
                  std::toupper(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::string_view to_string(Severity s) {
  return kSeverityNames[static_cast<std::size_t>(s)];
}

std::string_view to_string(EventType t) {
  return kTypeNames[static_cast<std::size_t>(t)];
}

std::optional<Severity> parse_severity(std::string_view text) {
  for (std::size_t i = 0; i < kSeverityNames.size(); ++i) {
    if (iequals(text, kSeverityNames[i])) return static_cast<Severity>(i);
  }
  return std::nullopt;
}

std::optional<EventType> parse_event_type(std::string_view text) {
  for (std::size_t i = 0; i < kTypeNames.size(); ++i) {
    if (iequals(text, kTypeNames[i])) return static_cast<EventType>(i);
  }
  return std::nullopt;
}

bool is_time_ordered(std::span<const Event> events) {
  return std::is_sorted(events.begin(), events.end(),
                        [](const Event& a, const Event& b) {
                          return a.timestamp < b.timestamp;
                        });
}

void LogCatalog::add(std::span<const Event> events) {
  for (const Event& e : events) add(e);
}

void LogCatalog::add(const Event& e) {
  auto [it, inserted] = infos_.try_emplace(e.log_id);
  LogInfo& info = it->second;
  if (inserted) {
    info.log_id = e.log_id;
    info.node_id = e.node_id;
    info.event_id = e.event_id;
    info.severity = e.severity;
    info.event_type = e.event_type;
    info.application = e.application;
    info.process_id = e.process_id;
  }
  ++info.occurrences;
}

const LogInfo* LogCatalog::find(LogId id) const {
  auto it = infos_.find(id);
  return it == infos_.end() ? nullptr : &it->second;
}

const LogInfo& LogCatalog::at(LogId id) const {
  const LogInfo* info = find(id);
  if (info == nullptr) {
    throw std::out_of_range("log id " + std::to_string(id) + " not in catalog");
  }
  return *info;
}

std::vector<LogId> LogCatalog::ids() const {
  std::vector<LogId> out;
  out.reserve(infos_.size());
  for (const auto& [id, info] : infos_) out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace eventcorr
