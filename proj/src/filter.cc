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

#include "eventcorr/filter.h"

#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>

#include "eventcorr/errors.h"
#include "text_util.h"

namespace eventcorr {

namespace {

void require_sorted(std::span<const Event> events, const char* who) {
  if (!is_time_ordered(events)) {
    throw DataError(std::string(who) + ": events are not sorted by timestamp");
  }
}

bool on_cycle(Timestamp gap, const std::vector<FixedCycle>& cycles,
              Timestamp tolerance) {
  for (const FixedCycle& c : cycles) {
    const Timestamp d = gap > c.interval ? gap - c.interval : c.interval - gap;
    if (d <= tolerance) return true;
  }
  return false;
}

}  // namespace

FilterPass dedupe_repeated(std::span<const Event> events, Timestamp window) {
  require_sorted(events, "dedupe_repeated");
  FilterPass out;
  out.events.reserve(events.size());
  std::unordered_map<LogId, Timestamp> last_kept;
  for (const Event& e : events) {
    auto it = last_kept.find(e.log_id);
    if (it != last_kept.end()) {
      const Timestamp gap = e.timestamp - it->second;
      if (gap == 0 || gap < window) {
        ++out.removed;
        continue;
      }
      it->second = e.timestamp;
    } else {
      last_kept.emplace(e.log_id, e.timestamp);
    }
    out.events.push_back(e);
  }
  return out;
}

CycleTable detect_cycles(std::span<const Event> events, const CycleParams& params) {
  require_sorted(events, "detect_cycles");
  std::unordered_map<LogId, Timestamp> previous;
  std::map<LogId, std::map<Timestamp, std::size_t>> histograms;
  for (const Event& e : events) {
    auto [it, first] = previous.try_emplace(e.log_id, e.timestamp);
    if (!first) {
      ++histograms[e.log_id][e.timestamp - it->second];
      it->second = e.timestamp;
    }
  }

  CycleTable table;
  for (const auto& [log_id, hist] : histograms) {
    std::size_t total = 0;
    for (const auto& [interval, n] : hist) total += n;
    for (const auto& [interval, n] : hist) {
      std::size_t count = n;
      if (params.tolerance > 0) {
        count = 0;
        for (auto it = hist.lower_bound(interval - params.tolerance);
             it != hist.end() && it->first <= interval + params.tolerance; ++it) {
          count += it->second;
        }
      }
      const double fraction = static_cast<double>(count) / static_cast<double>(total);
      if (count >= params.count_threshold && fraction >= params.fraction_threshold) {
        table[log_id].push_back({interval, count, fraction});
      }
    }
  }
  return table;
}

FilterPass drop_periodic(std::span<const Event> events, const CycleTable& cycles,
                         Timestamp tolerance) {
  require_sorted(events, "drop_periodic");
  FilterPass out;
  out.events.reserve(events.size());
  std::unordered_map<LogId, Timestamp> previous;
  for (const Event& e : events) {
    auto [it, first] = previous.try_emplace(e.log_id, e.timestamp);
    if (!first) {
      const Timestamp gap = e.timestamp - it->second;
      it->second = e.timestamp;
      auto c = cycles.find(e.log_id);
      if (c != cycles.end() && on_cycle(gap, c->second, tolerance)) {
        ++out.removed;
        continue;
      }
    }
    out.events.push_back(e);
  }
  return out;
}

FilteredStream run_filters(std::span<const Event> events, const FilterParams& params) {
  FilteredStream out;
  out.report.input = events.size();
  FilterPass deduped = dedupe_repeated(events, params.repeat_window);
  out.report.removed_repeated = deduped.removed;
  out.cycles = detect_cycles(deduped.events, params.cycles);
  FilterPass periodic = drop_periodic(deduped.events, out.cycles, params.cycles.tolerance);
  out.report.removed_periodic = periodic.removed;
  out.events = std::move(periodic.events);
  out.report.output = out.events.size();
  return out;
}

void write_filter_report(std::ostream& out, const FilterReport& r) {
  out << "input=" << r.input << '\n'
      << "removed_repeated=" << r.removed_repeated << '\n'
      << "removed_periodic=" << r.removed_periodic << '\n'
      << "output=" << r.output << '\n';
}

FilterReport read_filter_report(std::istream& in) {
  FilterReport r;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    auto value = detail::parse_int<std::size_t>(std::string_view(line).substr(eq + 1));
    if (!value) throw DataError("filter report: bad value for " + key);
    if (key == "input") r.input = *value;
    else if (key == "removed_repeated") r.removed_repeated = *value;
    else if (key == "removed_periodic") r.removed_periodic = *value;
    else if (key == "output") r.output = *value;
  }
  return r;
}

}  // namespace eventcorr
