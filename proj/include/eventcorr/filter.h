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

#ifndef EVENTCORR_FILTER_H_
#define EVENTCORR_FILTER_H_

#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "eventcorr/event.h"

namespace eventcorr {

struct FixedCycle {
  Timestamp interval = 0;
  std::size_t count = 0;
  double fraction = 0.0;

  friend bool operator==(const FixedCycle&, const FixedCycle&) = default;
};

using CycleTable = std::map<LogId, std::vector<FixedCycle>>;

struct CycleParams {
  std::size_t count_threshold = 20;
  double fraction_threshold = 0.25;
  // Intervals within +/- tolerance seconds of a cycle count towards it.
  Timestamp tolerance = 0;
};

struct FilterReport {
  std::size_t input = 0;
  std::size_t removed_repeated = 0;
  std::size_t removed_periodic = 0;
  std::size_t output = 0;

  bool conserved() const {
    return input == removed_repeated + removed_periodic + output;
  }
};

struct FilterParams {
  Timestamp repeat_window = 10;
  CycleParams cycles;
};

struct FilterPass {
  std::vector<Event> events;
  std::size_t removed = 0;
};

// Drops an event when the last retained event with the same log id is less
// than `window` seconds older, or has the same timestamp. Throws DataError on
// unsorted input.
FilterPass dedupe_repeated(std::span<const Event> events, Timestamp window = 10);

// An inter-arrival interval of one log id is a fixed cycle when it occurs at
// least `count_threshold` times and makes up at least `fraction_threshold` of
// that log id's intervals.
CycleTable detect_cycles(std::span<const Event> events, const CycleParams& params = {});

// Drops an event whose gap to the previous event of the same log id equals
// one of that log id's cycles. The first event of each periodic run, and
// every event off the cycle, survive.
FilterPass drop_periodic(std::span<const Event> events, const CycleTable& cycles,
                         Timestamp tolerance = 0);

struct FilteredStream {
  std::vector<Event> events;
  FilterReport report;
  CycleTable cycles;
};

// Repeated-event removal followed by periodic-event removal.
FilteredStream run_filters(std::span<const Event> events, const FilterParams& params = {});

void write_filter_report(std::ostream& out, const FilterReport& report);
FilterReport read_filter_report(std::istream& in);

}  // namespace eventcorr

#endif  // EVENTCORR_FILTER_H_
