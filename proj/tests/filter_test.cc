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

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "eventcorr/errors.h"
#include "eventcorr/filter.h"

namespace eventcorr {
namespace {

Event at(LogId id, Timestamp t) {
  Event e;
  e.log_id = id;
  e.timestamp = t;
  e.node_id = 1;
  e.event_id = 1;
  return e;
}

std::vector<Event> series(LogId id, std::initializer_list<Timestamp> times) {
  std::vector<Event> out;
  for (Timestamp t : times) out.push_back(at(id, t));
  return out;
}

std::vector<Event> every(LogId id, Timestamp start, Timestamp step, std::size_t n) {
  std::vector<Event> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(at(id, start + static_cast<Timestamp>(i) * step));
  return out;
}

std::vector<Timestamp> times_of(const std::vector<Event>& events) {
  std::vector<Timestamp> out;
  for (const Event& e : events) out.push_back(e.timestamp);
  return out;
}

void sort_by_time(std::vector<Event>& events) {
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
}

TEST(DedupeRepeated, AnchorsOnLastRetained) {
  auto r = dedupe_repeated(series(1, {0, 3, 9, 20}));
  EXPECT_EQ(times_of(r.events), (std::vector<Timestamp>{0, 20}));
  EXPECT_EQ(r.removed, 2u);
}

TEST(DedupeRepeated, SameStampDuplicates) {
  EXPECT_EQ(dedupe_repeated(series(1, {0, 0})).events.size(), 1u);
  EXPECT_EQ(dedupe_repeated(series(1, {0, 0}), 0).events.size(), 1u);
  std::vector<Event> two = {at(1, 0), at(2, 0)};
  EXPECT_EQ(dedupe_repeated(two).events.size(), 2u);
}

TEST(DedupeRepeated, WindowEdgeIsExclusive) {
  EXPECT_EQ(times_of(dedupe_repeated(series(1, {0, 9, 10, 19, 20})).events),
            (std::vector<Timestamp>{0, 10, 20}));
}

TEST(DedupeRepeated, RejectsUnsortedInput) {
  EXPECT_THROW(dedupe_repeated(series(1, {5, 1})), DataError);
  EXPECT_THROW(detect_cycles(series(1, {5, 1})), DataError);
  EXPECT_THROW(drop_periodic(series(1, {5, 1}), {}), DataError);
}

TEST(DetectCycles, PurePeriodicStream) {
  const CycleTable t = detect_cycles(every(7, 0, 300, 100));
  ASSERT_EQ(t.size(), 1u);
  ASSERT_EQ(t.at(7).size(), 1u);
  EXPECT_EQ(t.at(7)[0], (FixedCycle{300, 99, 1.0}));
}

TEST(DetectCycles, CountThresholdBoundary) {
  EXPECT_TRUE(detect_cycles(every(1, 0, 60, 20)).empty());  // 19 intervals
  EXPECT_EQ(detect_cycles(every(1, 0, 60, 21)).at(1)[0].count, 20u);
}

TEST(DetectCycles, FractionBelowThresholdAgainstHistogramOracle) {
  // 30 intervals of 60 s among 150, the rest all distinct.
  std::mt19937_64 rng(5);
  std::vector<Timestamp> gaps(30, 60);
  for (Timestamp g = 1000; gaps.size() < 150; g += 1 + static_cast<Timestamp>(rng() % 50)) {
    gaps.push_back(g);
  }
  std::shuffle(gaps.begin(), gaps.end(), rng);
  std::vector<Event> events{at(3, 0)};
  for (Timestamp g : gaps) events.push_back(at(3, events.back().timestamp + g));

  std::map<Timestamp, std::size_t> hist;
  for (std::size_t i = 1; i < events.size(); ++i) {
    ++hist[events[i].timestamp - events[i - 1].timestamp];
  }
  EXPECT_EQ(hist.at(60), 30u);
  EXPECT_DOUBLE_EQ(30.0 / 150.0, 0.2);
  EXPECT_TRUE(detect_cycles(events).empty());
  CycleParams loose;
  loose.fraction_threshold = 0.2;
  EXPECT_EQ(detect_cycles(events, loose).at(3)[0], (FixedCycle{60, 30, 0.2}));
}

TEST(DetectCycles, ToleranceMergesNearbyIntervals) {
  std::vector<Event> events{at(1, 0)};
  for (int i = 0; i < 30; ++i) events.push_back(at(1, events.back().timestamp + 299 + i % 3));
  EXPECT_TRUE(detect_cycles(events).empty());  // 10 of each
  CycleParams p;
  p.tolerance = 1;
  const CycleTable t = detect_cycles(events, p);
  ASSERT_TRUE(t.count(1));
  EXPECT_EQ(drop_periodic(events, t, 1).events.size(), 1u);
}

TEST(DropPeriodic, KeepsOneOfAPurePeriodicRun) {
  auto events = every(1, 0, 300, 100);
  auto r = drop_periodic(events, detect_cycles(events));
  EXPECT_EQ(r.events.size(), 1u);
  EXPECT_EQ(r.removed, 99u);
}

TEST(DropPeriodic, GapRuleTrace) {
  CycleTable cycles{{1, {FixedCycle{300, 20, 0.5}}}};
  auto r = drop_periodic(series(1, {0, 300, 600, 700, 1000}), cycles);
  EXPECT_EQ(times_of(r.events), (std::vector<Timestamp>{0, 700}));
}

TEST(DropPeriodic, NoCyclesKeepsEverything) {
  auto events = series(1, {0, 300, 600});
  EXPECT_EQ(drop_periodic(events, {}).events.size(), 3u);
}

TEST(DropPeriodic, MultipleCyclesPerLogId) {
  CycleTable cycles{{1, {FixedCycle{60, 20, 0.3}, FixedCycle{300, 20, 0.3}}}};
  auto r = drop_periodic(series(1, {0, 60, 360, 400}), cycles);
  EXPECT_EQ(times_of(r.events), (std::vector<Timestamp>{0, 400}));
}

std::vector<Event> random_stream(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Event> events;
  for (int i = 0; i < 400; ++i) {
    events.push_back(at(static_cast<LogId>(rng() % 5 + 1), static_cast<Timestamp>(rng() % 3000)));
  }
  for (auto& e : every(9, 17, 300, 40)) events.push_back(e);
  sort_by_time(events);
  return events;
}

TEST(Filters, PropertiesOnRandomStreams) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto events = random_stream(seed);
    const FilteredStream f = run_filters(events);
    EXPECT_TRUE(f.report.conserved());
    EXPECT_EQ(f.report.output, f.events.size());
    // Output is a subsequence of the input.
    auto it = events.begin();
    for (const Event& e : f.events) {
      it = std::find(it, events.end(), e);
      ASSERT_NE(it, events.end());
      ++it;
    }
    // Repeated-event removal is idempotent.
    const auto once = dedupe_repeated(events);
    EXPECT_EQ(dedupe_repeated(once.events).removed, 0u);
    // A larger window never retains more.
    std::size_t prev = events.size();
    for (Timestamp w = 0; w <= 60; w += 5) {
      const std::size_t kept = dedupe_repeated(events, w).events.size();
      EXPECT_LE(kept, prev);
      prev = kept;
    }
    EXPECT_TRUE(f.cycles.count(9));
  }
}

TEST(Filters, PeriodicRemovalIdempotentOnPeriodicStreams) {
  std::vector<Event> events = every(1, 0, 300, 50);
  for (auto& e : every(2, 7, 60, 80)) events.push_back(e);
  for (auto& e : series(3, {5, 1000, 4000})) events.push_back(e);
  sort_by_time(events);
  const auto first = drop_periodic(events, detect_cycles(events));
  const auto second = drop_periodic(first.events, detect_cycles(first.events));
  EXPECT_EQ(second.removed, 0u);
  EXPECT_EQ(first.events.size(), 5u);
}

TEST(FilterReport, RoundTrip) {
  FilterReport r{10, 3, 2, 5};
  std::ostringstream out;
  write_filter_report(out, r);
  std::istringstream in(out.str());
  const FilterReport back = read_filter_report(in);
  EXPECT_EQ(back.input, 10u);
  EXPECT_EQ(back.removed_repeated, 3u);
  EXPECT_EQ(back.removed_periodic, 2u);
  EXPECT_EQ(back.output, 5u);
  EXPECT_TRUE(back.conserved());
}

}  // namespace
}  // namespace eventcorr
