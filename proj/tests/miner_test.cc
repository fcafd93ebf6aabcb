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
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "eventcorr/errors.h"
#include "eventcorr/harness.h"
#include "eventcorr/miner.h"

namespace eventcorr {
namespace {

constexpr LogId A = 1, B = 2, C = 3, D = 4;

Event at(LogId id, Timestamp t, NodeId node = 1, EventType type = EventType::kSystem,
         std::string app = "") {
  Event e;
  e.log_id = id;
  e.timestamp = t;
  e.node_id = node;
  e.event_id = 1;
  e.event_type = type;
  e.application = std::move(app);
  return e;
}

std::vector<Event> bacbba() {
  const LogId seq[] = {B, A, C, B, B, A};
  std::vector<Event> out;
  for (int i = 0; i < 6; ++i) out.push_back(at(seq[i], i));
  return out;
}

TEST(CountTsl, WorkedExample) {
  const auto events = bacbba();
  const RuleStats ab = count_tsl(events, {A, B}, 1000);
  EXPECT_EQ(ab.support_count, 1u);
  EXPECT_EQ(ab.posterior_count, 2u);
  EXPECT_EQ(ab.confidence, 0.5);
  EXPECT_EQ(ab.posterior, 2.0 / 3.0);
  const RuleStats acb = count_tsl(events, {A, C, B}, 1000);
  EXPECT_EQ(acb.support_count, 1u);
  EXPECT_EQ(acb.posterior_count, 2u);
}

TEST(CountTsl, WindowBoundary) {
  const Timestamp tw = 60;
  EXPECT_EQ(count_tsl(std::vector<Event>{at(A, 0), at(B, tw + 1)}, {A, B}, tw).support_count, 0u);
  EXPECT_EQ(count_tsl(std::vector<Event>{at(A, 0), at(B, tw)}, {A, B}, tw).support_count, 1u);
  // Simultaneous events never match: timestamps must strictly increase.
  EXPECT_EQ(count_tsl(std::vector<Event>{at(A, 5), at(B, 5)}, {A, B}, tw).support_count, 0u);
}

TEST(CountTsl, ErrorsAndUnknownIds) {
  const auto events = bacbba();
  const RuleStats z = count_tsl(events, {A, D}, 10);
  EXPECT_EQ(z.support_count + z.posterior_count + z.preceding_occurrences, 0u);
  EXPECT_EQ(z.confidence, 0.0);
  EXPECT_THROW(count_tsl(events, {A}, 10), std::invalid_argument);
  EXPECT_THROW(count_tsl(events, {A, B, A}, 10), std::invalid_argument);
  EXPECT_THROW(count_tsl(std::vector<Event>{at(A, 5), at(B, 1)}, {A, B}, 10), DataError);
}

TEST(CountTsl, AgreesWithBruteForceOnRandomStreams) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Event> events;
    for (int i = 0; i < 80; ++i) events.push_back(at(rng() % 4 + 1, static_cast<Timestamp>(rng() % 200)));
    std::stable_sort(events.begin(), events.end(),
                     [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
    const Timestamp tw = static_cast<Timestamp>(rng() % 40 + 1);
    for (const Tsl& t : {Tsl{A, B}, Tsl{B, A}, Tsl{A, B, C}, Tsl{C, A, D, B}}) {
      EXPECT_EQ(count_tsl(events, t, tw), oracle_count(events, t, tw));
    }
  }
}

TEST(FrequentEvents, Examples) {
  std::vector<Event> events;
  for (int i = 0; i < 6; ++i) events.push_back(at(A, i));
  for (int i = 0; i < 4; ++i) events.push_back(at(B, 10 + i));
  EXPECT_EQ(frequent_events(events, 5), (std::set<LogId>{A}));
  EXPECT_TRUE(frequent_events({}, 1).empty());

  std::mt19937_64 rng(3);
  std::vector<Event> uniform;
  std::map<LogId, std::size_t> counts;
  for (int i = 0; i < 1000; ++i) {
    const LogId id = static_cast<LogId>(rng() % 8 + 1);
    ++counts[id];
    uniform.push_back(at(id, i));
  }
  std::set<LogId> oracle;
  for (const auto& [id, n] : counts) {
    if (n >= 50) oracle.insert(id);
  }
  EXPECT_EQ(oracle.size(), 8u);
  EXPECT_EQ(frequent_events(uniform, 50), oracle);
}

// Enumerates every ordered k-tuple of distinct ids and keeps the closed ones.
std::set<Tsl> candidate_oracle(const std::set<Tsl>& frequent) {
  std::set<LogId> ids;
  std::size_t m = 0;
  for (const Tsl& t : frequent) {
    ids.insert(t.begin(), t.end());
    m = t.size();
  }
  std::set<Tsl> out;
  std::vector<LogId> pool(ids.begin(), ids.end());
  std::vector<LogId> perm;
  std::function<void()> rec = [&] {
    if (perm.size() == m + 1) {
      for (std::size_t drop = 0; drop <= m; ++drop) {
        Tsl sub;
        for (std::size_t i = 0; i <= m; ++i) {
          if (i != drop) sub.push_back(perm[i]);
        }
        if (!frequent.count(sub)) return;
      }
      out.insert(perm);
      return;
    }
    for (LogId id : pool) {
      if (std::find(perm.begin(), perm.end(), id) != perm.end()) continue;
      perm.push_back(id);
      rec();
      perm.pop_back();
    }
  };
  rec();
  return out;
}

std::set<Tsl> as_set(const std::vector<Tsl>& v) { return {v.begin(), v.end()}; }

TEST(GenCandidates, Examples) {
  EXPECT_EQ(as_set(gen_candidates({{A}, {B}})), (std::set<Tsl>{{A, B}, {B, A}}));
  EXPECT_EQ(as_set(gen_candidates({{A, B}, {B, C}, {A, C}})), (std::set<Tsl>{{A, B, C}}));
  EXPECT_EQ(candidate_oracle({{A, B}, {B, C}, {A, C}}), (std::set<Tsl>{{A, B, C}}));
  EXPECT_TRUE(gen_candidates({{A, B}, {B, C}}).empty());
  EXPECT_TRUE(gen_candidates({}).empty());
}

TEST(GenCandidates, MatchesEnumerationOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + trial % 2;
    std::set<Tsl> frequent;
    const std::size_t n_ids = 4 + rng() % 3;
    for (int i = 0; i < 30; ++i) {
      Tsl t;
      while (t.size() < m) {
        const LogId id = static_cast<LogId>(rng() % n_ids + 1);
        if (std::find(t.begin(), t.end(), id) == t.end()) t.push_back(id);
      }
      frequent.insert(t);
    }
    EXPECT_EQ(as_set(gen_candidates({frequent.begin(), frequent.end()})),
              candidate_oracle(frequent));
  }
}

std::vector<Event> planted_pair(std::size_t n, Timestamp delay, NodeId node_b = 1,
                                EventType type_b = EventType::kSystem,
                                std::string app_b = "") {
  std::vector<Event> events;
  for (std::size_t i = 0; i < n; ++i) {
    const Timestamp t = static_cast<Timestamp>(i) * 10000;
    events.push_back(at(A, t));
    events.push_back(at(B, t + delay, node_b, type_b, app_b));
  }
  return events;
}

TEST(MineApriori, PlantedPair) {
  MinerParams p;
  const auto result = mine_apriori(planted_pair(50, 30), p);
  ASSERT_EQ(result.rules.size(), 1u);
  const RuleStats& r = result.rules[0];
  EXPECT_EQ(r.tsl, (Tsl{A, B}));
  EXPECT_EQ(r.support_count, 50u);
  EXPECT_EQ(r.confidence, 1.0);
  EXPECT_EQ(r.kind, RuleKind::kLocal);
}

TEST(MineApriori, SingleLogIdHasNoRules) {
  std::vector<Event> events;
  for (int i = 0; i < 100; ++i) events.push_back(at(A, i));
  EXPECT_TRUE(mine_apriori(events, MinerParams{}).rules.empty());
}

TEST(MineApriori, MatchesOracleOnRandomCorpora) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const RandomCase c = random_case(seed);
    EXPECT_EQ(mine_apriori(c.events, c.params).rules, oracle_mine(c.events, c.params))
        << "seed " << seed;
  }
}

TEST(MineApriori, ThresholdAndWindowMonotonicity) {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    RandomCase c = random_case(seed);
    c.params.max_arity = 3;
    const auto base = mine_apriori(c.events, c.params).rules;
    std::set<Tsl> base_tsls;
    for (const auto& r : base) base_tsls.insert(r.tsl);
    MinerParams stricter = c.params;
    stricter.support_threshold += 1;
    stricter.confidence_threshold = std::min(1.0, stricter.confidence_threshold + 0.1);
    for (const auto& r : mine_apriori(c.events, stricter).rules) {
      // The 2-ary level is exact; deeper levels may differ only by pruning.
      if (r.arity() == 2) EXPECT_TRUE(base_tsls.count(r.tsl));
    }
    const OccurrenceIndex index(c.events);
    for (LogId a : index.log_ids()) {
      for (LogId b : index.log_ids()) {
        if (a == b) continue;
        EXPECT_LE(count_tsl(index, {a, b}, c.params.window).support_count,
                  count_tsl(index, {a, b}, c.params.window + 7).support_count);
      }
    }
  }
}

TEST(MineApriori, WorkerCountDoesNotChangeResults) {
  SyntheticSpec spec = benchmark_spec(5, 6, 10, 20, 40);
  const auto corpus = generate(spec);
  MinerParams one;
  MinerParams four = one;
  four.workers = 4;
  const auto a = mine_apriori(corpus.events, one);
  const auto b = mine_apriori(corpus.events, four);
  EXPECT_FALSE(a.rules.empty());
  EXPECT_EQ(a.rules, b.rules);
  EXPECT_EQ(mine_apriori_s(corpus.events, one).rules, mine_apriori_s(corpus.events, four).rules);
}

std::vector<RuleStats> two_ary(const std::vector<RuleStats>& rules) {
  std::vector<RuleStats> out;
  for (const auto& r : rules) {
    if (r.arity() == 2) out.push_back(r);
  }
  return out;
}

TEST(MineAprioriS, RestrictionLawOnRandomCorpora) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const RandomCase c = random_case(seed);
    const LogCatalog catalog(c.events);
    std::vector<RuleStats> expected;
    for (const auto& r : two_ary(mine_apriori(c.events, c.params).rules)) {
      if (shares_group(r.tsl[0], r.tsl[1], catalog)) expected.push_back(r);
    }
    EXPECT_EQ(two_ary(mine_apriori_s(c.events, c.params).rules), expected) << "seed " << seed;
  }
}

TEST(MineAprioriS, SameNodePairFoundInFirstPass) {
  const auto events = planted_pair(20, 30, 1, EventType::kNetwork, "x");
  const auto s = mine_apriori_s(events, MinerParams{});
  ASSERT_EQ(s.rules.size(), 1u);
  EXPECT_EQ(s.rules, mine_apriori(events, MinerParams{}).rules);
  EXPECT_EQ(s.rules[0].kind, RuleKind::kLocal);
}

TEST(MineAprioriS, CrossNodeSameTypeFoundInSecondPass) {
  const auto events = planted_pair(20, 30, 2, EventType::kSystem, "y");
  const auto s = mine_apriori_s(events, MinerParams{});
  ASSERT_EQ(s.rules.size(), 1u);
  EXPECT_EQ(s.rules[0].kind, RuleKind::kDistributed);
}

TEST(MineAprioriS, CrossNodeUnrelatedPairIsExcluded) {
  const auto events = planted_pair(20, 30, 2, EventType::kNetwork, "y");
  EXPECT_TRUE(mine_apriori_s(events, MinerParams{}).rules.empty());
  EXPECT_EQ(mine_apriori(events, MinerParams{}).rules.size(), 1u);
}

RuleStats stats(std::size_t support, std::size_t preceding, std::size_t posterior,
                std::size_t last) {
  RuleStats r;
  r.tsl = {A, B};
  r.support_count = support;
  r.preceding_occurrences = preceding;
  r.posterior_count = posterior;
  r.posterior_event_occurrences = last;
  finalize_ratios(r);
  return r;
}

TEST(ExtractClusters, Examples) {
  const RuleStats strong = stats(12, 13, 11, 12);  // 0.923, 0.9167
  EXPECT_NEAR(strong.confidence, 0.923, 5e-4);
  EXPECT_NEAR(strong.posterior, 0.9167, 5e-5);
  const RuleStats weak = stats(122, 202, 122, 130);  // confidence 0.604
  EXPECT_NEAR(weak.confidence, 0.604, 5e-4);
  const std::vector<RuleStats> rules = {strong, weak};
  const auto clusters = extract_clusters(rules);
  ASSERT_EQ(clusters.size(), 1u);
  EXPECT_EQ(clusters[0].support_count, 12u);
  EXPECT_TRUE(clusters[0].cluster);
  EXPECT_TRUE(extract_clusters({}).empty());
}

TEST(ExtractClusters, SubsetOfRules) {
  const auto corpus = generate(benchmark_spec(9, 4, 10, 20, 40));
  auto rules = mine_apriori(corpus.events, MinerParams{}).rules;
  std::set<Tsl> tsls;
  for (const auto& r : rules) tsls.insert(r.tsl);
  for (const auto& c : extract_clusters(rules, 5, 0.5, 0.3)) EXPECT_TRUE(tsls.count(c.tsl));
}

TEST(RulesFile, RoundTripIsBitExact) {
  const auto corpus = generate(benchmark_spec(2, 4, 10, 20, 40));
  auto rules = mine_apriori(corpus.events, MinerParams{}).rules;
  flag_clusters(rules, MinerParams{});
  ASSERT_FALSE(rules.empty());
  std::ostringstream out;
  write_rules(out, rules);
  std::istringstream in(out.str());
  EXPECT_EQ(read_rules(in), rules);
}

TEST(MinerParams, Validation) {
  MinerParams p;
  p.window = 0;
  EXPECT_THROW(validate(p), std::invalid_argument);
  p = MinerParams{};
  p.support_threshold = 0;
  EXPECT_THROW(validate(p), std::invalid_argument);
  p = MinerParams{};
  p.confidence_threshold = 1.5;
  EXPECT_THROW(validate(p), std::invalid_argument);
}

}  // namespace
}  // namespace eventcorr
