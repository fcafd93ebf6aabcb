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
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "eventcorr/errors.h"
#include "eventcorr/harness.h"
#include "eventcorr/predictor.h"

namespace eventcorr {
namespace {

constexpr LogId A = 1, B = 2, C = 3, D = 4;

Event ev(LogId id, Timestamp t) {
  Event e;
  e.log_id = id;
  e.timestamp = t;
  e.node_id = 1;
  e.event_id = id;
  return e;
}

LogCatalog catalog_of(LogId max_id) {
  LogCatalog c;
  for (LogId id = 1; id <= max_id; ++id) c.add(ev(id, 0));
  return c;
}

// Confidence is support / 100.
RuleStats rule(Tsl tsl, std::size_t support) {
  RuleStats r;
  r.tsl = std::move(tsl);
  r.support_count = support;
  r.preceding_occurrences = 100;
  r.posterior_count = support;
  r.posterior_event_occurrences = 100;
  finalize_ratios(r);
  return r;
}

struct Fixture {
  LogCatalog catalog;
  FcgSet set;

  Fixture(LogId max_id, const std::vector<RuleStats>& rules)
      : catalog(catalog_of(max_id)), set(build_fcgs(rules, catalog)) {}

  double p(const Predictor& pr, LogId id) const {
    const auto pos = lookup(set.index, id);
    return pos.empty() ? 0.0 : pr.probability(pos[0].fcg_id, pos[0].vertex_id);
  }
};

PredictorParams with_threshold(double pth) {
  PredictorParams p;
  p.probability_threshold = pth;
  return p;
}

std::set<LogId> emitted(const std::vector<PredictionRecord>& records) {
  std::set<LogId> out;
  for (const auto& r : records) {
    if (r.transition == Transition::kEmit) out.insert(r.prediction.log_id);
  }
  return out;
}

TEST(Predictor, ChainPropagation) {
  const Fixture f(3, {rule({A, B}, 60), rule({B, C}, 50)});
  Predictor low(f.set, f.catalog, with_threshold(0.25));
  const auto records = low.observe(ev(A, 100));
  EXPECT_DOUBLE_EQ(f.p(low, B), 0.6);
  EXPECT_DOUBLE_EQ(f.p(low, C), 0.3);
  EXPECT_EQ(emitted(records), (std::set<LogId>{B, C}));
  const Prediction& b = low.active().at(B);
  EXPECT_EQ(b.predicting_point, 100);
  EXPECT_EQ(b.expiry, 3700);
  EXPECT_EQ(b.outcome, Outcome::kPending);

  Predictor high(f.set, f.catalog, with_threshold(0.35));
  EXPECT_EQ(emitted(high.observe(ev(A, 100))), (std::set<LogId>{B}));
}

TEST(Predictor, RecessiveChainRaisesProbability) {
  const Fixture f(4, {rule({A, B}, 80), rule({B, C}, 50), rule({C, D}, 10), rule({A, B, C}, 60),
                      rule({A, B, D}, 70)});
  Predictor pr(f.set, f.catalog, with_threshold(0.01));
  pr.observe(ev(A, 0));
  EXPECT_DOUBLE_EQ(f.p(pr, D), 0.8 * 0.7);
  pr.observe(ev(B, 10));
  EXPECT_DOUBLE_EQ(f.p(pr, D), 0.7);
  EXPECT_DOUBLE_EQ(f.p(pr, C), 0.6);
  EXPECT_TRUE(pr.marked(1, lookup(f.set.index, B)[0].vertex_id));
}

TEST(Predictor, StrictChainOrder) {
  const Fixture f(4, {rule({A, B, D}, 90)});
  PredictorParams loose;
  PredictorParams strict;
  strict.strict_chain_order = true;
  Predictor a(f.set, f.catalog, loose);
  Predictor b(f.set, f.catalog, strict);
  for (Predictor* pr : {&a, &b}) {
    pr->observe(ev(B, 0));
    pr->observe(ev(A, 1));
  }
  EXPECT_DOUBLE_EQ(f.p(a, D), 0.9);
  EXPECT_EQ(f.p(b, D), 0.0);
  EXPECT_TRUE(b.active().empty());
}

TEST(Predictor, MarksExpireAfterLifetime) {
  const Fixture f(4, {rule({A, B, D}, 90)});
  Predictor fresh(f.set, f.catalog, PredictorParams{});
  fresh.observe(ev(A, 0));
  fresh.observe(ev(B, 3600));
  EXPECT_TRUE(fresh.active().count(D));
  Predictor stale(f.set, f.catalog, PredictorParams{});
  stale.observe(ev(A, 0));
  stale.observe(ev(B, 3601));
  EXPECT_FALSE(stale.active().count(D));
}

TEST(Predictor, HitAndExpiryBoundaries) {
  const Fixture f(2, {rule({A, B}, 90)});
  {
    Predictor pr(f.set, f.catalog, PredictorParams{});
    pr.observe(ev(A, 0));
    EXPECT_TRUE(pr.resolve_expired(3600).empty());
    const auto out = pr.resolve_expired(3601);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].transition, Transition::kExpire);
    EXPECT_EQ(out[0].prediction.outcome, Outcome::kExpired);
  }
  {
    Predictor pr(f.set, f.catalog, PredictorParams{});
    pr.observe(ev(A, 0));
    const auto out = pr.observe(ev(B, 3600));
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].transition, Transition::kHit);
    EXPECT_EQ(out[0].prediction.lead_time(), 3600);
  }
  {
    // The predicting point itself is not a hit.
    Predictor pr(f.set, f.catalog, PredictorParams{});
    pr.observe(ev(A, 5));
    EXPECT_TRUE(pr.observe(ev(B, 5)).empty());
    EXPECT_TRUE(pr.active().count(B));
  }
}

TEST(Predictor, ResolveCountsExpired) {
  std::vector<RuleStats> rules;
  for (LogId i = 0; i < 10; ++i) rules.push_back(rule({2 * i + 1, 2 * i + 2}, 90));
  const Fixture f(20, rules);
  Predictor pr(f.set, f.catalog, PredictorParams{});
  for (LogId i = 0; i < 10; ++i) pr.observe(ev(2 * i + 1, 100 * (i + 1)));
  EXPECT_EQ(pr.active().size(), 10u);
  EXPECT_EQ(pr.resolve_expired(3600 + 400 + 1).size(), 4u);
  EXPECT_EQ(pr.active().size(), 6u);
}

TEST(Predictor, LateArrivalIsLogged) {
  const Fixture f(2, {rule({A, B}, 90)});
  Predictor pr(f.set, f.catalog, PredictorParams{});
  pr.observe(ev(A, 0));
  const auto out = pr.observe(ev(B, 5000));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].transition, Transition::kExpire);
  EXPECT_EQ(out[1].transition, Transition::kLateArrival);
  EXPECT_EQ(out[1].prediction.actual, 5000);
}

TEST(Predictor, RefreshOnHigherProbability) {
  const Fixture f(3, {rule({A, C}, 40), rule({B, C}, 70)});
  Predictor pr(f.set, f.catalog, PredictorParams{});
  pr.observe(ev(A, 0));
  const auto out = pr.observe(ev(B, 50));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].transition, Transition::kRefresh);
  EXPECT_DOUBLE_EQ(out[0].prediction.probability, 0.7);
  EXPECT_EQ(out[0].prediction.expiry, 50 + 3600);
  // A lower probability leaves the prediction alone.
  EXPECT_TRUE(pr.observe(ev(A, 60)).empty());
}

TEST(Predictor, OutOfOrderInputThrows) {
  const Fixture f(2, {rule({A, B}, 90)});
  Predictor pr(f.set, f.catalog, PredictorParams{});
  pr.observe(ev(A, 10));
  EXPECT_THROW(pr.observe(ev(A, 9)), DataError);
}

TEST(Predictor, MatchesPathOracleOnRandomDags) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const LogId n = static_cast<LogId>(2 + rng() % 11);
    std::vector<RuleStats> rules;
    std::map<LogId, std::vector<std::pair<LogId, double>>> out_edges;
    for (LogId a = 1; a <= n; ++a) {
      for (LogId b = a + 1; b <= n; ++b) {
        if (rng() % 3 != 0) continue;
        const std::size_t support = 1 + rng() % 100;
        rules.push_back(rule({a, b}, support));
        out_edges[a].emplace_back(b, rules.back().confidence);
      }
    }
    const double pth = static_cast<double>(1 + rng() % 10) / 10.0;
    const Fixture f(n, rules);
    ASSERT_TRUE(f.set.skipped.empty());
    Predictor pr(f.set, f.catalog, with_threshold(pth));
    std::set<LogId> marks;
    Timestamp t = 0;
    for (LogId id = 1; id <= n; ++id) {
      if (rng() % 3 == 0) {
        marks.insert(id);
        pr.observe(ev(id, ++t));
      }
    }
    // Best product over all paths that start at a marked vertex.
    std::map<LogId, double> best;
    std::function<void(LogId, double)> walk = [&](LogId v, double p) {
      if (p <= best[v]) return;
      best[v] = p;
      for (const auto& [w, c] : out_edges[v]) walk(w, p * c);
    };
    for (LogId m : marks) walk(m, 1.0);
    std::set<LogId> expected_active;
    for (LogId id = 1; id <= n; ++id) {
      if (lookup(f.set.index, id).empty()) continue;
      const double want = marks.count(id) ? 1.0 : best[id];
      EXPECT_NEAR(f.p(pr, id), want, 1e-12) << "trial " << trial << " log " << id;
      if (!marks.count(id) && want > 0 && want >= pth) expected_active.insert(id);
    }
    std::set<LogId> active;
    for (const auto& [id, p] : pr.active()) active.insert(id);
    EXPECT_EQ(active, expected_active) << "trial " << trial;
  }
}

struct Replay {
  std::vector<Event> history;
  std::vector<Event> eval;
  FcgSet set;
  LogCatalog catalog;
};

Replay replay_fixture() {
  Replay r;
  const auto corpus = generate(benchmark_spec(7, 6, 12, 20, 60));
  const std::size_t cut = split_point(corpus.events, 0.3);
  r.history.assign(corpus.events.begin(), corpus.events.begin() + cut);
  r.eval.assign(corpus.events.begin() + cut, corpus.events.end());
  r.catalog = LogCatalog(corpus.events);
  MinerParams mp;
  mp.support_threshold = 3;
  r.set = build_fcgs(mine_apriori(r.history, mp).rules, r.catalog);
  return r;
}

TEST(RunPredictor, ThresholdMonotonicityAndDeterminism) {
  const Replay r = replay_fixture();
  ASSERT_FALSE(r.set.fcgs.empty());
  std::size_t previous = SIZE_MAX;
  for (double pth : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto records = run_predictor(r.eval, r.set, r.catalog, with_threshold(pth));
    EXPECT_EQ(records, run_predictor(r.eval, r.set, r.catalog, with_threshold(pth)));
    std::size_t emits = 0;
    for (const auto& rec : records) {
      if (rec.transition == Transition::kEmit) {
        ++emits;
        EXPECT_GE(rec.prediction.probability, pth);
      }
    }
    EXPECT_LE(emits, previous);
    previous = emits;
  }
}

TEST(PredictionLog, RoundTrip) {
  const Replay r = replay_fixture();
  const auto records = run_predictor(r.eval, r.set, r.catalog, PredictorParams{});
  ASSERT_FALSE(records.empty());
  std::stringstream io;
  write_prediction_log(io, records);
  const auto back = read_prediction_log(io);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_NEAR(back[i].prediction.probability, records[i].prediction.probability, 1e-6);
    auto copy = back[i];
    copy.prediction.probability = records[i].prediction.probability;
    EXPECT_EQ(copy, records[i]) << "record " << i;
  }
}

TEST(PredictorParams, Validation) {
  PredictorParams p;
  p.probability_threshold = 1.5;
  EXPECT_THROW(validate(p), std::invalid_argument);
  p = PredictorParams{};
  p.valid_duration = 0;
  EXPECT_THROW(validate(p), std::invalid_argument);
}

}  // namespace
}  // namespace eventcorr
