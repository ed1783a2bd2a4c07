// Copyright 2026 The osci Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "osci/strategies.hpp"

#include <algorithm>
#include <vector>

#include <gtest/gtest.h>

#include "osci/oracle.hpp"
#include "osci/random.hpp"

namespace osci {
namespace {

using Tag = StrategyKind::Tag;

struct Realized {
  std::vector<double> offline_x;
  std::vector<double> online_x;  // online_x[t] is the test point
  RuleLedger ledger;
  DecisionHistory history;
  Predicate test_rule = Predicate::constant(true);
  std::size_t t() const { return online_x.size() - 1; }
  FeatureView features() const { return {offline_x, online_x}; }
};

Realized realize(std::vector<double> offline_x, std::vector<double> online_x, const SelectionRule& rule) {
  Realized r;
  r.offline_x = std::move(offline_x);
  r.online_x = std::move(online_x);
  DecisionProcess process(rule);
  for (std::size_t i = 0; i < r.t(); ++i) process.decide(r.online_x[i]);
  r.test_rule = process.current_rule();
  r.ledger = process.take_ledger();
  r.history = process.take_history();
  return r;
}

std::vector<int> indices(const StrategyKind& kind, const Realized& r) {
  return calibration_indices(kind, r.t(), r.online_x.back(), r.features(), r.ledger, r.history, r.test_rule);
}

bool subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

TEST(StrategyKindTest, NamesRoundTrip) {
  EXPECT_EQ(StrategyKind::k_express(10).name(), "K_EXPRESS_10");
  EXPECT_EQ(StrategyKind::express_m(20).name(), "EXPRESS_M");
  for (auto tag : {Tag::kFull, Tag::kSFull, Tag::kSFix, Tag::kAda, Tag::kExpress, Tag::kKExpress, Tag::kExpressM}) {
    EXPECT_EQ(parse_strategy_tag(strategy_tag_name(tag)), tag);
  }
  EXPECT_THROW(parse_strategy_tag("BEST"), ConfigError);
  EXPECT_THROW(StrategyKind::k_express(0).validate(), ConfigError);
  EXPECT_THROW(StrategyKind::express_m(1).validate(), ConfigError);
}

TEST(CandidateWindowTest, Examples) {
  std::vector<int> expected;
  for (int j = -50; j < 5; ++j) expected.push_back(j);
  EXPECT_EQ(candidate_window(StrategyKind::k_express(10), 5, 50), expected);

  const auto w = candidate_window(StrategyKind::k_express(2), 7, 3);
  EXPECT_EQ(w, (std::vector<int>{-3, -2, -1, 5, 6}));

  EXPECT_EQ(candidate_window(StrategyKind::full(), 0, 3), (std::vector<int>{-3, -2, -1}));
}

TEST(CalibrationIndicesTest, FullUsesEverything) {
  const auto r = realize({0.3, 1.7}, {0.1, 1.5, 0.9, 1.2}, SelectionRule(RuleSpec::running_count_threshold(2, 0.8)));
  EXPECT_EQ(indices(StrategyKind::full(), r), (std::vector<int>{-2, -1, 0, 1, 2}));
}

TEST(CalibrationIndicesTest, ExpressWithConstantRulesMatchesSFull) {
  // Past rules 1{count > 1} are constant in x; the test rule is not.
  const RuleSpec gate = RuleSpec::count_gate(1);
  const SelectionRule rule(gate, RuleSpec::running_count_threshold(1, 0.5), 4);
  const auto r = realize({0.2, 1.4, 0.9}, {0.3, 1.9, 0.6, 1.1, 0.4}, rule);
  EXPECT_EQ(indices(StrategyKind::express(), r), indices(StrategyKind::s_full(), r));
  EXPECT_EQ(indices(StrategyKind::express(), r), (std::vector<int>{-3, 0}));
}

TEST(CalibrationIndicesTest, HandComputedRuleB) {
  // Rule B with tau0 = 2, tau1 = 0.5: cut 0.5 + count / 2.
  const auto r = realize({0.2, 1.2, 0.7}, {0.3, 0.9, 1.4, 0.6}, SelectionRule(RuleSpec::running_count_threshold(2, 0.5)));
  // Decisions: 0.3 < 0.5 -> 1; 0.9 < 1.0 -> 1; 1.4 < 1.5 -> 1; test cut 2.0.
  ASSERT_EQ(r.history, DecisionHistory(std::vector<std::uint8_t>{1, 1, 1}));
  EXPECT_EQ(indices(StrategyKind::s_fix(), r), (std::vector<int>{-3, -2, -1}));
  // Agreement with x_t = 0.6 under cuts 0.5, 1.0, 1.5 requires x in [0.5, 1.0).
  EXPECT_EQ(indices(StrategyKind::express(), r), (std::vector<int>{-1, 1}));
  // ADA checks only rule j on point j: 0.3 vs 0.6 under cut 0.5 differ.
  EXPECT_EQ(indices(StrategyKind::ada(), r), (std::vector<int>{-3, -2, -1, 1, 2}));
  // The last window of size one asks only for agreement under cut 1.5.
  EXPECT_EQ(indices(StrategyKind::k_express(1), r), (std::vector<int>{-3, -2, -1, 2}));
}

TEST(SelectCalibrationTest, RefusesUnselectedTestPoint) {
  const auto r = realize({0.2}, {1.9}, SelectionRule(RuleSpec::running_count_threshold(2, 0.5)));
  EXPECT_THROW(select_calibration(StrategyKind::express(), 0, 1.9, r.features(), r.ledger, r.history, r.test_rule),
               ContractViolation);
}

TEST(SelectCalibrationTest, AugmentedAddsTestIndex) {
  const auto r = realize({0.2, 0.4}, {0.1, 0.3}, SelectionRule(RuleSpec::constant_one()));
  const auto set = select_calibration(StrategyKind::full(), 1, 0.3, r.features(), r.ledger, r.history, r.test_rule);
  EXPECT_EQ(set.indices, (std::vector<int>{-2, -1, 0}));
  EXPECT_EQ(set.augmented, (std::vector<int>{-2, -1, 0, 1}));
}

TEST(CalibrationIndicesTest, ExpressMIsNotAProtocol) {
  const auto r = realize({0.2}, {0.1}, SelectionRule(RuleSpec::constant_one()));
  EXPECT_THROW(indices(StrategyKind::express_m(4), r), ContractViolation);
}

// Random instances on a grid of quarters, so features often sit exactly on
// rule cut-offs.
std::vector<SelectionRule> probe_rules() {
  std::vector<SelectionRule> rules{
      SelectionRule(RuleSpec::running_count_threshold(4, 0.5)),
      SelectionRule(RuleSpec::shifted_threshold(2, 1.5)),
      SelectionRule(RuleSpec::running_count_threshold(4, 0.25, 2), RuleSpec::count_gate(3, 2), 5),
      SelectionRule(register_custom_rule([](std::span<const std::uint8_t> h, std::size_t t, double x) {
        const bool last = !h.empty() && h.back();
        return last ? (x > 0.5 && x < 1.5) : (x < 1.0 || t % 3 == 0);
      }))};
  return rules;
}

TEST(CalibrationIndicesTest, MatchesDefinitionsOnRandomInstances) {
  const std::vector<SearchStrategy> kinds{
      SearchStrategy::engine(StrategyKind::full()),   SearchStrategy::engine(StrategyKind::s_full()),
      SearchStrategy::engine(StrategyKind::s_fix()),  SearchStrategy::engine(StrategyKind::ada()),
      SearchStrategy::engine(StrategyKind::express()), SearchStrategy::engine(StrategyKind::k_express(1)),
      SearchStrategy::engine(StrategyKind::k_express(3))};
  const auto rules = probe_rules();
  PhiloxStream rng(99, 0);
  std::size_t compared = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const auto n_off = static_cast<std::size_t>(rng.next_u32() % 4);
    const auto t = static_cast<std::size_t>(rng.next_u32() % 8);
    std::vector<double> off(n_off);
    std::vector<double> on(t + 1);
    for (auto& x : off) x = 0.25 * (rng.next_u32() % 9);
    for (auto& x : on) x = 0.25 * (rng.next_u32() % 9);
    for (const auto& rule : rules) {
      const auto r = realize(off, on, rule);
      if (!r.test_rule(on.back())) continue;
      for (const auto& k : kinds) {
        auto expected = augmented_indices_at(off, on, rule, k, t);
        ASSERT_TRUE(expected.has_value());
        expected->pop_back();
        ASSERT_EQ(indices(k.kind, r), *expected) << k.name() << " trial " << trial;
        ++compared;
      }
    }
  }
  EXPECT_GT(compared, 1000u);
}

TEST(CalibrationIndicesTest, Nestedness) {
  const auto rules = probe_rules();
  PhiloxStream rng(5, 1);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> off(3);
    std::vector<double> on(7);
    for (auto& x : off) x = rng.uniform(0, 2);
    for (auto& x : on) x = rng.uniform(0, 2);
    for (const auto& rule : rules) {
      const auto r = realize(off, on, rule);
      if (!r.test_rule(on.back())) continue;
      const auto full = indices(StrategyKind::full(), r);
      const auto s_full = indices(StrategyKind::s_full(), r);
      const auto ada = indices(StrategyKind::ada(), r);
      const auto express = indices(StrategyKind::express(), r);
      const auto s_fix = indices(StrategyKind::s_fix(), r);
      EXPECT_TRUE(subset(s_full, full));
      EXPECT_TRUE(subset(ada, s_full));
      EXPECT_TRUE(subset(express, ada));
      EXPECT_TRUE(subset(s_fix, s_full));
      for (std::size_t k = 1; k <= 7; ++k) {
        const auto ke = indices(StrategyKind::k_express(k), r);
        EXPECT_TRUE(subset(ke, s_full));
        // A wider window adds candidates but also constraints; offline points
        // only lose.
        const auto ke_wider = indices(StrategyKind::k_express(k + 1), r);
        std::vector<int> off_k, off_wider;
        std::copy_if(ke.begin(), ke.end(), std::back_inserter(off_k), [](int j) { return j < 0; });
        std::copy_if(ke_wider.begin(), ke_wider.end(), std::back_inserter(off_wider), [](int j) { return j < 0; });
        EXPECT_TRUE(subset(off_wider, off_k));
      }
      // A window covering every past time is EXPRESS.
      EXPECT_EQ(indices(StrategyKind::k_express(6), r), express);
    }
  }
}

TEST(AgreementRegionTest, MatchesPointwiseEvaluation) {
  DecisionProcess process{SelectionRule(RuleSpec::running_count_threshold(2, 0.5))};
  for (double x : {0.25, 1.5, 0.75, 1.0, 0.5}) process.decide(x);
  const auto& ledger = process.ledger();
  for (double ref = 0.0; ref <= 2.0; ref += 0.125) {
    const AgreementRegion region(ledger, 0, ledger.size(), ref);
    for (double x = -0.5; x <= 2.5; x += 0.125) {
      bool agree = true;
      for (std::size_t i = 0; i < ledger.size(); ++i) agree = agree && ledger.at(i)(x) == ledger.at(i)(ref);
      EXPECT_EQ(region.contains(x), agree) << ref << " " << x;
    }
  }
}

}  // namespace
}  // namespace osci
