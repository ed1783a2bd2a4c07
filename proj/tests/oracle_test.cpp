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

#include "osci/oracle.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "osci/config.hpp"
#include "osci/random.hpp"

namespace osci {
namespace {

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SymmetryWitness fixture(const std::string& name) {
  const std::string path = std::string(OSCI_FIXTURE_DIR) + "/" + name;
  return parse_witness(read(path), path);
}

class FrozenWitnessTest : public testing::TestWithParam<const char*> {};

TEST_P(FrozenWitnessTest, Reproduces) {
  const auto frozen = fixture(GetParam());
  EXPECT_LE(frozen.instance.t(), 4u);
  // The stored permutation still breaks symmetry.
  EXPECT_EQ(augmented_selection(frozen.instance), frozen.original);
  const auto permuted = permute_instance(frozen.instance, frozen.domain, frozen.image);
  EXPECT_EQ(augmented_selection(permuted), frozen.permuted);
  EXPECT_NE(frozen.original, frozen.permuted);
  // And the enumeration finds the same first witness.
  const auto found = check_symmetry(frozen.instance);
  ASSERT_TRUE(found.has_value());
  EXPECT_EQ(found->domain, frozen.domain);
  EXPECT_EQ(found->image, frozen.image);
  EXPECT_EQ(found->permuted, frozen.permuted);
}

INSTANTIATE_TEST_SUITE_P(Fixtures, FrozenWitnessTest,
                         testing::Values("witness_ada.json", "witness_full.json", "witness_s_full.json",
                                         "witness_hybrid.json"));

TEST(WitnessJsonTest, RoundTrip) {
  const auto w = fixture("witness_ada.json");
  const auto again = parse_witness(witness_to_json(w), "again.json");
  EXPECT_EQ(again.instance.offline_x, w.instance.offline_x);
  EXPECT_EQ(again.instance.online_x, w.instance.online_x);
  EXPECT_EQ(again.instance.strategy, w.instance.strategy);
  EXPECT_EQ(again.image, w.image);
}

WitnessSearch search_for(const char* strategy) {
  auto s = load_witness_search(std::string(OSCI_CONFIG_DIR) + "/ada_search.json");
  s.strategy = parse_search_strategy(strategy);
  s.trials = 300;
  return s;
}

TEST(SearchWitnessTest, SymmetricStrategiesHaveNoWitness) {
  for (const char* name : {"EXPRESS", "S_FIX", "K_EXPRESS_1", "K_EXPRESS_2", "K_EXPRESS_3"}) {
    const auto result = search_witness(search_for(name));
    EXPECT_FALSE(result.witness.has_value()) << name;
    EXPECT_GT(result.instances_checked, 100u) << name;
  }
}

TEST(SearchWitnessTest, AdaFailsOnASmallInstance) {
  const auto result = search_witness(search_for("ADA"));
  ASSERT_TRUE(result.witness.has_value());
  EXPECT_LE(result.witness->instance.t(), 4u);
}

TEST(SearchWitnessTest, ConstantRuleIsSymmetricForEveryStrategy) {
  for (const char* name : {"FULL", "S_FULL", "ADA", "EXPRESS", "HYBRID"}) {
    auto s = search_for(name);
    s.rule = SelectionRule(RuleSpec::constant_one());
    s.trials = 50;
    EXPECT_FALSE(search_witness(s).witness.has_value()) << name;
  }
}

TEST(AdaTranspositionTest, SwappingAnEarlierPointWithTheTestPointBreaksSymmetry) {
  // Transpositions (s t) with s in the augmented set: the rules S_j stay
  // fixed, but S_j(X_j) = S_j(X_t) is checked against the new test feature.
  const SelectionRule rule(RuleSpec::running_count_threshold(1.5, 0.9));
  PhiloxStream rng(8, 0);
  std::size_t found = 0;
  for (int trial = 0; trial < 500 && found == 0; ++trial) {
    SmallInstance inst;
    inst.rule = rule;
    inst.strategy = SearchStrategy::engine(StrategyKind::ada());
    inst.offline_x = {rng.uniform(0, 2), rng.uniform(0, 2)};
    inst.online_x = {rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 2)};
    const auto original = augmented_selection(inst);
    const int t = static_cast<int>(inst.t());
    if (original.empty() || original.back() != t) continue;
    for (int s : original) {
      if (s == t) continue;
      std::vector<int> domain{std::min(s, t), std::max(s, t)};
      std::vector<int> image{domain[1], domain[0]};
      const auto swapped = permute_instance(inst, domain, image);
      // pi(original) as a set.
      std::vector<int> mapped;
      for (int j : original) mapped.push_back(j == s ? t : j == t ? s : j);
      std::sort(mapped.begin(), mapped.end());
      if (augmented_selection(swapped) != mapped) ++found;
    }
  }
  EXPECT_GT(found, 0u);
}

TEST(CheckSymmetryTest, RefusesLargeInstances) {
  SmallInstance inst;
  inst.strategy = SearchStrategy::engine(StrategyKind::full());
  inst.offline_x.assign(6, 0.5);
  inst.online_x.assign(4, 0.5);
  EXPECT_EQ(inst.candidate_count(), 9u);
  EXPECT_THROW(check_symmetry(inst), ConfigError);
}

TEST(CheckSymmetryTest, RequiresASelectedTestPoint) {
  SmallInstance inst;
  inst.rule = SelectionRule(RuleSpec::running_count_threshold(1, 0.5));
  inst.offline_x = {0.1};
  inst.online_x = {1.9};
  EXPECT_THROW(check_symmetry(inst), ContractViolation);
}

TEST(ParseSearchStrategyTest, Names) {
  EXPECT_EQ(parse_search_strategy("HYBRID").name(), "HYBRID");
  EXPECT_EQ(parse_search_strategy("K_EXPRESS_4"), SearchStrategy::engine(StrategyKind::k_express(4)));
  EXPECT_THROW(parse_search_strategy("K_EXPRESS"), ConfigError);
  EXPECT_THROW(parse_search_strategy("K_EXPRESS_x"), ConfigError);
  EXPECT_THROW(parse_search_strategy("EXPRESS_M"), ConfigError);
}

TEST(ExchangeabilityTest, ConstantRuleGivesUniformRanks) {
  ExchangeabilitySetup setup;
  setup.data.n_off = 4;
  setup.data.n_on = 4;
  setup.data.seed = 31;
  setup.rule = SelectionRule(RuleSpec::constant_one());
  setup.strategy = SearchStrategy::engine(StrategyKind::full());
  setup.t = 3;
  setup.replicates = 3000;
  const auto report = check_conditional_exchangeability(setup);
  EXPECT_EQ(report.selected, 3000u);
  ASSERT_FALSE(report.inconclusive);
  EXPECT_TRUE(report.uniform) << report.p_value;
  EXPECT_EQ(report.rank_counts.size(), 1u);
  EXPECT_EQ(report.degrees_of_freedom, 7.0);
}

TEST(ExchangeabilityTest, TooFewReplicatesIsInconclusive) {
  ExchangeabilitySetup setup;
  setup.data.n_off = 4;
  setup.data.n_on = 4;
  setup.strategy = SearchStrategy::engine(StrategyKind::full());
  setup.t = 3;
  setup.replicates = 10;
  EXPECT_TRUE(check_conditional_exchangeability(setup).inconclusive);
}

}  // namespace
}  // namespace osci
