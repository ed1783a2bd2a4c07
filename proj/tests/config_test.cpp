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

#include "osci/config.hpp"

#include <fstream>
#include <string>

#include <gtest/gtest.h>

namespace osci {
namespace {

const char* kValid = R"({
  "data": {"n_off": 50, "n_on": 200, "seed": 9, "noise_param": "variance"},
  "rule": {"family": "running_count_threshold", "tau0": 200, "tau1": 1},
  "strategies": ["FULL", "EXPRESS", {"kind": "K_EXPRESS", "k": 10}, "EXPRESS_M"],
  "baselines": [{"baseline": "lord"}, {"baseline": "aci", "gamma_step": 0.05, "clip": "unit_interval"}],
  "alpha": 0.4,
  "replicates": 100,
  "output_path": "out/x"
})";

// Message of the ConfigError raised while parsing `text`.
std::string error_of(const std::string& text) {
  try {
    parse_experiment_config(text, "cfg.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  EXPECT_NE(at, std::string::npos) << from;
  return text.replace(at, from.size(), to);
}

TEST(ParseExperimentConfigTest, ValidConfig) {
  const auto cfg = parse_experiment_config(kValid, "cfg.json");
  EXPECT_EQ(cfg.data.n_off, 50u);
  EXPECT_EQ(cfg.data.n_on, 200u);
  EXPECT_EQ(cfg.data.seed, 9u);
  EXPECT_EQ(cfg.rule.past.family, RuleFamily::kRunningCountThreshold);
  EXPECT_EQ(cfg.rule.past.tau0, 200);
  ASSERT_EQ(cfg.strategies.size(), 4u);
  EXPECT_EQ(cfg.strategies[2], StrategyKind::k_express(10));
  EXPECT_EQ(cfg.strategies[3], StrategyKind::express_m(200));
  ASSERT_EQ(cfg.baselines.size(), 2u);
  EXPECT_EQ(cfg.baselines[0].name(), "LORD_CI");
  EXPECT_EQ(cfg.baselines[1].name(), "ACI_0.05");
  EXPECT_EQ(cfg.baselines[1].clip, AciState::Clip::kUnitInterval);
  EXPECT_EQ(cfg.alpha, 0.4);
  EXPECT_EQ(cfg.evaluation, Evaluation::kEveryTime);
}

TEST(ParseExperimentConfigTest, CompositeRuleDefaultsToLastTime) {
  const auto cfg = parse_experiment_config(
      replace(kValid, R"("rule": {"family": "running_count_threshold", "tau0": 200, "tau1": 1})",
              R"("rule": {"past": {"family": "running_count_threshold", "tau0": 20, "tau1": 0, "prior_count": 10},
                          "test": {"family": "count_gate", "tau1": 16, "prior_count": 10}})"),
      "cfg.json");
  ASSERT_TRUE(cfg.rule.test.has_value());
  EXPECT_EQ(cfg.rule.test_time, 199u);
  EXPECT_EQ(cfg.rule.test->family, RuleFamily::kCountGate);
  EXPECT_EQ(cfg.rule.past.prior_count, 10);
}

TEST(ParseExperimentConfigTest, ErrorsNameTheLine) {
  EXPECT_EQ(error_of(replace(kValid, R"("seed": 9)", R"("sede": 9)")), "cfg.json:2: unknown field 'sede'");
  EXPECT_EQ(error_of(replace(kValid, R"("alpha": 0.4)", R"("alpha": "0.4")")),
            "cfg.json:6: field 'alpha' must be a number");
  EXPECT_EQ(error_of(replace(kValid, R"("alpha": 0.4)", R"("alpha": 1.5)")).substr(0, 11), "cfg.json:6:");
  EXPECT_EQ(error_of(replace(kValid, R"("tau0": 200)", R"("tau0": -1)")).substr(0, 11), "cfg.json:3:");
  EXPECT_EQ(error_of(replace(kValid, R"("K_EXPRESS", "k": 10)", R"("K_EXPRESS")")),
            "cfg.json:4: K_EXPRESS needs field 'k'");
  EXPECT_EQ(error_of(replace(kValid, R"("EXPRESS_M"])", R"("BEST"])")),
            "cfg.json:4: unknown strategy 'BEST'");
  EXPECT_EQ(error_of(replace(kValid, R"("clip": "unit_interval")", R"("clip": "box")")).substr(0, 11), "cfg.json:5:");
  EXPECT_EQ(error_of(replace(kValid, R"("replicates": 100,)", "")),
            "cfg.json:1: missing required field 'replicates'");
  EXPECT_EQ(error_of(replace(kValid, R"("output_path": "out/x")", R"("output_path": "out/x",)")).substr(0, 26),
            "cfg.json:9: malformed JSON");
}

TEST(ParseExperimentConfigTest, RejectsDuplicateMethods) {
  EXPECT_EQ(error_of(replace(kValid, R"(["FULL", "EXPRESS")", R"(["FULL", "FULL")")),
            "cfg.json:4: duplicate method FULL");
}

TEST(ParseExperimentConfigTest, RejectsBadValues) {
  EXPECT_NE(error_of(replace(kValid, R"("n_on": 200)", R"("n_on": 0)")), "");
  EXPECT_NE(error_of(replace(kValid, R"("n_off": 50)", R"("n_off": -2)")), "");
  EXPECT_NE(error_of(replace(kValid, R"({"baseline": "lord"})", R"({"baseline": "lord", "W0": 0.5})")), "");
  EXPECT_NE(error_of(replace(kValid, R"("EXPRESS_M"])", R"({"kind": "EXPRESS_M", "horizon_T": 1}])")), "");
  EXPECT_NE(error_of("[1, 2]"), "");
}

TEST(LoadExperimentConfigTest, MissingFile) {
  try {
    load_experiment_config("/nonexistent/cfg.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()), "/nonexistent/cfg.json:0: cannot open config file");
  }
}

TEST(LoadExperimentConfigTest, ShippedConfigsParse) {
  for (const char* name : {"illustration1.json", "illustration2.json", "lord_aci_small.json"}) {
    EXPECT_NO_THROW(load_experiment_config(std::string(OSCI_CONFIG_DIR) + "/" + name)) << name;
  }
  for (const char* name : {"ada_search.json", "express_search.json", "full_search.json", "hybrid_search.json",
                           "k_express_2_search.json", "s_fix_search.json", "s_full_search.json"}) {
    EXPECT_NO_THROW(load_witness_search(std::string(OSCI_CONFIG_DIR) + "/" + name)) << name;
  }
}

TEST(ParseWitnessSearchTest, Fields) {
  const auto s = parse_witness_search(R"({"strategy": "K_EXPRESS_2",
      "rule": {"family": "shifted_threshold", "tau0": 2, "tau1": 1},
      "trials": 10, "seed": 4, "max_n_off": 2, "max_t": 3, "jitter": 0.5})",
                                      "s.json");
  EXPECT_EQ(s.strategy, SearchStrategy::engine(StrategyKind::k_express(2)));
  EXPECT_EQ(s.trials, 10u);
  EXPECT_EQ(s.max_t, 3u);
  EXPECT_EQ(s.jitter, 0.5);
  EXPECT_THROW(parse_witness_search(R"({"strategy": "EXPRESS_M", "rule": {"family": "constant_one"}})", "s.json"),
               ConfigError);
  EXPECT_THROW(parse_witness_search(R"({"strategy": "FULL", "rule": {"family": "constant_one"}, "max_t": 9})",
                                    "s.json"),
               ConfigError);
}

TEST(RuleToJsonTest, RoundTripsThroughTheParser) {
  const SelectionRule rule(RuleSpec::running_count_threshold(20, 0, 10), RuleSpec::count_gate(16, 10), 3);
  const std::string text = std::string(R"({"strategy": "FULL", "max_t": 4, "rule": )") + rule_to_json(rule) + "}";
  const auto s = parse_witness_search(text, "s.json");
  EXPECT_EQ(rule_to_json(s.rule), rule_to_json(rule));
}

}  // namespace
}  // namespace osci
