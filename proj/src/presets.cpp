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

#include "osci/presets.hpp"

#include <string>

namespace osci {

namespace {

constexpr double kAlpha = 0.4;
constexpr std::uint64_t kSeed = 20250101;

DataGenConfig data(std::size_t n_off, std::size_t n_on) {
  DataGenConfig d;
  d.n_off = n_off;
  d.n_on = n_on;
  d.beta = 1.0;
  d.seed = kSeed;
  return d;
}

std::vector<StrategyKind> all_strategies(std::size_t k, std::size_t n_on) {
  return {StrategyKind::full(),    StrategyKind::s_full(),      StrategyKind::s_fix(),
          StrategyKind::ada(),     StrategyKind::express(),     StrategyKind::k_express(k),
          StrategyKind::express_m(n_on)};
}

// ACI runs on a small grid of step sizes in place of an adaptive-step variant.
std::vector<BaselineSpec> lord_and_aci() {
  BaselineSpec lord;
  lord.kind = BaselineSpec::Kind::kLord;
  std::vector<BaselineSpec> out{lord};
  for (double g : {0.005, 0.01, 0.05}) {
    BaselineSpec aci;
    aci.kind = BaselineSpec::Kind::kAci;
    aci.gamma_step = g;
    out.push_back(aci);
  }
  return out;
}

// Past times: x < (n_off + sum S) / tau0; final time: n_off + sum S > tau1.
// The offline points count as earlier selections.
SelectionRule rule_a(std::size_t n_off, std::size_t n_on) {
  const double prior = static_cast<double>(n_off);
  return SelectionRule(RuleSpec::running_count_threshold(20.0, 0.0, prior), RuleSpec::count_gate(16.0, prior),
                       n_on - 1);
}

SelectionRule rule_b(double tau0, double tau1) {
  return SelectionRule(RuleSpec::running_count_threshold(tau0, tau1));
}

SelectionRule rule_c() { return SelectionRule(RuleSpec::shifted_threshold(kRuleCDefaultTau0, kRuleCDefaultTau1)); }

ExperimentConfig experiment(std::string label, DataGenConfig d, SelectionRule rule, std::vector<StrategyKind> strategies,
                            std::size_t replicates) {
  ExperimentConfig cfg;
  cfg.label = std::move(label);
  cfg.data = d;
  cfg.rule = std::move(rule);
  cfg.strategies = std::move(strategies);
  cfg.alpha = kAlpha;
  cfg.replicates = replicates;
  cfg.output_path = "out";
  return cfg;
}

std::vector<Preset> build() {
  std::vector<Preset> p;

  {
    auto cfg = experiment("", data(10, 20), rule_a(10, 20), all_strategies(10, 20), 1000000);
    cfg.evaluation = Evaluation::kTerminal;
    p.push_back({"illustration1", "n_off=10, n_on=20, rule A (tau0=20, tau1=16), terminal-time coverage", {cfg}});
  }
  p.push_back({"illustration2", "n_off=50, n_on=200, rule B (tau0=200, tau1=1), FCR over time",
               {experiment("", data(50, 200), rule_b(200.0, 1.0), all_strategies(10, 200), 10000)}});
  {
    auto cfg = experiment("", data(200, 1500), rule_b(1500.0, 1.0), {StrategyKind::k_express(50)}, 10000);
    cfg.baselines = lord_and_aci();
    p.push_back({"illustration3", "n_off=200, n_on=1500, rule B (tau0=1500, tau1=1); 50-EXPRESS vs LORD-CI and ACI",
                 {cfg}});
  }
  p.push_back({"illustration4", "n_off=10, n_on=20, rules B (tau0=200, tau1=1) and C (default tau0=200, tau1=1.5)",
               {experiment("rule_b", data(10, 20), rule_b(200.0, 1.0), all_strategies(10, 20), 1000000),
                experiment("rule_c", data(10, 20), rule_c(), all_strategies(10, 20), 1000000)}});
  p.push_back({"illustration5", "n_off=50, n_on=200, rules B (tau0=200, tau1=1) and C (default tau0=200, tau1=1.5)",
               {experiment("rule_b", data(50, 200), rule_b(200.0, 1.0), all_strategies(10, 200), 10000),
                experiment("rule_c", data(50, 200), rule_c(), all_strategies(10, 200), 10000)}});
  p.push_back({"illustration6", "n_off=50, n_on=200, rule C (default tau0=200, tau1=1.5), FCR over time",
               {experiment("", data(50, 200), rule_c(), all_strategies(10, 200), 10000)}});
  {
    auto cfg = experiment("", data(200, 1500), rule_c(), {StrategyKind::k_express(50)}, 10000);
    cfg.baselines = lord_and_aci();
    p.push_back({"illustration7",
                 "n_off=200, n_on=1500, rule C (default tau0=200, tau1=1.5); 50-EXPRESS vs LORD-CI and ACI", {cfg}});
  }
  return p;
}

}  // namespace

const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> presets = build();
  return presets;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& p : all_presets()) {
    if (p.name == name) return p;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "' (see list-presets)");
}

}  // namespace osci
