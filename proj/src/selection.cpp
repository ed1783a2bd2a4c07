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

#include "osci/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "osci/core.hpp"

namespace osci {

DecisionHistory::DecisionHistory(std::vector<std::uint8_t> bits) {
  for (auto b : bits) append(b != 0);
}

DecisionHistory DecisionHistory::prefix(std::size_t length) const {
  if (length > bits_.size()) throw std::out_of_range("history prefix longer than history");
  return DecisionHistory(std::vector<std::uint8_t>(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(length)));
}

void DecisionHistory::append(bool s) {
  bits_.push_back(s ? 1 : 0);
  if (s) ++selected_;
}

RuleFamily parse_rule_family(std::string_view name) {
  if (name == "running_count_threshold") return RuleFamily::kRunningCountThreshold;
  if (name == "count_gate") return RuleFamily::kCountGate;
  if (name == "shifted_threshold") return RuleFamily::kShiftedThreshold;
  if (name == "constant_one") return RuleFamily::kConstantOne;
  if (name == "custom") return RuleFamily::kCustom;
  throw ConfigError("unknown rule family '" + std::string(name) + "'");
}

std::string_view rule_family_name(RuleFamily family) {
  switch (family) {
    case RuleFamily::kRunningCountThreshold:
      return "running_count_threshold";
    case RuleFamily::kCountGate:
      return "count_gate";
    case RuleFamily::kShiftedThreshold:
      return "shifted_threshold";
    case RuleFamily::kConstantOne:
      return "constant_one";
    case RuleFamily::kCustom:
      return "custom";
  }
  return "unknown";
}

void RuleSpec::validate() const {
  if (!(tau0 > 0.0) || !std::isfinite(tau0)) throw ConfigError("rule tau0 must be a positive number");
  if (std::isnan(tau1)) throw ConfigError("rule tau1 must be a number");
  if (!std::isfinite(prior_count)) throw ConfigError("rule prior_count must be finite");
  if (family == RuleFamily::kCustom && !custom) throw ConfigError("custom rule without a function");
}

RuleSpec RuleSpec::running_count_threshold(double tau0, double tau1, double prior_count) {
  RuleSpec spec{RuleFamily::kRunningCountThreshold, tau0, tau1, prior_count, {}};
  spec.validate();
  return spec;
}

RuleSpec RuleSpec::count_gate(double tau1, double prior_count) {
  RuleSpec spec{RuleFamily::kCountGate, 1.0, tau1, prior_count, {}};
  spec.validate();
  return spec;
}

RuleSpec RuleSpec::shifted_threshold(double tau0, double tau1, double prior_count) {
  RuleSpec spec{RuleFamily::kShiftedThreshold, tau0, tau1, prior_count, {}};
  spec.validate();
  return spec;
}

RuleSpec RuleSpec::constant_one() { return RuleSpec{}; }

RuleSpec register_custom_rule(CustomRule rule) {
  if (!rule) throw ConfigError("custom rule without a function");
  // Best-effort purity probe: same arguments must give the same answer.
  const std::vector<std::vector<std::uint8_t>> histories = {
      {}, {0}, {1}, {0, 1, 1}, {1, 1, 0, 0, 1}};
  const double probes[] = {0.0, 0.25, 0.5, 1.0, 1.5, 2.0};
  for (const auto& h : histories) {
    for (double x : probes) {
      const bool first = rule(h, h.size(), x);
      for (int repeat = 0; repeat < 3; ++repeat) {
        if (rule(h, h.size(), x) != first) {
          throw ConfigError("custom rule is not a pure function of (history, time, feature)");
        }
      }
    }
  }
  RuleSpec spec;
  spec.family = RuleFamily::kCustom;
  spec.custom = std::move(rule);
  return spec;
}

Predicate Predicate::custom(std::function<bool(double)> fn) {
  return Predicate(Kind::kCustom, 0.0, false,
                   std::make_shared<const std::function<bool(double)>>(std::move(fn)));
}

bool operator==(const Predicate& a, const Predicate& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Predicate::Kind::kBelow:
    case Predicate::Kind::kAbove:
      return a.cut_ == b.cut_;
    case Predicate::Kind::kConstant:
      return a.constant_ == b.constant_;
    case Predicate::Kind::kCustom:
      return a.fn_ == b.fn_;
  }
  return false;
}

Predicate realize_rule(const RuleSpec& spec, const DecisionHistory& history) {
  const double count = spec.prior_count + static_cast<double>(history.selected_count());
  switch (spec.family) {
    case RuleFamily::kRunningCountThreshold:
      return Predicate::below(spec.tau1 + count / spec.tau0);
    case RuleFamily::kCountGate:
      return Predicate::constant(count > spec.tau1);
    case RuleFamily::kShiftedThreshold:
      return Predicate::above(spec.tau1 - std::min(count / spec.tau0, 2.0));
    case RuleFamily::kConstantOne:
      return Predicate::constant(true);
    case RuleFamily::kCustom: {
      if (!spec.custom) throw ConfigError("custom rule without a function");
      auto bits = std::vector<std::uint8_t>(history.bits().begin(), history.bits().end());
      const std::size_t t = history.size();
      return Predicate::custom([fn = spec.custom, bits = std::move(bits), t](double x) { return fn(bits, t, x); });
    }
  }
  throw ConfigError("unknown rule family");
}

void SelectionRule::validate() const {
  past.validate();
  if (test) test->validate();
}

const Predicate& RuleLedger::at(std::size_t i) const {
  if (i >= entries_.size()) {
    throw std::out_of_range("ledger index " + std::to_string(i) + " out of range (size " +
                            std::to_string(entries_.size()) + ")");
  }
  return entries_[i];
}

bool replay(const RuleLedger& ledger, std::size_t i, double x) { return ledger.at(i)(x); }

void record_decision(RuleLedger& ledger, DecisionHistory& history, Predicate rule, bool s) {
  ledger.append(std::move(rule));
  history.append(s);
}

bool DecisionProcess::decide(double x) {
  Predicate rule = current_rule();
  const bool s = rule(x);
  record_decision(ledger_, history_, std::move(rule), s);
  return s;
}

}  // namespace osci
