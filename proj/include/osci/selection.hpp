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

#ifndef OSCI_SELECTION_HPP_
#define OSCI_SELECTION_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace osci {

// Past selection decisions s_0..s_{t-1}. Only bits are stored, so a rule
// realized from a history cannot see features of past points.
class DecisionHistory {
 public:
  DecisionHistory() = default;
  explicit DecisionHistory(std::vector<std::uint8_t> bits);

  std::size_t size() const { return bits_.size(); }
  std::size_t selected_count() const { return selected_; }
  bool at(std::size_t i) const { return bits_.at(i) != 0; }
  std::span<const std::uint8_t> bits() const { return bits_; }
  DecisionHistory prefix(std::size_t length) const;

  void append(bool s);

  friend bool operator==(const DecisionHistory&, const DecisionHistory&) = default;

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t selected_ = 0;
};

// A user rule: a pure function of (past decision bits, time, feature).
using CustomRule = std::function<bool(std::span<const std::uint8_t> history, std::size_t t, double x)>;

enum class RuleFamily {
  kRunningCountThreshold,  // x -> 1{x < tau1 + count / tau0}
  kCountGate,              // x -> 1{count > tau1}
  kShiftedThreshold,       // x -> 1{x > tau1 - min(count / tau0, 2)}
  kConstantOne,
  kCustom,
};

RuleFamily parse_rule_family(std::string_view name);
std::string_view rule_family_name(RuleFamily family);

struct RuleSpec {
  RuleFamily family = RuleFamily::kConstantOne;
  double tau0 = 1.0;
  double tau1 = 0.0;
  // Added to the number of past selections before the rule is applied; a
  // constant, so rules stay decision driven.
  double prior_count = 0.0;
  CustomRule custom;

  void validate() const;

  static RuleSpec running_count_threshold(double tau0, double tau1, double prior_count = 0.0);
  static RuleSpec count_gate(double tau1, double prior_count = 0.0);
  static RuleSpec shifted_threshold(double tau0, double tau1, double prior_count = 0.0);
  static RuleSpec constant_one();
};

// Wraps a custom rule after probing it on a grid of histories and features;
// a rule that answers differently for identical arguments is rejected.
RuleSpec register_custom_rule(CustomRule rule);

// The realized rule S_t: a predicate on features fixed before X_t is seen.
class Predicate {
 public:
  enum class Kind { kBelow, kAbove, kConstant, kCustom };

  static Predicate below(double cut) { return Predicate(Kind::kBelow, cut, false, nullptr); }
  static Predicate above(double cut) { return Predicate(Kind::kAbove, cut, false, nullptr); }
  static Predicate constant(bool value) { return Predicate(Kind::kConstant, 0.0, value, nullptr); }
  static Predicate custom(std::function<bool(double)> fn);

  bool operator()(double x) const {
    switch (kind_) {
      case Kind::kBelow:
        return x < cut_;
      case Kind::kAbove:
        return x > cut_;
      case Kind::kConstant:
        return constant_;
      case Kind::kCustom:
        return (*fn_)(x);
    }
    return false;
  }

  Kind kind() const { return kind_; }
  double cut() const { return cut_; }
  bool constant_value() const { return constant_; }

  // Structural equality; custom predicates compare by identity.
  friend bool operator==(const Predicate& a, const Predicate& b);

 private:
  Predicate(Kind kind, double cut, bool constant, std::shared_ptr<const std::function<bool(double)>> fn)
      : kind_(kind), cut_(cut), constant_(constant), fn_(std::move(fn)) {}

  Kind kind_;
  double cut_;
  bool constant_;
  std::shared_ptr<const std::function<bool(double)>> fn_;
};

Predicate realize_rule(const RuleSpec& spec, const DecisionHistory& history);

// Selection rule over a whole stream. When `test` is set, it replaces the
// past family at the single time `test_time` (rule A style).
struct SelectionRule {
  RuleSpec past;
  std::optional<RuleSpec> test;
  std::size_t test_time = 0;

  explicit SelectionRule(RuleSpec spec) : past(std::move(spec)) {}
  SelectionRule(RuleSpec past_spec, RuleSpec test_spec, std::size_t at)
      : past(std::move(past_spec)), test(std::move(test_spec)), test_time(at) {}

  const RuleSpec& spec_at(std::size_t t) const {
    return test && t == test_time ? *test : past;
  }
  void validate() const;
};

class RuleLedger {
 public:
  std::size_t size() const { return entries_.size(); }
  const Predicate& at(std::size_t i) const;
  std::span<const Predicate> entries() const { return entries_; }
  void append(Predicate p) { entries_.push_back(std::move(p)); }

 private:
  std::vector<Predicate> entries_;
};

// S_i(x) for the realized rule at time i.
bool replay(const RuleLedger& ledger, std::size_t i, double x);

void record_decision(RuleLedger& ledger, DecisionHistory& history, Predicate rule, bool s);

// Drives the decision process for one stream: realize, decide, record.
class DecisionProcess {
 public:
  explicit DecisionProcess(SelectionRule rule) : rule_(std::move(rule)) {}

  std::size_t time() const { return history_.size(); }
  Predicate current_rule() const { return realize_rule(rule_.spec_at(time()), history_); }
  // Applies the current rule to x and records the outcome.
  bool decide(double x);

  const RuleLedger& ledger() const { return ledger_; }
  const DecisionHistory& history() const { return history_; }
  RuleLedger take_ledger() { return std::move(ledger_); }
  DecisionHistory take_history() { return std::move(history_); }

 private:
  SelectionRule rule_;
  RuleLedger ledger_;
  DecisionHistory history_;
};

}  // namespace osci

#endif  // OSCI_SELECTION_HPP_
