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

#ifndef OSCI_STRATEGIES_HPP_
#define OSCI_STRATEGIES_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "osci/selection.hpp"

namespace osci {

// Thrown when a strategy is invoked outside its contract, e.g. for a test
// point the selection rule did not pick.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct StrategyKind {
  enum class Tag { kFull, kSFull, kSFix, kAda, kExpress, kKExpress, kExpressM };

  Tag tag = Tag::kFull;
  std::size_t k = 0;          // K_EXPRESS window
  std::size_t horizon_T = 0;  // EXPRESS_M budget split

  static StrategyKind full() { return {Tag::kFull}; }
  static StrategyKind s_full() { return {Tag::kSFull}; }
  static StrategyKind s_fix() { return {Tag::kSFix}; }
  static StrategyKind ada() { return {Tag::kAda}; }
  static StrategyKind express() { return {Tag::kExpress}; }
  static StrategyKind k_express(std::size_t k) { return {Tag::kKExpress, k, 0}; }
  static StrategyKind express_m(std::size_t horizon) { return {Tag::kExpressM, 0, horizon}; }

  void validate() const;
  // Stable identifier used in configs and output file names,
  // e.g. "K_EXPRESS_10".
  std::string name() const;

  friend bool operator==(const StrategyKind&, const StrategyKind&) = default;
};

StrategyKind::Tag parse_strategy_tag(std::string_view name);
std::string_view strategy_tag_name(StrategyKind::Tag tag);

// Features of J_t = {-n..-1} u {0..t-1}. Index j >= 0 maps to online[j] and
// j < 0 to offline[j + n].
struct FeatureView {
  std::span<const double> offline;
  std::span<const double> online;

  int n_off() const { return static_cast<int>(offline.size()); }
  double at(int j) const {
    return j < 0 ? offline[static_cast<std::size_t>(j + n_off())] : online[static_cast<std::size_t>(j)];
  }
};

struct CalibrationSet {
  std::vector<int> indices;    // D_t, ascending
  std::vector<int> augmented;  // D_t plus t when the test point is selected

  std::size_t size() const { return indices.size(); }
};

// Candidate indices J_t (J_off u {max(0, t-k)..t-1} for K_EXPRESS), ascending.
std::vector<int> candidate_window(const StrategyKind& kind, std::size_t t, std::size_t n_off);

// Calibration protocol I_t without the selected-test precondition. EXPRESS_M
// is not a single protocol and is rejected.
std::vector<int> calibration_indices(const StrategyKind& kind, std::size_t t, double x_t,
                                     const FeatureView& features, const RuleLedger& ledger,
                                     const DecisionHistory& history, const Predicate& test_rule);

// D_t and the augmented set for a selected test point.
CalibrationSet select_calibration(const StrategyKind& kind, std::size_t t, double x_t,
                                  const FeatureView& features, const RuleLedger& ledger,
                                  const DecisionHistory& history, const Predicate& test_rule);

// {x : S_i(x) = S_i(x_ref) for all i in [begin, end)}. For threshold-type
// predicates this set is an interval; custom predicates fall back to
// evaluating every rule.
class AgreementRegion {
 public:
  AgreementRegion(const RuleLedger& ledger, std::size_t begin, std::size_t end, double x_ref);
  bool contains(double x) const;

 private:
  const RuleLedger* ledger_;
  std::size_t begin_;
  std::size_t end_;
  double x_ref_;
  bool structured_ = true;
  double lo_;
  bool lo_inclusive_ = true;
  double hi_;
  bool hi_inclusive_ = true;
};

}  // namespace osci

#endif  // OSCI_STRATEGIES_HPP_
