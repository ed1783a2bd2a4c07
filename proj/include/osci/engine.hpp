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

#ifndef OSCI_ENGINE_HPP_
#define OSCI_ENGINE_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "osci/core.hpp"
#include "osci/selection.hpp"
#include "osci/strategies.hpp"

namespace osci {

// Offline block (indices -n..-1) and online block (0..N_on-1).
struct Dataset {
  std::vector<Observation> offline;
  std::vector<Observation> online;
};

// Features and scores of a dataset, laid out for the calibration protocol.
struct ScoredStream {
  std::vector<double> offline_x;
  std::vector<double> offline_scores;
  std::vector<double> online_x;
  std::vector<double> online_y;
  std::vector<double> online_scores;

  ScoredStream(const Dataset& data, const ScoreFunction& score_fn);

  FeatureView features() const { return {offline_x, online_x}; }
  double score_at(int j) const {
    return j < 0 ? offline_scores[static_cast<std::size_t>(j + static_cast<int>(offline_x.size()))]
                 : online_scores[static_cast<std::size_t>(j)];
  }
  std::vector<double> scores_of(const std::vector<int>& indices) const;
};

struct StepRecord {
  std::size_t t = 0;
  bool selected = false;
  std::size_t calib_size = 0;
  std::optional<Interval> interval;
  bool covered = false;
  // Conformal p-value of the test score within the augmented set. For
  // EXPRESS_M this is the EXPRESS arm and p_value_fix the S_FIX arm.
  std::optional<Fraction> p_value;
  std::optional<Fraction> p_value_fix;
  // Working level used for the interval (alpha, or alpha_t for baselines).
  std::optional<double> level;
};

struct Trajectory {
  std::vector<StepRecord> records;
  RuleLedger ledger;
  DecisionHistory history;
};

struct ExpressMResult {
  Interval interval;
  Interval fix;
  Interval express;
  std::vector<int> fix_indices;
  std::vector<int> express_indices;
  Fraction p_fix;
  Fraction p_express;
  double level_fix = 0.0;
  double level_express = 0.0;
  std::size_t union_size = 0;
};

// Split levels alpha / sqrt(T) (S_FIX) and (1 - 1/sqrt(T)) alpha (EXPRESS).
std::pair<double, double> express_m_levels(Level alpha, std::size_t horizon_T);

// S_FIX and EXPRESS intervals at the split levels, intersected.
ExpressMResult express_m_interval(std::size_t t, double x_t, const ScoredStream& stream,
                                  const RuleLedger& ledger, const DecisionHistory& history,
                                  const Predicate& test_rule, Level alpha, std::size_t horizon_T,
                                  const ScoreFunction& score_fn);

// Online selective split-conformal prediction over the whole online block.
Trajectory run_stream(const Dataset& data, const SelectionRule& rule, const StrategyKind& strategy,
                      Level alpha, const ScoreFunction& score_fn);

// Same, reusing precomputed scores.
Trajectory run_stream(const ScoredStream& stream, const SelectionRule& rule,
                      const StrategyKind& strategy, Level alpha, const ScoreFunction& score_fn);

}  // namespace osci

#endif  // OSCI_ENGINE_HPP_
