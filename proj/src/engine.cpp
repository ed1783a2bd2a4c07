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

#include "osci/engine.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

namespace osci {

ScoredStream::ScoredStream(const Dataset& data, const ScoreFunction& score_fn) {
  offline_x.reserve(data.offline.size());
  offline_scores.reserve(data.offline.size());
  for (const auto& z : data.offline) {
    offline_x.push_back(z.x);
    offline_scores.push_back(score_fn.score(z));
  }
  online_x.reserve(data.online.size());
  online_y.reserve(data.online.size());
  online_scores.reserve(data.online.size());
  for (const auto& z : data.online) {
    online_x.push_back(z.x);
    online_y.push_back(z.y);
    online_scores.push_back(score_fn.score(z));
  }
}

std::vector<double> ScoredStream::scores_of(const std::vector<int>& indices) const {
  std::vector<double> out;
  out.reserve(indices.size());
  for (int j : indices) out.push_back(score_at(j));
  return out;
}

std::pair<double, double> express_m_levels(Level alpha, std::size_t horizon_T) {
  if (horizon_T < 2) throw ConfigError("EXPRESS_M needs horizon_T >= 2");
  const double share = 1.0 / std::sqrt(static_cast<double>(horizon_T));
  return {share * alpha.value(), (1.0 - share) * alpha.value()};
}

ExpressMResult express_m_interval(std::size_t t, double x_t, const ScoredStream& stream,
                                  const RuleLedger& ledger, const DecisionHistory& history,
                                  const Predicate& test_rule, Level alpha, std::size_t horizon_T,
                                  const ScoreFunction& score_fn) {
  if (!test_rule(x_t)) {
    throw ContractViolation("EXPRESS_M requested for a test point that was not selected");
  }
  const auto [level_fix, level_express] = express_m_levels(alpha, horizon_T);
  const FeatureView view = stream.features();

  ExpressMResult r;
  r.level_fix = level_fix;
  r.level_express = level_express;
  r.fix_indices = calibration_indices(StrategyKind::s_fix(), t, x_t, view, ledger, history, test_rule);
  r.express_indices = calibration_indices(StrategyKind::express(), t, x_t, view, ledger, history, test_rule);

  const auto fix_scores = stream.scores_of(r.fix_indices);
  const auto express_scores = stream.scores_of(r.express_indices);
  r.fix = build_interval(x_t, score_fn, conformal_threshold(fix_scores, level_fix));
  r.express = build_interval(x_t, score_fn, conformal_threshold(express_scores, level_express));
  // Both arms share the center, so the intersection keeps the smaller radius.
  r.interval = Interval{r.fix.center, tighter(r.fix.radius, r.express.radius)};

  const double test_score = stream.online_scores[t];
  r.p_fix = conformal_p_value(fix_scores, test_score);
  r.p_express = conformal_p_value(express_scores, test_score);

  std::vector<int> merged;
  std::set_union(r.fix_indices.begin(), r.fix_indices.end(), r.express_indices.begin(),
                 r.express_indices.end(), std::back_inserter(merged));
  r.union_size = merged.size();
  return r;
}

Trajectory run_stream(const Dataset& data, const SelectionRule& rule, const StrategyKind& strategy,
                      Level alpha, const ScoreFunction& score_fn) {
  return run_stream(ScoredStream(data, score_fn), rule, strategy, alpha, score_fn);
}

Trajectory run_stream(const ScoredStream& stream, const SelectionRule& rule,
                      const StrategyKind& strategy, Level alpha, const ScoreFunction& score_fn) {
  rule.validate();
  strategy.validate();
  const std::size_t n_on = stream.online_x.size();
  const FeatureView view = stream.features();

  Trajectory traj;
  traj.records.reserve(n_on);
  DecisionProcess process(rule);
  for (std::size_t t = 0; t < n_on; ++t) {
    const double x_t = stream.online_x[t];
    const Predicate test_rule = process.current_rule();
    StepRecord rec;
    rec.t = t;
    rec.selected = test_rule(x_t);
    if (rec.selected) {
      rec.level = alpha.value();
      if (strategy.tag == StrategyKind::Tag::kExpressM) {
        const auto m = express_m_interval(t, x_t, stream, process.ledger(), process.history(), test_rule,
                                          alpha, strategy.horizon_T, score_fn);
        rec.interval = m.interval;
        rec.calib_size = m.union_size;
        rec.p_value = m.p_express;
        rec.p_value_fix = m.p_fix;
      } else {
        const auto indices = calibration_indices(strategy, t, x_t, view, process.ledger(),
                                                 process.history(), test_rule);
        const auto scores = stream.scores_of(indices);
        rec.interval = build_interval(x_t, score_fn, conformal_threshold(scores, alpha));
        rec.calib_size = indices.size();
        rec.p_value = conformal_p_value(scores, stream.online_scores[t]);
      }
      rec.covered = rec.interval->contains(stream.online_y[t]);
    }
    traj.records.push_back(std::move(rec));
    // The decision only feeds later rules; labels never do.
    process.decide(x_t);
  }
  traj.ledger = process.take_ledger();
  traj.history = process.take_history();
  return traj;
}

}  // namespace osci
