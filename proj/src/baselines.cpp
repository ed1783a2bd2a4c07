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

#include "osci/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace osci {

GammaSequence GammaSequence::inverse_square() {
  GammaSequence g;
  g.inverse_square_ = true;
  return g;
}

GammaSequence GammaSequence::from_values(std::vector<double> values) {
  double total = 0.0;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("gamma sequence entries must be nonnegative");
    total += v;
  }
  if (total > 1.0 + 1e-12) throw ConfigError("gamma sequence sums to more than one");
  GammaSequence g;
  g.values_ = std::move(values);
  return g;
}

double GammaSequence::operator()(std::size_t i) const {
  if (inverse_square_) {
    const double k = static_cast<double>(i) + 1.0;
    return 6.0 / (std::numbers::pi * std::numbers::pi * k * k);
  }
  return i < values_.size() ? values_[i] : 0.0;
}

LordState::LordState(Level target, double initial_wealth, GammaSequence seq)
    : alpha(target.value()), w0(initial_wealth), gamma(std::move(seq)) {
  if (!(w0 > 0.0 && w0 <= alpha)) throw ConfigError("LORD-CI needs W0 in (0, alpha]");
}

double lord_alpha(const LordState& state, std::size_t t) {
  double level = state.gamma(t) * state.w0;
  bool first = true;
  for (std::size_t tau : state.selected_times) {
    if (tau >= t) break;
    const double weight = first ? state.alpha - state.w0 : state.alpha;
    level += weight * state.gamma(t - tau);
    first = false;
  }
  return level;
}

Interval lord_interval(double x_t, std::span<const double> offline_scores, double alpha_t,
                       const ScoreFunction& score_fn) {
  return build_interval(x_t, score_fn, conformal_threshold(offline_scores, alpha_t));
}

AciState::AciState(double initial_alpha, double step, Clip c)
    : alpha_t(initial_alpha), gamma_step(step), clip(c) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("ACI step size must be positive");
  if (clip == Clip::kUnitInterval) alpha_t = std::clamp(alpha_t, 0.0, 1.0);
}

AciState aci_update(const AciState& state, bool miscovered, Level target) {
  AciState next = state;
  next.alpha_t = state.alpha_t + state.gamma_step * (target.value() - (miscovered ? 1.0 : 0.0));
  if (next.clip == AciState::Clip::kUnitInterval) next.alpha_t = std::clamp(next.alpha_t, 0.0, 1.0);
  return next;
}

namespace {

StepRecord offline_step(const ScoredStream& stream, std::size_t t, double level,
                        const ScoreFunction& score_fn) {
  StepRecord rec;
  rec.t = t;
  rec.selected = true;
  rec.level = level;
  rec.interval = lord_interval(stream.online_x[t], stream.offline_scores, level, score_fn);
  rec.calib_size = stream.offline_scores.size();
  rec.covered = rec.interval->contains(stream.online_y[t]);
  rec.p_value = conformal_p_value(stream.offline_scores, stream.online_scores[t]);
  return rec;
}

}  // namespace

Trajectory run_lord(const ScoredStream& stream, const SelectionRule& rule, Level alpha,
                    const LordParams& params, const ScoreFunction& score_fn) {
  rule.validate();
  const double w0 = params.w0 > 0.0 ? params.w0 : alpha.value() / 2.0;
  LordState state(alpha, w0, params.gamma);
  const std::size_t n_on = stream.online_x.size();
  std::vector<double> gamma(n_on + 1);
  for (std::size_t i = 0; i <= n_on; ++i) gamma[i] = state.gamma(i);
  Trajectory traj;
  DecisionProcess process(rule);
  for (std::size_t t = 0; t < n_on; ++t) {
    // Same sum as lord_alpha, with the weights tabulated.
    double level = gamma[t] * state.w0;
    for (std::size_t k = 0; k < state.selected_times.size(); ++k) {
      const double weight = k == 0 ? state.alpha - state.w0 : state.alpha;
      level += weight * gamma[t - state.selected_times[k]];
    }
    const bool selected = process.current_rule()(stream.online_x[t]);
    StepRecord rec;
    if (selected) {
      rec = offline_step(stream, t, level, score_fn);
      state.selected_times.push_back(t);
    } else {
      rec.t = t;
      rec.level = level;
    }
    traj.records.push_back(std::move(rec));
    process.decide(stream.online_x[t]);
  }
  traj.ledger = process.take_ledger();
  traj.history = process.take_history();
  return traj;
}

Trajectory run_aci(const ScoredStream& stream, const SelectionRule& rule, Level alpha,
                   const AciParams& params, const ScoreFunction& score_fn) {
  rule.validate();
  AciState state(alpha.value(), params.gamma_step, params.clip);
  Trajectory traj;
  DecisionProcess process(rule);
  for (std::size_t t = 0; t < stream.online_x.size(); ++t) {
    const bool selected = process.current_rule()(stream.online_x[t]);
    StepRecord rec;
    if (selected) {
      rec = offline_step(stream, t, state.alpha_t, score_fn);
      // Feedback only arrives where an interval was reported.
      state = aci_update(state, !rec.covered, alpha);
    } else {
      rec.t = t;
    }
    traj.records.push_back(std::move(rec));
    process.decide(stream.online_x[t]);
  }
  traj.ledger = process.take_ledger();
  traj.history = process.take_history();
  return traj;
}

bool lord_invariant_holds(const Trajectory& traj, Level alpha) {
  double spent = 0.0;
  std::size_t selections = 0;
  for (const auto& rec : traj.records) {
    spent += rec.level.value_or(0.0);
    if (rec.selected) ++selections;
    if (spent / static_cast<double>(std::max<std::size_t>(1, selections)) > alpha.value()) return false;
  }
  return true;
}

bool aci_bound_holds(const Trajectory& traj, Level alpha, double gamma_step) {
  std::optional<double> alpha_1;
  std::size_t selections = 0;
  std::size_t misses = 0;
  for (const auto& rec : traj.records) {
    if (!rec.selected) continue;
    if (!alpha_1) alpha_1 = rec.level.value_or(alpha.value());
    ++selections;
    if (!rec.covered) ++misses;
    const double k = static_cast<double>(selections);
    const double fcp = static_cast<double>(misses) / k;
    const double bound = (std::max(*alpha_1, 1.0 - *alpha_1) + gamma_step) / (k * gamma_step);
    if (std::abs(fcp - alpha.value()) > bound + 1e-12) return false;
  }
  return true;
}

}  // namespace osci
