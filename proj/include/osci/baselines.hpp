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

#ifndef OSCI_BASELINES_HPP_
#define OSCI_BASELINES_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "osci/core.hpp"
#include "osci/engine.hpp"
#include "osci/selection.hpp"

namespace osci {

// Deterministic nonnegative weights gamma_0, gamma_1, ... with sum <= 1.
class GammaSequence {
 public:
  // gamma_i = 6 / (pi^2 (i + 1)^2), which sums to one.
  static GammaSequence inverse_square();
  // Explicit finite prefix; later terms are zero.
  static GammaSequence from_values(std::vector<double> values);

  double operator()(std::size_t i) const;

 private:
  GammaSequence() = default;
  bool inverse_square_ = false;
  std::vector<double> values_;
};

// LORD-CI level schedule. `selected_times` holds tau_1 < tau_2 < ...
struct LordState {
  double alpha = 0.0;
  double w0 = 0.0;
  GammaSequence gamma = GammaSequence::inverse_square();
  std::vector<std::size_t> selected_times;

  LordState(Level target, double initial_wealth, GammaSequence seq = GammaSequence::inverse_square());
};

// alpha_t = gamma_t W0 + (alpha - W0) gamma_{t - tau_1}
//         + alpha * sum_{k : tau_k < t, k > 1} gamma_{t - tau_k}.
double lord_alpha(const LordState& state, std::size_t t);

// Conformal interval calibrated on the offline pool at level alpha_t.
Interval lord_interval(double x_t, std::span<const double> offline_scores, double alpha_t,
                       const ScoreFunction& score_fn);

struct AciState {
  enum class Clip { kNone, kUnitInterval };

  double alpha_t = 0.0;
  double gamma_step = 0.0;
  Clip clip = Clip::kNone;

  AciState(double initial_alpha, double step, Clip c = Clip::kNone);
};

// alpha_t = alpha_{t-1} + gamma (alpha - err).
AciState aci_update(const AciState& state, bool miscovered, Level target);

struct LordParams {
  double w0 = 0.0;  // defaults to alpha / 2 when zero
  GammaSequence gamma = GammaSequence::inverse_square();
};

struct AciParams {
  double gamma_step = 0.01;
  AciState::Clip clip = AciState::Clip::kNone;
};

// Both baselines calibrate on the full offline pool and follow the same
// selection rule as the conformal strategies. Every step records its level
// (LORD: alpha_t at every t; ACI: the working level at selected t).
Trajectory run_lord(const ScoredStream& stream, const SelectionRule& rule, Level alpha,
                    const LordParams& params, const ScoreFunction& score_fn);
Trajectory run_aci(const ScoredStream& stream, const SelectionRule& rule, Level alpha,
                   const AciParams& params, const ScoreFunction& score_fn);

// sum_{t <= T} alpha_t / (1 v sum_{t <= T} S_t) <= alpha for every prefix T.
bool lord_invariant_holds(const Trajectory& traj, Level alpha);

// |FCP(T) - alpha| <= (max(alpha_1, 1 - alpha_1) + gamma) / (sum S_i * gamma)
// at every T with at least one selection.
bool aci_bound_holds(const Trajectory& traj, Level alpha, double gamma_step);

}  // namespace osci

#endif  // OSCI_BASELINES_HPP_
