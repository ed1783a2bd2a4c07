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

#include "osci/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace osci {

Level::Level(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
}

Threshold Threshold::finite(double value) {
  if (!std::isfinite(value)) throw DomainError("finite threshold must be a finite number");
  return Threshold(Kind::kFinite, value);
}

bool Threshold::admits(double score) const {
  switch (kind_) {
    case Kind::kEmpty:
      return false;
    case Kind::kUnbounded:
      return true;
    case Kind::kFinite:
      return score <= value_;
  }
  return false;
}

bool operator<(const Threshold& a, const Threshold& b) {
  if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) < static_cast<int>(b.kind_);
  return a.kind_ == Threshold::Kind::kFinite && a.value_ < b.value_;
}

const Threshold& tighter(const Threshold& a, const Threshold& b) { return b < a ? b : a; }

bool Interval::contains(double y) const { return radius.admits(std::abs(y - center)); }

double Interval::length() const {
  switch (radius.kind()) {
    case Threshold::Kind::kEmpty:
      return 0.0;
    case Threshold::Kind::kUnbounded:
      return std::numeric_limits<double>::infinity();
    case Threshold::Kind::kFinite:
      return 2.0 * radius.value();
  }
  return 0.0;
}

double Interval::lower() const {
  if (radius.is_unbounded()) return -std::numeric_limits<double>::infinity();
  if (radius.is_empty()) return std::numeric_limits<double>::quiet_NaN();
  return center - radius.value();
}

double Interval::upper() const {
  if (radius.is_unbounded()) return std::numeric_limits<double>::infinity();
  if (radius.is_empty()) return std::numeric_limits<double>::quiet_NaN();
  return center + radius.value();
}

ScoreFunction::ScoreFunction(Predictor predictor) : predictor_(std::move(predictor)) {
  if (!predictor_) throw ConfigError("score function needs a predictor");
}

ScoreFunction ScoreFunction::linear(double beta) {
  return ScoreFunction([beta](double x) { return beta * x; });
}

double ScoreFunction::score(double x, double y) const { return std::abs(y - predictor_(x)); }

namespace {

double kth_smallest(std::span<const double> values, std::size_t k) {
  std::vector<double> work(values.begin(), values.end());
  auto nth = work.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(work.begin(), nth, work.end());
  return *nth;
}

}  // namespace

double empirical_quantile(std::span<const double> scores, double beta) {
  if (scores.empty()) throw DomainError("empty calibration");
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
  const auto m = static_cast<double>(scores.size());
  auto rank = static_cast<std::size_t>(std::ceil(m * beta));
  rank = std::clamp<std::size_t>(rank, 1, scores.size());
  return kth_smallest(scores, rank);
}

std::int64_t miscoverage_budget(double alpha, std::size_t m) {
  const double slots = static_cast<double>(m + 1);
  const double budget = std::floor(alpha * slots);
  // Saturate so that absurd levels cannot overflow the integer conversion.
  if (budget <= -1.0) return -1;
  if (budget >= slots) return static_cast<std::int64_t>(m + 1);
  return static_cast<std::int64_t>(budget);
}

Threshold conformal_threshold(std::span<const double> cal_scores, double alpha) {
  const std::size_t m = cal_scores.size();
  const std::int64_t rank = static_cast<std::int64_t>(m) + 1 - miscoverage_budget(alpha, m);
  if (rank <= 0) return Threshold::empty();
  if (rank > static_cast<std::int64_t>(m)) return Threshold::unbounded();
  return Threshold::finite(kth_smallest(cal_scores, static_cast<std::size_t>(rank)));
}

Fraction conformal_p_value(std::span<const double> cal_scores, double test_score) {
  if (!std::isfinite(test_score)) throw DomainError("test score must be finite");
  const auto at_least = std::count_if(cal_scores.begin(), cal_scores.end(),
                                      [test_score](double s) { return s >= test_score; });
  return Fraction{1 + static_cast<std::int64_t>(at_least),
                  static_cast<std::int64_t>(cal_scores.size()) + 1};
}

bool p_value_exceeds(const Fraction& p, double alpha) {
  // p.den == m + 1 for conformal p-values.
  return p.num > miscoverage_budget(alpha, static_cast<std::size_t>(p.den - 1));
}

Interval build_interval(double x, const ScoreFunction& score_fn, const Threshold& threshold) {
  return Interval{score_fn.predict(x), threshold};
}

}  // namespace osci
