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

#ifndef OSCI_CORE_HPP_
#define OSCI_CORE_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace osci {

// Raised when a statistical primitive is asked for something undefined
// (e.g. a quantile of nothing).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised for invalid user-supplied parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Observation {
  double x = 0.0;
  double y = 0.0;
};

// A non-negative rational number num/den; used for conformal p-values and
// false coverage proportions so that comparisons stay exact.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.num * b.den == b.num * a.den;
  }
};

// Miscoverage level alpha, validated to lie strictly inside (0, 1).
class Level {
 public:
  explicit Level(double alpha);
  double value() const { return alpha_; }

 private:
  double alpha_;
};

// Cut-off on the non-conformity score. Besides a finite value it may be
// "unbounded" (every label is accepted) or "empty" (no label is accepted;
// only reachable with levels >= 1, as ACI can produce).
class Threshold {
 public:
  enum class Kind { kEmpty, kFinite, kUnbounded };

  static Threshold finite(double value);
  static Threshold unbounded() { return Threshold(Kind::kUnbounded, 0.0); }
  static Threshold empty() { return Threshold(Kind::kEmpty, 0.0); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::kFinite; }
  bool is_unbounded() const { return kind_ == Kind::kUnbounded; }
  bool is_empty() const { return kind_ == Kind::kEmpty; }
  // Only meaningful when is_finite().
  double value() const { return value_; }

  bool admits(double score) const;

  friend bool operator==(const Threshold& a, const Threshold& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::kFinite || a.value_ == b.value_);
  }
  // Orders empty < finite (by value) < unbounded.
  friend bool operator<(const Threshold& a, const Threshold& b);

 private:
  Threshold(Kind kind, double value) : kind_(kind), value_(value) {}
  Kind kind_;
  double value_;
};

const Threshold& tighter(const Threshold& a, const Threshold& b);

// Symmetric interval center +/- radius.
struct Interval {
  double center = 0.0;
  Threshold radius = Threshold::unbounded();

  bool contains(double y) const;
  bool is_infinite() const { return radius.is_unbounded(); }
  // 2 * radius; +inf when unbounded and 0 when empty.
  double length() const;
  double lower() const;
  double upper() const;
};

// Absolute-residual score |y - predictor(x)|.
class ScoreFunction {
 public:
  using Predictor = std::function<double(double)>;

  explicit ScoreFunction(Predictor predictor);
  // The model used throughout the simulations: x -> beta * x.
  static ScoreFunction linear(double beta);

  double predict(double x) const { return predictor_(x); }
  double score(double x, double y) const;
  double score(const Observation& z) const { return score(z.x, z.y); }

 private:
  Predictor predictor_;
};

// The ceil(m * beta)-th smallest of the m scores.
double empirical_quantile(std::span<const double> scores, double beta);

// Number of calibration scores allowed to exceed the threshold:
// floor(alpha * (m + 1)). The threshold is the (m + 1 - budget)-th order
// statistic and a p-value c / (m + 1) exceeds alpha iff c > alpha * (m + 1);
// both sides go through this one expression so that the interval and the
// p-value agree exactly.
std::int64_t miscoverage_budget(double alpha, std::size_t m);

// Inflated split-conformal threshold: the ceil((1 - alpha)(m + 1))-th
// smallest score, unbounded when that rank exceeds m. Any real alpha is
// accepted; alpha >= 1 yields an empty threshold.
Threshold conformal_threshold(std::span<const double> cal_scores, double alpha);
inline Threshold conformal_threshold(std::span<const double> cal_scores, Level alpha) {
  return conformal_threshold(cal_scores, alpha.value());
}

// (1 + #{cal >= test}) / (m + 1).
Fraction conformal_p_value(std::span<const double> cal_scores, double test_score);

// p > alpha, evaluated consistently with conformal_threshold.
bool p_value_exceeds(const Fraction& p, double alpha);

Interval build_interval(double x, const ScoreFunction& score_fn, const Threshold& threshold);

}  // namespace osci

#endif  // OSCI_CORE_HPP_
