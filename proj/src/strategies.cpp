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

#include "osci/strategies.hpp"

#include <limits>

#include "osci/core.hpp"

namespace osci {

void StrategyKind::validate() const {
  if (tag == Tag::kKExpress && k < 1) throw ConfigError("K_EXPRESS needs k >= 1");
  if (tag == Tag::kExpressM && horizon_T < 2) {
    throw ConfigError("EXPRESS_M needs horizon_T >= 2 so that both arms get a level in (0, 1)");
  }
}

std::string StrategyKind::name() const {
  std::string base(strategy_tag_name(tag));
  if (tag == Tag::kKExpress) base += "_" + std::to_string(k);
  return base;
}

StrategyKind::Tag parse_strategy_tag(std::string_view name) {
  using Tag = StrategyKind::Tag;
  if (name == "FULL") return Tag::kFull;
  if (name == "S_FULL") return Tag::kSFull;
  if (name == "S_FIX") return Tag::kSFix;
  if (name == "ADA") return Tag::kAda;
  if (name == "EXPRESS") return Tag::kExpress;
  if (name == "K_EXPRESS") return Tag::kKExpress;
  if (name == "EXPRESS_M") return Tag::kExpressM;
  throw ConfigError("unknown strategy '" + std::string(name) + "'");
}

std::string_view strategy_tag_name(StrategyKind::Tag tag) {
  using Tag = StrategyKind::Tag;
  switch (tag) {
    case Tag::kFull:
      return "FULL";
    case Tag::kSFull:
      return "S_FULL";
    case Tag::kSFix:
      return "S_FIX";
    case Tag::kAda:
      return "ADA";
    case Tag::kExpress:
      return "EXPRESS";
    case Tag::kKExpress:
      return "K_EXPRESS";
    case Tag::kExpressM:
      return "EXPRESS_M";
  }
  return "UNKNOWN";
}

namespace {

std::size_t window_begin(const StrategyKind& kind, std::size_t t) {
  if (kind.tag == StrategyKind::Tag::kKExpress && t > kind.k) return t - kind.k;
  return 0;
}

}  // namespace

std::vector<int> candidate_window(const StrategyKind& kind, std::size_t t, std::size_t n_off) {
  std::vector<int> out;
  const std::size_t begin = window_begin(kind, t);
  out.reserve(n_off + t - begin);
  for (int j = -static_cast<int>(n_off); j < 0; ++j) out.push_back(j);
  for (std::size_t j = begin; j < t; ++j) out.push_back(static_cast<int>(j));
  return out;
}

AgreementRegion::AgreementRegion(const RuleLedger& ledger, std::size_t begin, std::size_t end, double x_ref)
    : ledger_(&ledger),
      begin_(begin),
      end_(end),
      x_ref_(x_ref),
      lo_(-std::numeric_limits<double>::infinity()),
      hi_(std::numeric_limits<double>::infinity()) {
  auto raise_lo = [this](double v, bool inclusive) {
    if (v > lo_ || (v == lo_ && !inclusive)) {
      lo_ = v;
      lo_inclusive_ = inclusive;
    }
  };
  auto lower_hi = [this](double v, bool inclusive) {
    if (v < hi_ || (v == hi_ && !inclusive)) {
      hi_ = v;
      hi_inclusive_ = inclusive;
    }
  };
  for (std::size_t i = begin; i < end; ++i) {
    const Predicate& p = ledger.at(i);
    switch (p.kind()) {
      case Predicate::Kind::kBelow:  // 1{x < c}
        if (x_ref < p.cut()) {
          lower_hi(p.cut(), false);
        } else {
          raise_lo(p.cut(), true);
        }
        break;
      case Predicate::Kind::kAbove:  // 1{x > c}
        if (x_ref > p.cut()) {
          raise_lo(p.cut(), false);
        } else {
          lower_hi(p.cut(), true);
        }
        break;
      case Predicate::Kind::kConstant:
        break;
      case Predicate::Kind::kCustom:
        structured_ = false;
        break;
    }
  }
}

bool AgreementRegion::contains(double x) const {
  if (!structured_) {
    for (std::size_t i = begin_; i < end_; ++i) {
      const Predicate& p = ledger_->at(i);
      if (p(x) != p(x_ref_)) return false;
    }
    return true;
  }
  const bool above_lo = lo_inclusive_ ? x >= lo_ : x > lo_;
  const bool below_hi = hi_inclusive_ ? x <= hi_ : x < hi_;
  return above_lo && below_hi;
}

std::vector<int> calibration_indices(const StrategyKind& kind, std::size_t t, double x_t,
                                     const FeatureView& features, const RuleLedger& ledger,
                                     const DecisionHistory& history, const Predicate& test_rule) {
  using Tag = StrategyKind::Tag;
  kind.validate();
  if (ledger.size() < t || history.size() < t) {
    throw ContractViolation("ledger does not cover times 0..t-1");
  }
  if (features.online.size() < t) throw ContractViolation("missing online features before t");

  const int n = features.n_off();
  const int tt = static_cast<int>(t);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(n) + t);

  switch (kind.tag) {
    case Tag::kFull:
      for (int j = -n; j < tt; ++j) out.push_back(j);
      break;
    case Tag::kSFull:
      for (int j = -n; j < tt; ++j) {
        if (test_rule(features.at(j))) out.push_back(j);
      }
      break;
    case Tag::kSFix:
      for (int j = -n; j < 0; ++j) {
        if (test_rule(features.at(j))) out.push_back(j);
      }
      break;
    case Tag::kAda:
      for (int j = -n; j < 0; ++j) {
        if (test_rule(features.at(j))) out.push_back(j);
      }
      for (int j = 0; j < tt; ++j) {
        const double x = features.at(j);
        const auto jj = static_cast<std::size_t>(j);
        // S_j(X_j) is the recorded decision s_j.
        if (test_rule(x) && history.at(jj) == replay(ledger, jj, x_t)) out.push_back(j);
      }
      break;
    case Tag::kExpress:
    case Tag::kKExpress: {
      const std::size_t begin = window_begin(kind, t);
      const AgreementRegion region(ledger, begin, t, x_t);
      for (int j : candidate_window(kind, t, static_cast<std::size_t>(n))) {
        const double x = features.at(j);
        if (test_rule(x) && region.contains(x)) out.push_back(j);
      }
      break;
    }
    case Tag::kExpressM:
      throw ContractViolation("EXPRESS_M merges two calibration sets; use express_m_interval");
  }
  return out;
}

CalibrationSet select_calibration(const StrategyKind& kind, std::size_t t, double x_t,
                                  const FeatureView& features, const RuleLedger& ledger,
                                  const DecisionHistory& history, const Predicate& test_rule) {
  if (!test_rule(x_t)) {
    throw ContractViolation("calibration selection requested for a test point that was not selected");
  }
  CalibrationSet set;
  set.indices = calibration_indices(kind, t, x_t, features, ledger, history, test_rule);
  set.augmented = set.indices;
  set.augmented.push_back(static_cast<int>(t));
  return set;
}

}  // namespace osci
