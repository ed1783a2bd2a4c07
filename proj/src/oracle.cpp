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

#include "osci/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

#include "osci/core.hpp"
#include "osci/engine.hpp"
#include "osci/random.hpp"

namespace osci {

std::string SearchStrategy::name() const { return hybrid ? "HYBRID" : kind.name(); }

SearchStrategy parse_search_strategy(std::string_view name) {
  if (name == "HYBRID") return SearchStrategy::hybrid_strategy();
  const std::string_view prefix = "K_EXPRESS_";
  if (name.substr(0, prefix.size()) == prefix) {
    const std::string digits(name.substr(prefix.size()));
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("bad K_EXPRESS window in '" + std::string(name) + "'");
    }
    const auto k = std::stoul(digits);
    auto kind = StrategyKind::k_express(k);
    kind.validate();
    return SearchStrategy::engine(kind);
  }
  const auto tag = parse_strategy_tag(name);
  if (tag == StrategyKind::Tag::kKExpress) throw ConfigError("K_EXPRESS needs a window, e.g. K_EXPRESS_2");
  if (tag == StrategyKind::Tag::kExpressM) throw ConfigError("EXPRESS_M is not a single calibration protocol");
  StrategyKind kind;
  kind.tag = tag;
  return SearchStrategy::engine(kind);
}

namespace {

struct Regenerated {
  RuleLedger ledger;
  DecisionHistory history;
  Predicate test_rule = Predicate::constant(true);
};

Regenerated regenerate(const std::vector<double>& online_x, const SelectionRule& rule, std::size_t t) {
  DecisionProcess process(rule);
  for (std::size_t i = 0; i < t; ++i) process.decide(online_x[i]);
  Regenerated r;
  r.test_rule = process.current_rule();
  r.ledger = process.take_ledger();
  r.history = process.take_history();
  return r;
}

// The calibration protocols evaluated straight from their definitions,
// without the interval shortcut the engine uses.
std::vector<int> brute_force_indices(const SearchStrategy& strategy, const std::vector<double>& offline_x,
                                     const std::vector<double>& online_x, const Regenerated& r,
                                     std::size_t t) {
  using Tag = StrategyKind::Tag;
  const int n = static_cast<int>(offline_x.size());
  const int tt = static_cast<int>(t);
  auto x_of = [&](int j) { return j < 0 ? offline_x[static_cast<std::size_t>(j + n)] : online_x[static_cast<std::size_t>(j)]; };
  const double x_t = online_x[t];
  auto agrees = [&](double x, std::size_t from) {
    for (std::size_t i = from; i < t; ++i) {
      if (r.ledger.at(i)(x) != r.ledger.at(i)(x_t)) return false;
    }
    return true;
  };

  std::vector<int> out;
  const Tag tag = strategy.kind.tag;
  for (int j = -n; j < tt; ++j) {
    const double x = x_of(j);
    const bool offline = j < 0;
    bool keep = false;
    if (strategy.hybrid) {
      keep = r.test_rule(x) && (offline || agrees(x, 0));
    } else {
      switch (tag) {
        case Tag::kFull:
          keep = true;
          break;
        case Tag::kSFull:
          keep = r.test_rule(x);
          break;
        case Tag::kSFix:
          keep = offline && r.test_rule(x);
          break;
        case Tag::kAda:
          keep = r.test_rule(x) &&
                 (offline || r.ledger.at(static_cast<std::size_t>(j))(x) == r.ledger.at(static_cast<std::size_t>(j))(x_t));
          break;
        case Tag::kExpress:
          keep = r.test_rule(x) && agrees(x, 0);
          break;
        case Tag::kKExpress: {
          const std::size_t begin = t > strategy.kind.k ? t - strategy.kind.k : 0;
          const bool in_window = offline || static_cast<std::size_t>(j) >= begin;
          keep = in_window && r.test_rule(x) && agrees(x, begin);
          break;
        }
        case Tag::kExpressM:
          throw ContractViolation("EXPRESS_M is not a single calibration protocol");
      }
    }
    if (keep) out.push_back(j);
  }
  return out;
}

std::vector<int> augmented_of(const SearchStrategy& strategy, const std::vector<double>& offline_x,
                              const std::vector<double>& online_x, const SelectionRule& rule, std::size_t t) {
  const Regenerated r = regenerate(online_x, rule, t);
  auto out = brute_force_indices(strategy, offline_x, online_x, r, t);
  if (r.test_rule(online_x[t])) out.push_back(static_cast<int>(t));
  return out;
}

}  // namespace

std::vector<int> augmented_selection(const SmallInstance& instance) {
  return augmented_of(instance.strategy, instance.offline_x, instance.online_x, instance.rule, instance.t());
}

std::optional<std::vector<int>> augmented_indices_at(const std::vector<double>& offline_x,
                                                     const std::vector<double>& online_x,
                                                     const SelectionRule& rule,
                                                     const SearchStrategy& strategy, std::size_t t) {
  if (t >= online_x.size()) throw std::out_of_range("test time beyond the online block");
  const Regenerated r = regenerate(online_x, rule, t);
  if (!r.test_rule(online_x[t])) return std::nullopt;
  auto out = brute_force_indices(strategy, offline_x, online_x, r, t);
  out.push_back(static_cast<int>(t));
  return out;
}

SmallInstance permute_instance(const SmallInstance& instance, const std::vector<int>& domain,
                               const std::vector<int>& image) {
  if (domain.size() != image.size()) throw std::invalid_argument("permutation domain and image differ in size");
  SmallInstance out = instance;
  const int n = static_cast<int>(instance.offline_x.size());
  auto slot = [&](SmallInstance& inst, int j) -> double& {
    return j < 0 ? inst.offline_x[static_cast<std::size_t>(j + n)] : inst.online_x[static_cast<std::size_t>(j)];
  };
  auto value = [&](int j) {
    return j < 0 ? instance.offline_x[static_cast<std::size_t>(j + n)] : instance.online_x[static_cast<std::size_t>(j)];
  };
  for (std::size_t i = 0; i < domain.size(); ++i) slot(out, domain[i]) = value(image[i]);
  return out;
}

std::optional<SymmetryWitness> check_symmetry(const SmallInstance& instance) {
  if (instance.online_x.empty()) throw ConfigError("instance needs a test point");
  if (instance.candidate_count() > kMaxOracleCandidates) {
    throw ConfigError("instance has " + std::to_string(instance.candidate_count()) +
                      " candidate points; at most " + std::to_string(kMaxOracleCandidates) +
                      " can be enumerated");
  }
  const std::vector<int> original = augmented_selection(instance);
  if (original.empty() || original.back() != static_cast<int>(instance.t())) {
    throw ContractViolation("symmetry is only defined for a selected test point");
  }
  std::vector<int> image = original;
  while (std::next_permutation(image.begin(), image.end())) {
    const SmallInstance permuted = permute_instance(instance, original, image);
    auto after = augmented_selection(permuted);
    if (after != original) {
      return SymmetryWitness{instance, original, image, original, std::move(after)};
    }
  }
  return std::nullopt;
}

namespace {

std::size_t uniform_index(PhiloxStream& rng, std::size_t upper_inclusive) {
  const auto n = static_cast<double>(upper_inclusive + 1);
  return std::min(upper_inclusive, static_cast<std::size_t>(rng.uniform01() * n));
}

RuleSpec jitter_spec(RuleSpec spec, PhiloxStream& rng, double jitter) {
  const double scale = std::exp((2.0 * rng.uniform01() - 1.0) * std::log1p(jitter));
  const double shift = (2.0 * rng.uniform01() - 1.0) * jitter / 4.0;
  if (spec.family == RuleFamily::kCustom || spec.family == RuleFamily::kConstantOne) return spec;
  spec.tau0 *= scale;
  spec.tau1 += shift;
  return spec;
}

}  // namespace

std::optional<SmallInstance> draw_search_instance(const WitnessSearch& search, std::uint64_t trial) {
  PhiloxStream rng(search.seed, trial);
  const std::size_t n_off = uniform_index(rng, search.max_n_off);
  const std::size_t t = 1 + uniform_index(rng, search.max_t - 1);
  SmallInstance inst;
  inst.strategy = search.strategy;
  inst.offline_x.resize(n_off);
  inst.online_x.resize(t + 1);
  for (auto& x : inst.offline_x) x = rng.uniform(0.0, 2.0);
  for (auto& x : inst.online_x) x = rng.uniform(0.0, 2.0);
  RuleSpec past = jitter_spec(search.rule.past, rng, search.jitter);
  if (search.rule.test) {
    // A composite rule switches to its test branch at this instance's t.
    inst.rule = SelectionRule(past, jitter_spec(*search.rule.test, rng, search.jitter), t);
  } else {
    inst.rule = SelectionRule(past);
  }
  const Regenerated r = regenerate(inst.online_x, inst.rule, t);
  if (!r.test_rule(inst.online_x[t])) return std::nullopt;
  return inst;
}

WitnessSearchResult search_witness(const WitnessSearch& search) {
  if (search.trials < 1) throw ConfigError("witness search needs at least one trial");
  if (search.max_t < 1 || search.max_n_off + search.max_t > kMaxOracleCandidates) {
    throw ConfigError("witness search instance bounds exceed the enumeration limit");
  }
  WitnessSearchResult result;
  for (std::uint64_t i = 0; i < search.trials; ++i) {
    ++result.trials_run;
    const auto inst = draw_search_instance(search, i);
    if (!inst) continue;
    ++result.instances_checked;
    if (auto w = check_symmetry(*inst)) {
      result.witness = std::move(w);
      break;
    }
  }
  return result;
}

ExchangeabilityReport check_conditional_exchangeability(const ExchangeabilitySetup& setup) {
  setup.data.validate();
  if (setup.t >= setup.data.n_on) throw ConfigError("test time must be below n_on");
  const ScoreFunction score_fn = model_score(setup.data);
  ExchangeabilityReport report;
  for (std::size_t r = 0; r < setup.replicates; ++r) {
    const Dataset d = generate_dataset(setup.data, r);
    std::vector<double> off_x, on_x;
    for (const auto& z : d.offline) off_x.push_back(z.x);
    for (const auto& z : d.online) on_x.push_back(z.x);
    const auto aug = augmented_indices_at(off_x, on_x, setup.rule, setup.strategy, setup.t);
    if (!aug) continue;
    ++report.selected;
    const int n = static_cast<int>(d.offline.size());
    auto score = [&](int j) {
      return score_fn.score(j < 0 ? d.offline[static_cast<std::size_t>(j + n)] : d.online[static_cast<std::size_t>(j)]);
    };
    const double test = score(static_cast<int>(setup.t));
    std::size_t rank = 1;
    for (int j : *aug) {
      if (j != static_cast<int>(setup.t) && score(j) < test) ++rank;
    }
    auto& counts = report.rank_counts[aug->size()];
    counts.resize(aug->size(), 0);
    ++counts[rank - 1];
  }
  for (const auto& [size, counts] : report.rank_counts) {
    if (size < 2) continue;
    std::size_t total = 0;
    for (auto c : counts) total += c;
    const double expected = static_cast<double>(total) / static_cast<double>(size);
    if (expected < static_cast<double>(setup.min_expected)) continue;
    for (auto c : counts) {
      const double d = static_cast<double>(c) - expected;
      report.chi_square += d * d / expected;
    }
    report.degrees_of_freedom += static_cast<double>(size - 1);
    report.used += total;
  }
  report.inconclusive = report.degrees_of_freedom == 0.0;
  if (!report.inconclusive) {
    const boost::math::chi_squared dist(report.degrees_of_freedom);
    report.p_value = boost::math::cdf(boost::math::complement(dist, report.chi_square));
    report.uniform = report.p_value >= setup.reject_p;
  }
  return report;
}

}  // namespace osci
