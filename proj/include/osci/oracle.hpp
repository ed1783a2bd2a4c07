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

#ifndef OSCI_ORACLE_HPP_
#define OSCI_ORACLE_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "osci/data.hpp"
#include "osci/selection.hpp"
#include "osci/strategies.hpp"

namespace osci {

// Strategies the oracle can probe. Besides the engine strategies this
// includes the hybrid that filters offline points by S_t alone and online
// points by the EXPRESS agreement condition; it exists only here.
struct SearchStrategy {
  StrategyKind kind;
  bool hybrid = false;

  static SearchStrategy engine(StrategyKind k) { return {k, false}; }
  static SearchStrategy hybrid_strategy() { return {StrategyKind::express(), true}; }

  std::string name() const;
  friend bool operator==(const SearchStrategy&, const SearchStrategy&) = default;
};

// Accepts engine strategy names plus "HYBRID" and "K_EXPRESS_<k>".
SearchStrategy parse_search_strategy(std::string_view name);

// Features of J_t and the test point; labels do not enter the index sets.
struct SmallInstance {
  std::vector<double> offline_x;
  std::vector<double> online_x;  // positions 0..t, the last one is the test point
  SelectionRule rule{RuleSpec::constant_one()};
  SearchStrategy strategy = SearchStrategy::engine(StrategyKind::express());

  std::size_t t() const { return online_x.size() - 1; }
  std::size_t candidate_count() const { return offline_x.size() + t(); }
};

inline constexpr std::size_t kMaxOracleCandidates = 8;

// Augmented calibration set: I_t plus t when S_t selects the test point.
std::vector<int> augmented_selection(const SmallInstance& instance);

struct SymmetryWitness {
  SmallInstance instance;
  std::vector<int> domain;    // D~_t in ascending order
  std::vector<int> image;     // pi(domain[i]) = image[i]
  std::vector<int> original;  // I~_t(Z)
  std::vector<int> permuted;  // I~_t(Z_pi), with its own regenerated rules
};

// Applies pi to the stream (identity off D~_t); returns the permuted instance.
SmallInstance permute_instance(const SmallInstance& instance, const std::vector<int>& domain,
                               const std::vector<int>& image);

// Every permutation of D~_t in lexicographic order of the image; the first
// one that changes the augmented selection is returned. Throws ConfigError
// when |J_t| exceeds kMaxOracleCandidates and ContractViolation when the
// test point is not selected.
std::optional<SymmetryWitness> check_symmetry(const SmallInstance& instance);

struct WitnessSearch {
  SearchStrategy strategy;
  SelectionRule rule{RuleSpec::constant_one()};
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::size_t max_n_off = 3;
  std::size_t max_t = 4;
  // tau0 is scaled by a factor in [1/(1+j), 1+j] and tau1 shifted by
  // +-j/4, where j is this jitter.
  double jitter = 1.0;
};

struct WitnessSearchResult {
  std::optional<SymmetryWitness> witness;
  std::size_t trials_run = 0;
  std::size_t instances_checked = 0;  // trials with a selected test point
};

// Random instances with features Unif[0,2] and jittered rule parameters.
// Trial i draws from Philox stream (seed, i).
WitnessSearchResult search_witness(const WitnessSearch& search);

// Draws the instance of trial `trial`; nullopt when its test point is not
// selected.
std::optional<SmallInstance> draw_search_instance(const WitnessSearch& search, std::uint64_t trial);

struct ExchangeabilitySetup {
  DataGenConfig data;
  SelectionRule rule{RuleSpec::constant_one()};
  SearchStrategy strategy = SearchStrategy::engine(StrategyKind::express());
  std::size_t t = 0;                  // test time
  std::size_t replicates = 10000;
  std::size_t min_expected = 5;       // per-cell expected count to use a size stratum
  double reject_p = 0.00135;          // one-sided 3 sigma
};

struct ExchangeabilityReport {
  std::size_t selected = 0;       // replicates with S_t = 1
  std::size_t used = 0;           // replicates in strata that were tested
  double chi_square = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;
  bool inconclusive = true;
  bool uniform = true;            // not rejected (only meaningful when conclusive)
  // Size of D~_t -> counts of the test-score rank 1..size.
  std::map<std::size_t, std::vector<std::size_t>> rank_counts;
};

// Rank of the test score within the augmented set, stratified by its size,
// against the discrete uniform law. Per-stratum Pearson statistics are
// summed.
ExchangeabilityReport check_conditional_exchangeability(const ExchangeabilitySetup& setup);

// Augmented calibration scores for any search strategy at time t of a
// generated stream; empty when the test point is not selected.
std::optional<std::vector<int>> augmented_indices_at(const std::vector<double>& offline_x,
                                                     const std::vector<double>& online_x,
                                                     const SelectionRule& rule,
                                                     const SearchStrategy& strategy, std::size_t t);

}  // namespace osci

#endif  // OSCI_ORACLE_HPP_
