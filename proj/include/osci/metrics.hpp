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

#ifndef OSCI_METRICS_HPP_
#define OSCI_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "osci/core.hpp"
#include "osci/engine.hpp"

namespace osci {

// Sample mean with its standard error (unbiased sample variance). The
// standard error is absent for fewer than two samples.
struct Estimate {
  double value = 0.0;
  std::optional<double> stderr_;
  std::size_t n = 0;
};

// Count, mean and sum of squared deviations (Welford updates, Chan merges).
// Constant samples give an exactly zero variance.
struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  void merge(const Moments& other);
  Estimate estimate() const;
};

// Sum_{t <= T} S_t 1{Y_t not in C_t} / (1 v sum_{t <= T} S_t).
Fraction fcp(const Trajectory& traj, std::size_t T);

Estimate fcr_estimate(std::span<const Trajectory> trajs, std::size_t T);

// Mean FCP over replicates with at least one selection up to T; absent when
// no replicate selects.
std::optional<Estimate> pfcr_estimate(std::span<const Trajectory> trajs, std::size_t T);

// Fraction of replicates with at least one selection up to T.
double selection_probability(std::span<const Trajectory> trajs, std::size_t T);

struct BucketResult {
  std::vector<std::uint8_t> prefix;
  std::size_t count = 0;  // replicates with this prefix and S_t = 1
  std::size_t misses = 0;
  bool skipped = true;    // count below the minimum
  std::optional<Estimate> miscoverage;
};

// P(Y_t not in C_t | S_0..S_{t-1} = prefix, S_t = 1).
BucketResult conditional_miscoverage(std::span<const Trajectory> trajs, std::size_t t,
                                     std::span<const std::uint8_t> prefix,
                                     std::size_t min_count = 500);

// All decision prefixes observed with S_t = 1, keyed by prefix.
std::map<std::vector<std::uint8_t>, BucketResult> conditional_miscoverage_buckets(
    std::span<const Trajectory> trajs, std::size_t t, std::size_t min_count = 500);

struct IntervalStats {
  std::optional<double> median_length;      // finite intervals only
  std::optional<double> infinite_fraction;  // over all selected intervals
  std::optional<double> mean_calib_size;
  std::size_t n_selected = 0;
};

IntervalStats interval_stats(std::span<const Trajectory> trajs, std::size_t T);

// Per-time aggregates across replicates.
struct MetricsFrame {
  std::size_t replicate_count = 0;
  std::vector<Estimate> fcr;
  std::vector<std::optional<Estimate>> pfcr;
  std::vector<std::size_t> positive_count;  // replicates with sum S > 0 up to t
  std::vector<std::optional<Estimate>> miscoverage;
  std::vector<std::optional<Estimate>> infinite_fraction;
  std::vector<std::optional<Estimate>> mean_calib_size;
  std::vector<std::optional<double>> median_length;
  std::vector<std::size_t> finite_count;
  std::vector<Estimate> selection_rate;
  std::vector<std::optional<Estimate>> mean_level;

  std::size_t horizon() const { return fcr.size(); }
};

// Streaming reduction of trajectories into a MetricsFrame. Merging
// accumulators in a fixed order gives the same frame regardless of how the
// replicates were split.
class MetricsAccumulator {
 public:
  // Interval lengths are kept (for exact medians) only from time
  // `lengths_from` on, which bounds memory for terminal-only evaluation.
  explicit MetricsAccumulator(std::size_t horizon, std::size_t lengths_from = 0);

  void add(const Trajectory& traj);
  void merge(const MetricsAccumulator& other);
  MetricsFrame frame() const;
  std::size_t replicate_count() const { return replicates_; }

 private:
  struct PerTime {
    Moments fcp;           // all replicates
    Moments fcp_positive;  // replicates with a selection up to t
    std::size_t selected = 0;
    std::size_t misses = 0;
    std::size_t infinite = 0;
    Moments calib;
    Moments level;
    std::size_t finite = 0;
    std::vector<float> finite_lengths;
  };

  std::size_t replicates_ = 0;
  std::size_t lengths_from_ = 0;
  std::vector<PerTime> per_time_;
};

// Mean with unbiased-variance standard error from running sums.
Estimate estimate_from_sums(double sum, double sq_sum, std::size_t n);

}  // namespace osci

#endif  // OSCI_METRICS_HPP_
