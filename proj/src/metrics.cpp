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

#include "osci/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace osci {

namespace {

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void check_horizon(const Trajectory& traj, std::size_t T) {
  if (T >= traj.records.size()) {
    throw std::out_of_range("time " + std::to_string(T) + " beyond trajectory of length " +
                            std::to_string(traj.records.size()));
  }
}

}  // namespace

Estimate estimate_from_sums(double sum, double sq_sum, std::size_t n) {
  Estimate e;
  e.n = n;
  if (n == 0) return e;
  const double nn = static_cast<double>(n);
  e.value = sum / nn;
  if (n >= 2) {
    const double var = std::max(0.0, (sq_sum - nn * e.value * e.value) / (nn - 1.0));
    e.stderr_ = std::sqrt(var / nn);
  }
  return e;
}

void Moments::add(double x) {
  ++n;
  const double d = x - mean;
  mean += d / static_cast<double>(n);
  m2 += d * (x - mean);
}

void Moments::merge(const Moments& other) {
  if (other.n == 0) return;
  if (n == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n);
  const double nb = static_cast<double>(other.n);
  const double total = na + nb;
  const double d = other.mean - mean;
  mean += d * nb / total;
  m2 += other.m2 + d * d * na * nb / total;
  n += other.n;
}

Estimate Moments::estimate() const {
  Estimate e;
  e.n = n;
  if (n == 0) return e;
  e.value = mean;
  if (n >= 2) e.stderr_ = std::sqrt(std::max(0.0, m2) / static_cast<double>(n - 1) / static_cast<double>(n));
  return e;
}

Fraction fcp(const Trajectory& traj, std::size_t T) {
  check_horizon(traj, T);
  std::int64_t selected = 0;
  std::int64_t misses = 0;
  for (std::size_t t = 0; t <= T; ++t) {
    const auto& rec = traj.records[t];
    if (!rec.selected) continue;
    ++selected;
    if (!rec.covered) ++misses;
  }
  return Fraction{misses, std::max<std::int64_t>(1, selected)};
}

Estimate fcr_estimate(std::span<const Trajectory> trajs, std::size_t T) {
  Moments m;
  for (const auto& traj : trajs) m.add(fcp(traj, T).value());
  return m.estimate();
}

namespace {

bool any_selected(const Trajectory& traj, std::size_t T) {
  check_horizon(traj, T);
  return std::any_of(traj.records.begin(), traj.records.begin() + static_cast<std::ptrdiff_t>(T) + 1,
                     [](const StepRecord& r) { return r.selected; });
}

}  // namespace

std::optional<Estimate> pfcr_estimate(std::span<const Trajectory> trajs, std::size_t T) {
  Moments m;
  for (const auto& traj : trajs) {
    if (any_selected(traj, T)) m.add(fcp(traj, T).value());
  }
  if (m.n == 0) return std::nullopt;
  return m.estimate();
}

double selection_probability(std::span<const Trajectory> trajs, std::size_t T) {
  if (trajs.empty()) return 0.0;
  const auto n = std::count_if(trajs.begin(), trajs.end(),
                               [T](const Trajectory& tr) { return any_selected(tr, T); });
  return static_cast<double>(n) / static_cast<double>(trajs.size());
}

namespace {

void finish_bucket(BucketResult& b, std::size_t min_count) {
  b.skipped = b.count < min_count;
  if (b.count > 0) {
    const double m = static_cast<double>(b.misses);
    b.miscoverage = estimate_from_sums(m, m, b.count);
  }
}

}  // namespace

BucketResult conditional_miscoverage(std::span<const Trajectory> trajs, std::size_t t,
                                     std::span<const std::uint8_t> prefix, std::size_t min_count) {
  if (prefix.size() != t) throw std::invalid_argument("decision prefix must have length t");
  BucketResult b;
  b.prefix.assign(prefix.begin(), prefix.end());
  for (const auto& traj : trajs) {
    check_horizon(traj, t);
    const auto bits = traj.history.bits();
    if (!std::equal(prefix.begin(), prefix.end(), bits.begin())) continue;
    const auto& rec = traj.records[t];
    if (!rec.selected) continue;
    ++b.count;
    if (!rec.covered) ++b.misses;
  }
  finish_bucket(b, min_count);
  return b;
}

std::map<std::vector<std::uint8_t>, BucketResult> conditional_miscoverage_buckets(
    std::span<const Trajectory> trajs, std::size_t t, std::size_t min_count) {
  std::map<std::vector<std::uint8_t>, BucketResult> buckets;
  for (const auto& traj : trajs) {
    check_horizon(traj, t);
    const auto& rec = traj.records[t];
    if (!rec.selected) continue;
    const auto bits = traj.history.bits();
    std::vector<std::uint8_t> key(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(t));
    auto& b = buckets[key];
    b.prefix = key;
    ++b.count;
    if (!rec.covered) ++b.misses;
  }
  for (auto& [key, b] : buckets) finish_bucket(b, min_count);
  return buckets;
}

IntervalStats interval_stats(std::span<const Trajectory> trajs, std::size_t T) {
  IntervalStats s;
  std::vector<double> finite;
  std::size_t infinite = 0;
  double calib = 0.0;
  for (const auto& traj : trajs) {
    check_horizon(traj, T);
    const auto& rec = traj.records[T];
    if (!rec.selected) continue;
    ++s.n_selected;
    calib += static_cast<double>(rec.calib_size);
    if (rec.interval->is_infinite()) {
      ++infinite;
    } else {
      finite.push_back(rec.interval->length());
    }
  }
  if (s.n_selected > 0) {
    s.infinite_fraction = static_cast<double>(infinite) / static_cast<double>(s.n_selected);
    s.mean_calib_size = calib / static_cast<double>(s.n_selected);
  }
  if (!finite.empty()) s.median_length = median_of(std::move(finite));
  return s;
}

MetricsAccumulator::MetricsAccumulator(std::size_t horizon, std::size_t lengths_from)
    : lengths_from_(lengths_from), per_time_(horizon) {}

void MetricsAccumulator::add(const Trajectory& traj) {
  if (traj.records.size() != per_time_.size()) {
    throw std::invalid_argument("trajectory length does not match accumulator horizon");
  }
  ++replicates_;
  std::size_t selected = 0;
  std::size_t misses = 0;
  for (std::size_t t = 0; t < per_time_.size(); ++t) {
    const auto& rec = traj.records[t];
    auto& pt = per_time_[t];
    if (rec.selected) {
      ++selected;
      ++pt.selected;
      if (!rec.covered) {
        ++misses;
        ++pt.misses;
      }
      pt.calib.add(static_cast<double>(rec.calib_size));
      if (rec.interval->is_infinite()) {
        ++pt.infinite;
      } else {
        ++pt.finite;
        if (t >= lengths_from_) pt.finite_lengths.push_back(static_cast<float>(rec.interval->length()));
      }
      if (rec.level) pt.level.add(*rec.level);
    }
    const double v = static_cast<double>(misses) / static_cast<double>(std::max<std::size_t>(1, selected));
    pt.fcp.add(v);
    if (selected > 0) pt.fcp_positive.add(v);
  }
}

void MetricsAccumulator::merge(const MetricsAccumulator& other) {
  if (other.per_time_.size() != per_time_.size() || other.lengths_from_ != lengths_from_) throw std::invalid_argument("horizon mismatch");
  replicates_ += other.replicates_;
  for (std::size_t t = 0; t < per_time_.size(); ++t) {
    auto& a = per_time_[t];
    const auto& b = other.per_time_[t];
    a.fcp.merge(b.fcp);
    a.fcp_positive.merge(b.fcp_positive);
    a.selected += b.selected;
    a.misses += b.misses;
    a.infinite += b.infinite;
    a.finite += b.finite;
    a.calib.merge(b.calib);
    a.level.merge(b.level);
    a.finite_lengths.insert(a.finite_lengths.end(), b.finite_lengths.begin(), b.finite_lengths.end());
  }
}

MetricsFrame MetricsAccumulator::frame() const {
  MetricsFrame f;
  f.replicate_count = replicates_;
  const std::size_t T = per_time_.size();
  f.fcr.resize(T);
  f.pfcr.resize(T);
  f.positive_count.resize(T);
  f.miscoverage.resize(T);
  f.infinite_fraction.resize(T);
  f.mean_calib_size.resize(T);
  f.median_length.resize(T);
  f.finite_count.resize(T);
  f.selection_rate.resize(T);
  f.mean_level.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    const auto& pt = per_time_[t];
    f.fcr[t] = pt.fcp.estimate();
    f.positive_count[t] = pt.fcp_positive.n;
    if (pt.fcp_positive.n > 0) f.pfcr[t] = pt.fcp_positive.estimate();
    const double sel = static_cast<double>(pt.selected);
    f.selection_rate[t] = estimate_from_sums(sel, sel, replicates_);
    if (pt.selected > 0) {
      const double miss = static_cast<double>(pt.misses);
      const double inf = static_cast<double>(pt.infinite);
      f.miscoverage[t] = estimate_from_sums(miss, miss, pt.selected);
      f.infinite_fraction[t] = estimate_from_sums(inf, inf, pt.selected);
      f.mean_calib_size[t] = pt.calib.estimate();
    }
    if (pt.level.n > 0) f.mean_level[t] = pt.level.estimate();
    f.finite_count[t] = pt.finite;
    if (!pt.finite_lengths.empty()) {
      f.median_length[t] = median_of(std::vector<double>(pt.finite_lengths.begin(), pt.finite_lengths.end()));
    }
  }
  return f;
}

}  // namespace osci
