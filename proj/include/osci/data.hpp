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

#ifndef OSCI_DATA_HPP_
#define OSCI_DATA_HPP_

#include <cstdint>
#include <string_view>

#include "osci/core.hpp"
#include "osci/engine.hpp"

namespace osci {

// How the noise scale X/2 is read: as the variance (sd = sqrt(X/2)) or as
// the standard deviation (sd = X/2).
enum class NoiseParam { kVariance, kStddev };

NoiseParam parse_noise_param(std::string_view name);
std::string_view noise_param_name(NoiseParam p);

// X ~ Unif[0, 2], Y = beta X + eps, eps | X ~ N(0, X/2).
struct DataGenConfig {
  std::size_t n_off = 0;
  std::size_t n_on = 1;
  double beta = 1.0;
  NoiseParam noise_param = NoiseParam::kVariance;
  std::uint64_t seed = 0;

  void validate() const;
  double noise_sd(double x) const;
};

// Replicate r draws from its own Philox stream (seed, r): offline points
// first, then online, each as x followed by its noise draw.
Dataset generate_dataset(const DataGenConfig& cfg, std::uint64_t replicate = 0);

// The fitted model equals the true regression function.
inline ScoreFunction model_score(const DataGenConfig& cfg) { return ScoreFunction::linear(cfg.beta); }

}  // namespace osci

#endif  // OSCI_DATA_HPP_
