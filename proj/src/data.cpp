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

#include "osci/data.hpp"

#include <cmath>
#include <string>

#include "osci/random.hpp"

namespace osci {

NoiseParam parse_noise_param(std::string_view name) {
  if (name == "variance") return NoiseParam::kVariance;
  if (name == "stddev") return NoiseParam::kStddev;
  throw ConfigError("unknown noise_param '" + std::string(name) + "' (expected variance or stddev)");
}

std::string_view noise_param_name(NoiseParam p) {
  return p == NoiseParam::kVariance ? "variance" : "stddev";
}

void DataGenConfig::validate() const {
  if (n_on < 1) throw ConfigError("n_on must be at least 1");
  if (!std::isfinite(beta)) throw ConfigError("beta must be finite");
}

double DataGenConfig::noise_sd(double x) const {
  return noise_param == NoiseParam::kVariance ? std::sqrt(x / 2.0) : x / 2.0;
}

Dataset generate_dataset(const DataGenConfig& cfg, std::uint64_t replicate) {
  cfg.validate();
  PhiloxStream rng(cfg.seed, replicate);
  auto draw = [&]() {
    Observation z;
    z.x = rng.uniform(0.0, 2.0);
    z.y = cfg.beta * z.x + cfg.noise_sd(z.x) * rng.normal();
    return z;
  };
  Dataset d;
  d.offline.reserve(cfg.n_off);
  d.online.reserve(cfg.n_on);
  for (std::size_t i = 0; i < cfg.n_off; ++i) d.offline.push_back(draw());
  for (std::size_t i = 0; i < cfg.n_on; ++i) d.online.push_back(draw());
  return d;
}

}  // namespace osci
