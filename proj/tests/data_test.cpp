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

#include <gtest/gtest.h>

#include "osci/random.hpp"

namespace osci {
namespace {

TEST(GenerateDatasetTest, SizesAndDeterminism) {
  DataGenConfig cfg;
  cfg.n_off = 7;
  cfg.n_on = 13;
  cfg.seed = 2026;
  const auto a = generate_dataset(cfg, 3);
  const auto b = generate_dataset(cfg, 3);
  ASSERT_EQ(a.offline.size(), 7u);
  ASSERT_EQ(a.online.size(), 13u);
  for (std::size_t i = 0; i < 13; ++i) {
    EXPECT_EQ(a.online[i].x, b.online[i].x);
    EXPECT_EQ(a.online[i].y, b.online[i].y);
  }
  const auto c = generate_dataset(cfg, 4);
  EXPECT_NE(a.online[0].x, c.online[0].x);
}

TEST(GenerateDatasetTest, FollowsTheDocumentedDrawOrder) {
  DataGenConfig cfg;
  cfg.n_off = 1;
  cfg.n_on = 1;
  cfg.beta = 2.0;
  cfg.seed = 99;
  const auto d = generate_dataset(cfg, 5);
  PhiloxStream s(99, 5);
  const double x0 = s.uniform(0.0, 2.0);
  const double y0 = 2.0 * x0 + std::sqrt(x0 / 2.0) * s.normal();
  const double x1 = s.uniform(0.0, 2.0);
  const double y1 = 2.0 * x1 + std::sqrt(x1 / 2.0) * s.normal();
  EXPECT_EQ(d.offline[0].x, x0);
  EXPECT_EQ(d.offline[0].y, y0);
  EXPECT_EQ(d.online[0].x, x1);
  EXPECT_EQ(d.online[0].y, y1);
}

TEST(GenerateDatasetTest, FeatureMean) {
  DataGenConfig cfg;
  cfg.n_off = 0;
  cfg.n_on = 1000;
  cfg.seed = 1;
  double sum = 0.0;
  for (std::uint64_t r = 0; r < 1000; ++r) {
    for (const auto& z : generate_dataset(cfg, r).online) sum += z.x;
  }
  EXPECT_NEAR(sum / 1e6, 1.0, 0.01);
}

TEST(GenerateDatasetTest, ConditionalNoiseVariance) {
  DataGenConfig cfg;
  cfg.n_off = 0;
  cfg.n_on = 1000;
  cfg.seed = 2;
  double sq = 0.0;
  std::size_t n = 0;
  for (std::uint64_t r = 0; r < 1000; ++r) {
    for (const auto& z : generate_dataset(cfg, r).online) {
      if (z.x < 0.9 || z.x > 1.1) continue;
      const double eps = z.y - z.x;
      sq += eps * eps;
      ++n;
    }
  }
  EXPECT_NEAR(sq / static_cast<double>(n), 0.5, 0.05);

  // Direct sampler for comparison: X uniform on the window, N(0, X/2) noise.
  PhiloxStream s(3, 0);
  double ref = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = s.uniform(0.9, 1.1);
    const double e = std::sqrt(x / 2.0) * s.normal();
    ref += e * e;
  }
  EXPECT_NEAR(sq / static_cast<double>(n), ref / static_cast<double>(n), 0.02);
}

TEST(DataGenConfigTest, NoiseReadings) {
  DataGenConfig cfg;
  EXPECT_DOUBLE_EQ(cfg.noise_sd(1.0), std::sqrt(0.5));
  cfg.noise_param = NoiseParam::kStddev;
  EXPECT_DOUBLE_EQ(cfg.noise_sd(1.0), 0.5);
  EXPECT_EQ(parse_noise_param(noise_param_name(NoiseParam::kStddev)), NoiseParam::kStddev);
  EXPECT_THROW(parse_noise_param("precision"), ConfigError);
}

TEST(DataGenConfigTest, Validate) {
  DataGenConfig cfg;
  cfg.n_on = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.n_on = 1;
  cfg.beta = std::nan("");
  EXPECT_THROW(cfg.validate(), ConfigError);
}

}  // namespace
}  // namespace osci
