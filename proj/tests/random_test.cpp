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

#include "osci/random.hpp"

#include <cmath>
#include <set>

#include <gtest/gtest.h>

namespace osci {
namespace {

// Known-answer vectors of the reference Philox4x32-10 implementation.
TEST(PhiloxTest, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(PhiloxStreamTest, LayoutOfCounterAndKey) {
  PhiloxStream s(0x0000000200000001ULL, 0x0000000400000003ULL);
  const auto block0 = philox4x32_10({0, 0, 3, 4}, {1, 2});
  const auto block1 = philox4x32_10({1, 0, 3, 4}, {1, 2});
  for (auto w : block0) EXPECT_EQ(s.next_u32(), w);
  EXPECT_EQ(s.next_u64(), (static_cast<std::uint64_t>(block1[1]) << 32) | block1[0]);
}

TEST(PhiloxStreamTest, UniformInUnitInterval) {
  PhiloxStream s(7, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(PhiloxStreamTest, NormalMoments) {
  PhiloxStream s(11, 5);
  double sum = 0.0;
  double sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(sq / n, 1.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(PhiloxStreamTest, StreamsAreDistinctAndRepeatable) {
  std::set<std::uint64_t> first;
  for (std::uint64_t id = 0; id < 100; ++id) {
    PhiloxStream s(1, id);
    EXPECT_TRUE(first.insert(s.next_u64()).second);
  }
  PhiloxStream a(42, 9);
  PhiloxStream b(42, 9);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(a.normal(), b.normal());
}

}  // namespace
}  // namespace osci
