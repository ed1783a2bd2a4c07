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

#ifndef OSCI_RANDOM_HPP_
#define OSCI_RANDOM_HPP_

#include <array>
#include <cstdint>
#include <optional>

namespace osci {

// Philox4x32-10 block function (Salmon et al. counter-based generator).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

// Sequential draws from one Philox stream. The key is the 64-bit seed
// (low word first); the counter is (block lo, block hi, stream lo,
// stream hi), so distinct stream ids never share a counter value.
//
// Draw conventions, fixed so that other implementations can reproduce
// the stream:
//   next_u32     consumes the four output words of each block in order
//   next_u64     (hi << 32) | lo from two consecutive next_u32 calls
//   uniform01    (next_u64 >> 11) * 2^-53, in [0, 1)
//   normal       Box-Muller on u1 = 1 - uniform01, u2 = uniform01; the
//                cosine branch is returned first and the sine branch cached
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double normal();

 private:
  PhiloxKey key_;
  std::uint64_t block_ = 0;
  std::uint64_t stream_id_;
  PhiloxCounter buffer_{};
  int used_ = 4;
  std::optional<double> spare_normal_;
};

}  // namespace osci

#endif  // OSCI_RANDOM_HPP_
