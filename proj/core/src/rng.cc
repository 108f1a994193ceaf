// Copyright 2026 The editdiff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "editdiff/rng.h"

namespace editdiff {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(prod >> 32);
  lo = static_cast<std::uint32_t>(prod);
}

Philox::Key key_from_seed(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

}  // namespace

Philox::Block Philox::block(Block ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

Philox::Philox(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {}

std::uint64_t Philox::next_u64() {
  if (buffered_ == 0) {
    const Block ctr = {static_cast<std::uint32_t>(index_),
                       static_cast<std::uint32_t>(index_ >> 32),
                       static_cast<std::uint32_t>(stream_),
                       static_cast<std::uint32_t>(stream_ >> 32)};
    buffer_ = block(ctr, key_from_seed(seed_));
    ++index_;
    buffered_ = 2;
  }
  const int base = (2 - buffered_) * 2;
  --buffered_;
  return static_cast<std::uint64_t>(buffer_[base]) |
         (static_cast<std::uint64_t>(buffer_[base + 1]) << 32);
}

double Philox::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Philox::below(std::uint64_t n) {
  // 128-bit multiply-shift; reject the biased sliver.
  std::uint64_t x = next_u64();
  __uint128_t m = static_cast<__uint128_t>(x) * n;
  std::uint64_t low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      x = next_u64();
      m = static_cast<__uint128_t>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

Philox Philox::split(std::uint64_t stream_id) const {
  const Block ctr = {static_cast<std::uint32_t>(stream_id),
                     static_cast<std::uint32_t>(stream_id >> 32), 0xFFFFFFFFu,
                     0xFFFFFFFFu};
  const Block out = block(ctr, key_from_seed(seed_ ^ (stream_ * 0x9E3779B97F4A7C15ull)));
  const std::uint64_t child = static_cast<std::uint64_t>(out[0]) |
                              (static_cast<std::uint64_t>(out[1]) << 32);
  return Philox(child, 0);
}

}  // namespace editdiff
