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

#ifndef EDITDIFF_RNG_H_
#define EDITDIFF_RNG_H_

#include <array>
#include <cstdint>
#include <limits>

namespace editdiff {

// Philox4x32-10 (Salmon et al., Random123) driven in counter mode.
//
// The 64-bit seed is the Philox key. The 128-bit counter is (stream, index):
// the high 64 bits select an independent stream, the low 64 bits count blocks.
// Each block yields four 32-bit words, consumed as two 64-bit draws (low word
// first). split(id) derives a child key by encrypting (id, ~0) under the
// parent key, so children never overlap the parent's own counter space.
//
// All derived quantities (uniform doubles, bounded integers, Bernoulli draws)
// are defined here rather than through <random> distributions, whose output
// is implementation-defined; the same seed gives the same bits everywhere.
class Philox {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox(std::uint64_t seed = 0, std::uint64_t stream = 0);

  // The raw block function.
  static Block block(Block counter, Key key);

  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  std::uint64_t next_u64();
  // 53-bit uniform in [0, 1).
  double uniform();
  // Uniform integer in [0, n); n must be positive. Lemire's method with
  // rejection, so the result is exactly uniform.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }

  Philox split(std::uint64_t stream_id) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t index_ = 0;
  Block buffer_{};
  int buffered_ = 0;  // 64-bit words remaining in buffer_
};

}  // namespace editdiff

#endif  // EDITDIFF_RNG_H_
