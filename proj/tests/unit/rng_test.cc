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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "editdiff/rng.h"

namespace editdiff {
namespace {

// Known-answer vectors published with the Random123 distribution.
TEST(Philox, KnownAnswerZero) {
  const auto out = Philox::block({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (Philox::Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
  const auto out = Philox::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                 {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out, (Philox::Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
  const auto out = Philox::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                 {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out, (Philox::Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, StreamIsReproducible) {
  Philox a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs |= x != c.next_u64();
  }
  EXPECT_TRUE(differs);
}

TEST(Philox, SplitStreamsAreDistinctAndStable) {
  const Philox root(9);
  Philox s1 = root.split(1), s1b = root.split(1), s2 = root.split(2);
  Philox parent(9);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 50; ++i) {
    const auto v = s1.next_u64();
    EXPECT_EQ(v, s1b.next_u64());
    seen.insert(v);
    seen.insert(s2.next_u64());
    seen.insert(parent.next_u64());
  }
  EXPECT_EQ(seen.size(), 150u);
}

TEST(Philox, UniformAndBelowRanges) {
  Philox r(5);
  double sum = 0;
  const int n = 100000;
  std::vector<int> counts(7, 0);
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    const auto k = r.below(7);
    ASSERT_LT(k, 7u);
    ++counts[k];
  }
  EXPECT_NEAR(sum / n, 0.5, 0.005);
  for (int c : counts) EXPECT_NEAR(c / double(n), 1.0 / 7, 0.01);
}

TEST(Philox, BernoulliEdges) {
  Philox r(1);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_FALSE(r.bernoulli(0.0));
    EXPECT_TRUE(r.bernoulli(1.0));
  }
}

}  // namespace
}  // namespace editdiff
