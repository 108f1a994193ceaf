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

#include <gtest/gtest.h>

#include "editdiff/corruption.h"
#include "editdiff/errors.h"

namespace editdiff {
namespace {

Vocab abc() { return Vocab({"a", "b", "c"}); }

Sequence long_sequence(const Vocab& v, std::size_t prompt, std::size_t gen) {
  Sequence s;
  for (std::size_t i = 0; i < prompt + gen - 1; ++i) s.tokens.push_back(TokenId(i % 3));
  s.tokens.push_back(v.eos());
  s.prompt_len = prompt;
  return s;
}

TEST(Corrupt, FullNoiseMasksEveryGeneratedSlot) {
  const Vocab v = abc();
  const Sequence x = long_sequence(v, 3, 20);
  const MaskedSequence xt = corrupt(x, {1.0, 7}, v);
  EXPECT_EQ(xt.masked_count(), 20u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(xt.base.tokens[i], x.tokens[i]);
  for (std::size_t i = 3; i < x.size(); ++i) EXPECT_EQ(xt.base.tokens[i], v.mask());
}

TEST(Corrupt, RejectsOutOfDomainNoise) {
  const Vocab v = abc();
  const Sequence x = long_sequence(v, 0, 4);
  EXPECT_THROW(corrupt(x, {0.0, 1}, v), DomainError);
  EXPECT_THROW(corrupt(x, {-0.5, 1}, v), DomainError);
  EXPECT_THROW(corrupt(x, {1.5, 1}, v), DomainError);
  EXPECT_THROW(corrupt(x, {std::nan(""), 1}, v), DomainError);
}

TEST(Corrupt, RejectsIncompleteInput) {
  const Vocab v = abc();
  Sequence x = long_sequence(v, 0, 4);
  x.tokens[1] = v.mask();
  EXPECT_THROW(corrupt(x, {0.5, 1}, v), DomainError);
  x.tokens[1] = v.del();
  EXPECT_THROW(corrupt(x, {0.5, 1}, v), DomainError);
}

TEST(Corrupt, ReproducibleForFixedSeed) {
  const Vocab v = abc();
  const Sequence x = long_sequence(v, 2, 50);
  const auto a = corrupt(x, {0.4, 11}, v);
  const auto b = corrupt(x, {0.4, 11}, v);
  EXPECT_EQ(a.base, b.base);
  EXPECT_EQ(a.masked, b.masked);
  const auto c = corrupt(x, {0.4, 12}, v);
  EXPECT_NE(a.masked, c.masked);
}

TEST(Corrupt, MaskFractionTracksNoiseLevel) {
  const Vocab v = abc();
  const Sequence x = long_sequence(v, 0, 100000);
  for (double t : {0.25, 0.5, 0.75}) {
    const auto xt = corrupt(x, {t, 2024}, v);
    EXPECT_NEAR(double(xt.masked_count()) / 100000.0, t, 0.01) << "t=" << t;
  }
}

// Builds prediction rows with `p_true` on the true token and the rest spread
// over the other content symbols.
RowMatrix rows_for(const Sequence& x0, const MaskedSequence& xt, const Vocab& v,
                   const std::vector<double>& p_true) {
  RowMatrix pred(xt.masked_count(), v.size());
  std::size_t r = 0;
  for (std::size_t i = 0; i < xt.masked.size(); ++i) {
    if (!xt.masked[i]) continue;
    const TokenId truth = x0.tokens[x0.prompt_len + i];
    std::vector<TokenId> others;
    for (TokenId c : v.content_ids()) others.push_back(c);
    others.push_back(v.eos());
    std::erase(others, truth);
    for (TokenId c : others) pred.at(r, c) = (1.0 - p_true[r]) / double(others.size());
    pred.at(r, truth) = p_true[r];
    ++r;
  }
  return pred;
}

TEST(DenoisingLoss, PerfectPredictionIsZero) {
  const Vocab v = abc();
  const Sequence x = long_sequence(v, 0, 6);
  const auto xt = corrupt(x, {1.0, 0}, v);
  RowMatrix pred(6, v.size());
  for (std::size_t i = 0; i < 6; ++i) pred.at(i, x.tokens[i]) = 1.0;
  EXPECT_DOUBLE_EQ(denoising_loss(pred, x, xt, 1.0), 0.0);
}

TEST(DenoisingLoss, HandEvaluatedHalfProbability) {
  // t = 0.25, L = 4, one masked slot with p(true) = 0.5: tL = 1 so loss = ln 2.
  const Vocab v = abc();
  Sequence x{{0, 1, 2, v.eos()}, 0};
  MaskedSequence xt{x, {0, 1, 0, 0}};
  xt.base.tokens[1] = v.mask();
  RowMatrix pred(1, v.size());
  pred.at(0, 1) = 0.5;
  pred.at(0, 0) = 0.5;
  EXPECT_NEAR(denoising_loss(pred, x, xt, 0.25), std::log(2.0), 1e-12);
  EXPECT_NEAR(denoising_loss(pred, x, xt, 0.25), 0.6931, 1e-4);
}

TEST(DenoisingLoss, DoublingLengthHalvesLoss) {
  const Vocab v = abc();
  Sequence x4{{0, 1, 2, v.eos()}, 0};
  MaskedSequence xt4{x4, {0, 1, 0, 0}};
  xt4.base.tokens[1] = v.mask();
  Sequence x8{{0, 1, 2, 0, 1, 2, 0, v.eos()}, 0};
  MaskedSequence xt8{x8, {0, 1, 0, 0, 0, 0, 0, 0}};
  xt8.base.tokens[1] = v.mask();
  RowMatrix pred(1, v.size());
  pred.at(0, 1) = 0.3;
  pred.at(0, 2) = 0.7;
  EXPECT_NEAR(denoising_loss(pred, x8, xt8, 0.5), 0.5 * denoising_loss(pred, x4, xt4, 0.5),
              1e-12);
}

TEST(DenoisingLoss, ZeroProbabilityHitsFloor) {
  const Vocab v = abc();
  Sequence x{{0, v.eos()}, 0};
  MaskedSequence xt{x, {1, 0}};
  xt.base.tokens[0] = v.mask();
  RowMatrix pred(1, v.size());
  pred.at(0, 1) = 1.0;
  const double loss = denoising_loss(pred, x, xt, 0.5);
  EXPECT_TRUE(std::isfinite(loss));
  EXPECT_NEAR(loss, -kLogFloor / (0.5 * 2), 1e-9);
  EXPECT_NEAR(kLogFloor, std::log(1e-12), 1e-12);
}

TEST(DenoisingLoss, RejectsRowMismatchAndUnnormalizedRows) {
  const Vocab v = abc();
  Sequence x{{0, 1, v.eos()}, 0};
  MaskedSequence xt{x, {1, 1, 0}};
  xt.base.tokens[0] = v.mask();
  xt.base.tokens[1] = v.mask();
  RowMatrix one(1, v.size());
  one.at(0, 0) = 1.0;
  EXPECT_THROW(denoising_loss(one, x, xt, 0.5), ShapeError);
  RowMatrix three(3, v.size(), 1.0 / double(v.size()));
  EXPECT_THROW(denoising_loss(three, x, xt, 0.5), ShapeError);
  RowMatrix bad(2, v.size());
  bad.at(0, 0) = 0.9;
  bad.at(1, 1) = 1.0;
  EXPECT_THROW(denoising_loss(bad, x, xt, 0.5), ShapeError);
}

TEST(DenoisingLoss, PermutationInvariantAndMonotone) {
  const Vocab v = abc();
  const Sequence x = long_sequence(v, 0, 12);
  const auto xt = corrupt(x, {1.0, 3}, v);
  std::vector<double> p(12);
  for (std::size_t i = 0; i < 12; ++i) p[i] = 0.1 + 0.07 * double(i);
  const double base = denoising_loss(rows_for(x, xt, v, p), x, xt, 1.0);

  // Permuting which slot gets which probability leaves the sum unchanged.
  std::vector<double> q(p.rbegin(), p.rend());
  EXPECT_NEAR(denoising_loss(rows_for(x, xt, v, q), x, xt, 1.0), base, 1e-12);

  for (std::size_t i = 0; i < 12; ++i) {
    auto up = p;
    up[i] += 0.05;
    EXPECT_LT(denoising_loss(rows_for(x, xt, v, up), x, xt, 1.0), base);
  }
}

}  // namespace
}  // namespace editdiff
