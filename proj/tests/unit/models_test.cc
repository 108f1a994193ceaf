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
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>

#include <gtest/gtest.h>

#include "editdiff/corruption.h"
#include "editdiff/errors.h"
#include "editdiff/featurized_model.h"
#include "editdiff/rng.h"
#include "editdiff/tabular_model.h"
#include "editdiff/training.h"
#include "json.hpp"
#include "oracles.h"

namespace editdiff {
namespace {

using editdiff::testing::three_sentence;

TEST(TabularModel, FullyMaskedAnswerMarginal) {
  const auto fig = three_sentence();
  const auto m = TabularModel::fit(fig.vocab, fig.corpus);
  Sequence xt = fig.seq("2 + 2 = 4");
  for (std::size_t i = 0; i < xt.size(); ++i) xt.tokens[i] = fig.vocab.mask();
  const auto pred = m.predict_unmask(xt);
  ASSERT_EQ(pred.positions.size(), 6u);
  pred.probs.check_normalized();
  EXPECT_NEAR(pred.probs.at(4, fig.vocab.id("5")), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(pred.probs.at(4, fig.vocab.id("4")), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(pred.probs.at(0, fig.vocab.id("2")), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(pred.probs.at(2, fig.vocab.id("2")), 2.0 / 3.0, 1e-12);
  // Position-wise argmax yields the inconsistent sentence.
  Sequence out = xt;
  for (std::size_t r = 0; r < pred.positions.size(); ++r) {
    out.tokens[pred.positions[r]] = argmax(pred.probs.row(r));
  }
  EXPECT_EQ(out, fig.seq("2 + 2 = 5"));
}

TEST(TabularModel, ConditionedOnOperands) {
  const auto fig = three_sentence();
  const auto m = TabularModel::fit(fig.vocab, fig.corpus);
  Sequence xt = fig.seq("2 + 3 = 5");
  xt.tokens[4] = fig.vocab.mask();
  const auto pred = m.predict_unmask(xt);
  ASSERT_EQ(pred.positions, (std::vector<std::size_t>{4}));
  EXPECT_DOUBLE_EQ(pred.probs.at(0, fig.vocab.id("5")), 1.0);
}

// Every masking pattern of every corpus sentence against direct enumeration.
TEST(TabularModel, PosteriorMatchesEnumerationExhaustively) {
  const auto fig = three_sentence();
  const auto m = TabularModel::fit(fig.vocab, fig.corpus);
  for (const auto& x : fig.corpus) {
    for (unsigned bits = 1; bits < (1u << x.size()); ++bits) {
      Sequence xt = x;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (bits >> i & 1u) xt.tokens[i] = fig.vocab.mask();
      }
      std::vector<const Sequence*> consistent;
      for (const auto& y : fig.corpus) {
        bool ok = true;
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (xt.tokens[i] != fig.vocab.mask() && xt.tokens[i] != y.tokens[i]) ok = false;
        }
        if (ok) consistent.push_back(&y);
      }
      const auto pred = m.predict_unmask(xt);
      pred.probs.check_normalized();
      for (std::size_t r = 0; r < pred.positions.size(); ++r) {
        std::map<TokenId, double> want;
        for (auto* y : consistent) want[y->tokens[pred.positions[r]]] += 1.0 / consistent.size();
        for (std::size_t c = 0; c < fig.vocab.size(); ++c) {
          const double w = want.contains(TokenId(c)) ? want[TokenId(c)] : 0.0;
          ASSERT_NEAR(pred.probs.at(r, c), w, 1e-12);
        }
      }
    }
  }
}

TEST(TabularModel, EditRowsNormalizeAndRespectSentinels) {
  const auto fig = three_sentence();
  const auto m = TabularModel::fit(fig.vocab, fig.corpus);
  for (const char* text : {"2 + 2 = 5", "2 + 2 = 4", "3 + 3 = 5", "+ + + + +"}) {
    const auto d = m.predict_edits(fig.seq(text));
    d.c.check_normalized();
    d.n.check_normalized();
    for (std::size_t r = 0; r < d.c.rows(); ++r) {
      EXPECT_EQ(d.c.at(r, fig.vocab.mask()), 0.0);
      EXPECT_EQ(d.c.at(r, fig.vocab.pad()), 0.0);
      EXPECT_EQ(d.n.at(r, fig.vocab.del()), 0.0);
      EXPECT_EQ(d.n.at(r, fig.vocab.mask()), 0.0);
    }
  }
}

TEST(TabularModel, FitErrors) {
  const auto fig = three_sentence();
  EXPECT_THROW(TabularModel::fit(fig.vocab, {}), DomainError);
  auto mixed = fig.corpus;
  mixed[1].prompt_len = 1;
  EXPECT_THROW(TabularModel::fit(fig.vocab, mixed), DomainError);
}

TrainingExample mixed_example(const FeaturizedModel& m, std::uint64_t seed) {
  const auto fig = three_sentence();
  Philox rng(seed);
  Sequence x = fig.corpus[rng.below(3)];
  TrainingExample ex{x, {}};
  x.tokens[1] = fig.vocab.mask();
  ex.input = x;
  ex.targets.push_back({1, Head::kUnmask, fig.vocab.id("+"), 0.7});
  ex.targets.push_back({3, Head::kReplace, fig.vocab.del(), 0.4});
  ex.targets.push_back({4, Head::kReplace, fig.vocab.id("4"), 0.3});
  ex.targets.push_back({0, Head::kNext, fig.vocab.id("+"), 0.5});
  ex.targets.push_back({5, Head::kNext, fig.vocab.eos(), 0.2});
  (void)m;
  return ex;
}

TEST(FeaturizedModel, GradientMatchesFiniteDifferences) {
  const auto fig = three_sentence();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    FeaturizedModel m(fig.vocab, {.embed_dim = 4, .hidden_dim = 8, .seed = seed});
    const auto ex = mixed_example(m, seed);
    std::vector<double> grad(m.params().size(), 0.0);
    m.loss_and_gradient(ex, grad);
    Philox rng(seed * 100);
    std::vector<std::size_t> coords;
    // Half the coordinates from parameters the example actually touches.
    while (coords.size() < 10) {
      const std::size_t c = rng.below(grad.size());
      if (coords.size() < 5 && grad[c] == 0.0) continue;
      coords.push_back(c);
    }
    const auto fd = editdiff::testing::finite_difference(m.params(), coords, 1e-4,
                                                        [&] { return m.loss(ex); });
    for (std::size_t k = 0; k < coords.size(); ++k) {
      const double a = grad[coords[k]], n = fd[k];
      const double rel = std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-6});
      EXPECT_LE(rel, 1e-4) << "seed " << seed << " coord " << coords[k] << " a=" << a
                           << " fd=" << n;
    }
  }
}

// Every coordinate, on a sequence short enough for the window to wrap.
TEST(FeaturizedModel, GradientMatchesOnEveryCoordinate) {
  const auto fig = three_sentence();
  FeaturizedModel m(fig.vocab, {.embed_dim = 2, .hidden_dim = 3, .window_radius = 4, .seed = 9});
  const auto ex = mixed_example(m, 3);
  std::vector<double> grad(m.params().size(), 0.0);
  m.loss_and_gradient(ex, grad);
  std::vector<std::size_t> coords(grad.size());
  std::iota(coords.begin(), coords.end(), std::size_t{0});
  const auto fd = editdiff::testing::finite_difference(m.params(), coords, 1e-5,
                                                      [&] { return m.loss(ex); });
  for (std::size_t k = 0; k < coords.size(); ++k) {
    EXPECT_NEAR(grad[k], fd[k], 1e-6 + 1e-4 * std::abs(fd[k])) << "coord " << k;
  }
}

TEST(FeaturizedModel, RowsNormalizeAndMaskSentinels) {
  const auto fig = three_sentence();
  FeaturizedModel m(fig.vocab, {});
  Sequence xt = fig.seq("2 + 2 = 4");
  xt.tokens[2] = fig.vocab.mask();
  xt.tokens[4] = fig.vocab.mask();
  const auto u = m.predict_unmask(xt);
  EXPECT_EQ(u.positions, (std::vector<std::size_t>{2, 4}));
  u.probs.check_normalized();
  for (std::size_t r = 0; r < 2; ++r) {
    EXPECT_EQ(u.probs.at(r, fig.vocab.mask()), 0.0);
    EXPECT_EQ(u.probs.at(r, fig.vocab.del()), 0.0);
  }
  const auto d = m.predict_edits(fig.seq("2 + 2 = 5"));
  d.c.check_normalized();
  d.n.check_normalized();
  EXPECT_GT(d.c.at(0, fig.vocab.del()), 0.0);
  EXPECT_EQ(d.n.at(0, fig.vocab.del()), 0.0);
}

TEST(FeaturizedModel, ZeroLearningRateLeavesParameters) {
  const auto fig = three_sentence();
  FeaturizedModel m(fig.vocab, {.seed = 3});
  const std::vector<double> before(m.params().begin(), m.params().end());
  const auto ex = mixed_example(m, 2);
  SgdState sgd;
  const std::vector<TrainingExample> batch{ex};
  const double l1 = train_step(m, batch, 0.0, 0.0, sgd);
  const double l2 = train_step(m, batch, 0.0, 0.0, sgd);
  EXPECT_EQ(l1, l2);
  EXPECT_TRUE(std::equal(before.begin(), before.end(), m.params().begin()));
  const double l3 = train_step(m, batch, 0.5, 0.0, sgd);
  EXPECT_EQ(l3, l1);
  EXPECT_LT(m.loss(ex), l1);
}

TEST(FeaturizedModel, DeterministicConstructionAndForward) {
  const auto fig = three_sentence();
  FeaturizedModel a(fig.vocab, {.seed = 9}), b(fig.vocab, {.seed = 9}), c(fig.vocab, {.seed = 10});
  EXPECT_TRUE(std::equal(a.params().begin(), a.params().end(), b.params().begin()));
  EXPECT_FALSE(std::equal(a.params().begin(), a.params().end(), c.params().begin()));
  const auto x = fig.seq("3 + 2 = 5");
  EXPECT_EQ(a.predict_edits(x).c, b.predict_edits(x).c);
  EXPECT_FALSE(a.is_trained());
}

TEST(FeaturizedModel, CheckpointRoundTripAndVersionGuard) {
  const auto fig = three_sentence();
  FeaturizedModel m(fig.vocab, {.hidden_dim = 16, .seed = 4});
  m.params()[5] = 0.123456789012345;
  m.record_update();
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "editdiff_ckpt_test.json";
  m.save(path);
  const auto loaded = FeaturizedModel::load(path);
  EXPECT_EQ(loaded.config(), m.config());
  EXPECT_EQ(loaded.vocab(), m.vocab());
  EXPECT_EQ(loaded.updates(), 1u);
  EXPECT_TRUE(std::equal(m.params().begin(), m.params().end(), loaded.params().begin()));

  nlohmann::json j;
  std::ifstream(path) >> j;
  j["version"] = FeaturizedModel::kCheckpointVersion + 1;
  std::ofstream(path) << j.dump();
  EXPECT_THROW(FeaturizedModel::load(path), CheckpointError);
  j["version"] = FeaturizedModel::kCheckpointVersion;
  j["format"] = "something-else";
  std::ofstream(path) << j.dump();
  EXPECT_THROW(FeaturizedModel::load(path), CheckpointError);
  std::filesystem::remove(path);
  EXPECT_THROW(FeaturizedModel::load(path), CheckpointError);
}

// Trained only on the unmask objective, the learned marginals of the fully
// masked sentence approach the exact corpus marginals.
TEST(FeaturizedModel, LearnsTabularMarginals) {
  const auto fig = three_sentence();
  FeaturizedModel m(fig.vocab, {.seed = 2});
  const auto tab = TabularModel::fit(fig.vocab, fig.corpus);
  TrainConfig tc;
  tc.epochs = 200;
  tc.batch_size = 3;
  tc.learning_rate = 0.1;
  tc.next_token_weight = 0.0;  // unmask head only
  tc.seed = 5;
  std::vector<Sequence> data;
  for (int r = 0; r < 4; ++r) data.insert(data.end(), fig.corpus.begin(), fig.corpus.end());
  train_stage(m, data, Stage::kMaskSft, {}, {}, tc);
  Sequence xt = fig.corpus[0];
  for (auto& t : xt.tokens) t = fig.vocab.mask();
  const auto want = tab.predict_unmask(xt);
  const auto got = m.predict_unmask(xt);
  for (std::size_t r = 0; r < want.probs.rows(); ++r) {
    for (std::size_t c = 0; c < fig.vocab.size(); ++c) {
      EXPECT_NEAR(got.probs.at(r, c), want.probs.at(r, c), 0.05) << "row " << r << " col " << c;
    }
  }
}

}  // namespace
}  // namespace editdiff
