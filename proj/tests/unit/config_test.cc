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

#include <gtest/gtest.h>

#include "editdiff/config.h"
#include "editdiff/errors.h"

namespace editdiff {
namespace {

TEST(Config, ParsesKnownKeys) {
  RunConfig c;
  apply_config_text(c,
                    "# comment\n"
                    "task.kind = brackets\n"
                    "task.bracket_pairs=5  # trailing\n"
                    "\n"
                    "train.stages = mask-pretrain, mask-edit\n"
                    "train.learning_rate = 0.05\n"
                    "rollout.k_choices = 1,3\n"
                    "stage3.state_source = rule-based-noise\n"
                    "eval.policy = random\n"
                    "eval.seeds = 3\n"
                    "rollout.frozen_tabular = true\n");
  EXPECT_EQ(c.task.kind, TaskKind::kBrackets);
  EXPECT_EQ(c.task.bracket_pairs, 5u);
  EXPECT_EQ(c.stages, (std::vector<Stage>{Stage::kMaskPretrain, Stage::kMaskEdit}));
  EXPECT_DOUBLE_EQ(c.train.learning_rate, 0.05);
  EXPECT_EQ(c.rollout.unmask_k_choices, (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(c.stage3.state_source, StateSource::kRuleBasedNoise);
  EXPECT_EQ(c.eval.policy, SelectionPolicy::kRandom);
  EXPECT_TRUE(c.frozen_tabular_rollout);
  c.apply_seed(10);
  EXPECT_EQ(c.eval.seeds, (std::vector<std::uint64_t>{10, 11, 12}));
  EXPECT_EQ(c.train.seed, 10u);
  EXPECT_EQ(c.featurized.seed, 10u);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  RunConfig c;
  EXPECT_THROW(apply_config_text(c, "train.epoch = 3\n"), ConfigError);
  EXPECT_THROW(apply_config_text(c, "train.epochs = three\n"), ConfigError);
  EXPECT_THROW(apply_config_text(c, "train.epochs\n"), ConfigError);
  EXPECT_THROW(apply_config_text(c, "stage3.state_source = magic\n"), ConfigError);
  EXPECT_THROW(apply_config_text(c, "model.kind = transformer\n"), ConfigError);
  EXPECT_THROW(apply_config_text(c, "rollout.k_choices = 2,,4\n"), ConfigError);
  try {
    apply_config_text(c, "\n\nbogus = 1\n");
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(load_config("/nonexistent/editdiff.cfg"), ConfigError);
}

TEST(Config, KeyListIsComplete) {
  const auto keys = config_keys();
  EXPECT_GT(keys.size(), 30u);
  EXPECT_TRUE(std::find(keys.begin(), keys.end(), "stage3.alpha") != keys.end());
}

}  // namespace
}  // namespace editdiff
