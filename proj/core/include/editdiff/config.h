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

#ifndef EDITDIFF_CONFIG_H_
#define EDITDIFF_CONFIG_H_

#include <filesystem>
#include <string>
#include <vector>

#include "editdiff/eval.h"
#include "editdiff/featurized_model.h"
#include "editdiff/tasks.h"
#include "editdiff/training.h"

namespace editdiff {

enum class ModelKind : std::uint8_t { kTabular, kFeaturized };

const char* to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

// Everything a CLI run can be configured with.
struct RunConfig {
  TaskSpec task;
  ModelKind model = ModelKind::kFeaturized;
  FeaturizedConfig featurized;
  std::vector<Stage> stages{Stage::kMaskSft, Stage::kMaskEdit};
  TrainConfig train;
  RolloutConfig rollout;
  StageThreeConfig stage3;
  // Roll out edit states with a tabular model fit to the training split
  // instead of the model being trained.
  bool frozen_tabular_rollout = false;
  // Dev validity logged per epoch: quarter-rule budget (0 disables) and
  // number of eval prompts.
  std::size_t dev_budget = 8;
  std::size_t dev_instances = 64;
  EvalOptions eval;
  std::size_t eval_seed_count = 1;

  // Sends one seed to every random consumer except the task split.
  void apply_seed(std::uint64_t seed);
};

// Flat "key = value" lines; '#' starts a comment. Unknown keys and malformed
// values throw ConfigError naming the line.
void apply_config_text(RunConfig& cfg, const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Every accepted key, for usage text.
std::vector<std::string> config_keys();

}  // namespace editdiff

#endif  // EDITDIFF_CONFIG_H_
