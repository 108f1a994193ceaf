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

#include "editdiff/pipeline.h"

#include <memory>

#include "editdiff/eval.h"
#include "editdiff/scheduler.h"
#include "editdiff/tabular_model.h"

namespace editdiff {

double dev_validity(const DenoiserModel& model, const Task& task, std::size_t budget,
                    std::size_t instances) {
  EvalOptions opts;
  opts.policy = SelectionPolicy::kRandom;
  opts.instances = std::min(instances, task.eval.size());
  opts.allow_untrained = true;
  return evaluate(model, task, {allocate_steps(budget)}, opts).rows.front().validity_rate;
}

std::vector<EpochMetrics> run_training(FeaturizedModel& model, const Task& task,
                                       const RunConfig& cfg,
                                       const std::function<void(const EpochMetrics&)>& on_epoch) {
  std::unique_ptr<TabularModel> frozen;
  TrainHooks hooks;
  hooks.heldout = &task.eval;
  if (cfg.frozen_tabular_rollout) {
    frozen = std::make_unique<TabularModel>(TabularModel::fit(task.vocab, task.train));
    hooks.rollout_model = frozen.get();
  }
  if (cfg.dev_budget > 0) {
    hooks.dev_validity = [&](const FeaturizedModel& m) {
      return dev_validity(m, task, cfg.dev_budget, cfg.dev_instances);
    };
  }
  hooks.on_epoch = on_epoch;
  std::vector<EpochMetrics> all;
  for (Stage stage : cfg.stages) {
    auto h = train_stage(model, task.train, stage, cfg.stage3, cfg.rollout, cfg.train, hooks);
    all.insert(all.end(), h.begin(), h.end());
  }
  return all;
}

}  // namespace editdiff
