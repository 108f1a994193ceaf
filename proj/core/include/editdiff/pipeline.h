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

#ifndef EDITDIFF_PIPELINE_H_
#define EDITDIFF_PIPELINE_H_

#include <functional>
#include <vector>

#include "editdiff/config.h"
#include "editdiff/featurized_model.h"
#include "editdiff/tasks.h"
#include "editdiff/training.h"

namespace editdiff {

// Validity of the model on up to `instances` eval prompts with the
// quarter-rule allocation of `budget` steps, random-k selection, seed 0.
double dev_validity(const DenoiserModel& model, const Task& task, std::size_t budget,
                    std::size_t instances);

// Runs every configured stage in order on the task's training split, logging
// held-out loss (and dev validity when cfg.dev_budget > 0) per epoch.
std::vector<EpochMetrics> run_training(FeaturizedModel& model, const Task& task,
                                       const RunConfig& cfg,
                                       const std::function<void(const EpochMetrics&)>& on_epoch = {});

}  // namespace editdiff

#endif  // EDITDIFF_PIPELINE_H_
