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

#ifndef EDITDIFF_EVAL_H_
#define EDITDIFF_EVAL_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "editdiff/scheduler.h"
#include "editdiff/tasks.h"

namespace editdiff {

struct EvalOptions {
  SelectionPolicy policy = SelectionPolicy::kConfidence;
  // Generations per seed. Prompted tasks cycle through the eval split; 0
  // means one pass over it.
  std::size_t instances = 0;
  std::vector<std::uint64_t> seeds{0};
  std::size_t max_gen_len = 512;
  std::size_t max_edit_steps = 1024;
  bool allow_untrained = false;
};

struct EvalRow {
  std::size_t budget = 0;
  StepAllocation allocation;
  std::size_t generations = 0;  // instances x seeds
  double validity_rate = 0.0;
  double exact_match = 0.0;
  double mean_edit_steps = 0.0;
  // Validity per seed, in the order of EvalOptions::seeds.
  std::vector<double> seed_validity;
  // Median wall time of one model step in each phase; 0 when the phase ran
  // no step.
  double median_mask_step_seconds = 0.0;
  double median_edit_step_seconds = 0.0;
};

struct EvalReport {
  std::string task;
  SelectionPolicy policy = SelectionPolicy::kConfidence;
  std::vector<EvalRow> rows;
};

// Runs generate for every allocation in `grid`. Exact match means the output
// is a corpus sequence (unprompted tasks) or equals the held-out target
// (prompted tasks). Throws DomainError for an untrained model unless allowed.
EvalReport evaluate(const DenoiserModel& model, const Task& task,
                    const std::vector<StepAllocation>& grid, const EvalOptions& opts);

// (B, 0), (3B/4, B/4), (B/2, B/2), (0, B).
std::vector<StepAllocation> default_sweep_grid(std::size_t budget);

// Throws ConfigError when an allocation does not sum to total_budget.
EvalReport sweep_allocation(const DenoiserModel& model, const Task& task,
                            std::size_t total_budget,
                            const std::vector<StepAllocation>& allocations,
                            const EvalOptions& opts);

// Frozen column order: task, policy, budget, mask_steps, edit_steps,
// generations, validity_rate, exact_match, mean_edit_steps, and with timing
// median_mask_step_ms, median_edit_step_ms.
void write_report_csv(std::ostream& out, const EvalReport& report, bool timing = false);
void write_report_json(std::ostream& out, const EvalReport& report, bool timing = false);

}  // namespace editdiff

#endif  // EDITDIFF_EVAL_H_
