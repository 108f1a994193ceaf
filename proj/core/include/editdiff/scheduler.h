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

#ifndef EDITDIFF_SCHEDULER_H_
#define EDITDIFF_SCHEDULER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "editdiff/model.h"
#include "editdiff/trace.h"

namespace editdiff {

// One quarter of the budget goes to editing, capped at 32 steps:
// 64 -> 48/16, 128 -> 96/32, 256 -> 224/32, 512 -> 480/32.
StepAllocation allocate_steps(std::size_t total);

// Tokens revealed per mask step: gen_len split as evenly as possible over
// `steps`, the remainder going to the earliest steps.
std::vector<std::size_t> unmask_schedule(std::size_t gen_len, std::size_t steps);

struct GenerationConfig {
  std::size_t total_steps = 64;
  std::optional<StepAllocation> allocation;  // overrides the quarter rule
  SelectionPolicy policy = SelectionPolicy::kConfidence;
  std::size_t gen_len = 0;  // generated region length, EOS included
  std::size_t max_gen_len = 512;
  std::size_t max_edit_steps = 1024;
  std::uint64_t seed = 0;

  StepAllocation resolved_allocation() const;
};

// Wall time of each model step, kept apart from the trace so that traces stay
// bit-reproducible.
struct PhaseTimings {
  std::vector<double> mask_step_seconds;
  std::vector<double> edit_step_seconds;
};

struct PhaseHooks {
  GenerationTrace* trace = nullptr;
  PhaseTimings* timings = nullptr;
  std::size_t max_gen_len = 512;
};

// Starts from prompt + gen_len MASK tokens and reveals them over mask_steps
// steps, filling each chosen slot with its argmax token.
Sequence mask_phase(const DenoiserModel& model, std::span<const TokenId> prompt,
                    std::size_t gen_len, std::size_t mask_steps, SelectionPolicy policy,
                    std::uint64_t seed, const PhaseHooks& hooks = {});

struct EditPhaseResult {
  Sequence output;
  std::size_t steps_used = 0;
  std::optional<std::size_t> empty_step;
  bool truncated = false;
};

// Greedy edit steps until an empty edit is predicted or max_edit_steps model
// calls have been made.
EditPhaseResult edit_phase(const DenoiserModel& model, const Sequence& draft,
                           std::size_t max_edit_steps, const PhaseHooks& hooks = {});

struct GenerationResult {
  Sequence output;
  GenerationTrace trace;
  PhaseTimings timings;
};

GenerationResult generate(const DenoiserModel& model, std::span<const TokenId> prompt,
                          const GenerationConfig& cfg);

}  // namespace editdiff

#endif  // EDITDIFF_SCHEDULER_H_
