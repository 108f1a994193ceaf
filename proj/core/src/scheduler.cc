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

#include "editdiff/scheduler.h"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "editdiff/errors.h"
#include "editdiff/rng.h"

namespace editdiff {
namespace {

constexpr std::size_t kMaxEditAllocation = 32;
constexpr std::uint64_t kSelectionStream = 0x5e1ec7;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

StepAllocation allocate_steps(std::size_t total) {
  const std::size_t edit = std::min(total / 4, kMaxEditAllocation);
  return {total - edit, edit};
}

std::vector<std::size_t> unmask_schedule(std::size_t gen_len, std::size_t steps) {
  if (steps == 0) throw DomainError("unmask schedule needs at least one step");
  std::vector<std::size_t> k(steps, gen_len / steps);
  for (std::size_t i = 0; i < gen_len % steps; ++i) ++k[i];
  return k;
}

StepAllocation GenerationConfig::resolved_allocation() const {
  if (!allocation) return allocate_steps(total_steps);
  if (allocation->total() != total_steps) {
    throw ConfigError("allocation " + std::to_string(allocation->mask_steps) + "/" +
                      std::to_string(allocation->edit_steps) + " does not sum to " +
                      std::to_string(total_steps));
  }
  return *allocation;
}

Sequence mask_phase(const DenoiserModel& model, std::span<const TokenId> prompt,
                    std::size_t gen_len, std::size_t mask_steps, SelectionPolicy policy,
                    std::uint64_t seed, const PhaseHooks& hooks) {
  const Vocab& vocab = model.vocab();
  if (gen_len > hooks.max_gen_len) {
    throw DomainError("mask_phase: gen_len " + std::to_string(gen_len) +
                      " exceeds the length cap " + std::to_string(hooks.max_gen_len));
  }
  Sequence x;
  x.tokens.assign(prompt.begin(), prompt.end());
  x.tokens.resize(prompt.size() + gen_len, vocab.mask());
  x.prompt_len = prompt.size();
  validate(x, vocab);

  Philox rng = Philox(seed).split(kSelectionStream);
  const std::vector<std::size_t> schedule = unmask_schedule(gen_len, mask_steps);
  for (std::size_t step = 0; step < mask_steps; ++step) {
    const auto start = Clock::now();
    StepRecord rec;
    rec.phase = Phase::kMask;
    rec.step = step;
    if (schedule[step] > 0) {
      const UnmaskPrediction pred = model.predict_unmask(x);
      const std::size_t masked = pred.positions.size();
      if (pred.probs.rows() != masked || pred.probs.cols() != vocab.size()) {
        throw ShapeError("mask_phase: unmask head returned the wrong shape");
      }
      const std::size_t k = std::min(schedule[step], masked);
      std::vector<std::size_t> order(masked);
      std::iota(order.begin(), order.end(), std::size_t{0});
      if (policy == SelectionPolicy::kConfidence) {
        std::vector<double> conf(masked);
        for (std::size_t r = 0; r < masked; ++r) conf[r] = max_entry(pred.probs.row(r));
        // Stable: equal confidence keeps the leftmost slot first.
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return conf[a] > conf[b]; });
      } else {
        for (std::size_t i = 0; i < k; ++i) {
          const std::size_t j = i + static_cast<std::size_t>(rng.below(masked - i));
          std::swap(order[i], order[j]);
        }
      }
      order.resize(k);
      std::sort(order.begin(), order.end());
      for (std::size_t r : order) {
        const TokenId tok = argmax(pred.probs.row(r));
        x.tokens[pred.positions[r]] = tok;
        rec.positions.push_back(pred.positions[r]);
        rec.tokens.push_back(tok);
      }
    }
    if (hooks.timings) hooks.timings->mask_step_seconds.push_back(seconds_since(start));
    if (hooks.trace) {
      rec.state = x.tokens;
      hooks.trace->steps.push_back(std::move(rec));
    }
  }
  return x;
}

EditPhaseResult edit_phase(const DenoiserModel& model, const Sequence& draft,
                           std::size_t max_edit_steps, const PhaseHooks& hooks) {
  EditPhaseResult result{draft, 0, std::nullopt, false};
  const EditLimits limits{hooks.max_gen_len};
  for (std::size_t step = 0; step < max_edit_steps; ++step) {
    const auto start = Clock::now();
    const EditDistributions dist = model.predict_edits(result.output);
    if (dist.c.cols() != model.vocab().size() || dist.n.cols() != model.vocab().size()) {
      throw ShapeError("edit heads do not span the vocab");
    }
    EditPrediction e = greedy_prediction(dist, result.output);
    EditOutcome out = apply_edits_parallel(result.output, e, model.vocab(), limits);
    if (hooks.timings) hooks.timings->edit_step_seconds.push_back(seconds_since(start));
    if (hooks.trace) {
      StepRecord rec;
      rec.phase = Phase::kEdit;
      rec.step = step;
      rec.edits = std::move(e);
      rec.replacements = out.replacements;
      rec.deletions = out.deletions;
      rec.insertions = out.insertions;
      rec.empty = out.was_empty;
      rec.truncated = out.truncated;
      rec.state = out.result.tokens;
      hooks.trace->steps.push_back(std::move(rec));
    }
    if (out.was_empty) {
      result.empty_step = step;
      break;
    }
    result.truncated = result.truncated || out.truncated;
    result.output = std::move(out.result);
    ++result.steps_used;
  }
  return result;
}

GenerationResult generate(const DenoiserModel& model, std::span<const TokenId> prompt,
                          const GenerationConfig& cfg) {
  const StepAllocation alloc = cfg.resolved_allocation();
  GenerationResult res;
  res.trace.allocation = alloc;
  res.trace.policy = cfg.policy;
  res.trace.seed = cfg.seed;
  res.trace.max_gen_len = cfg.max_gen_len;
  res.trace.initial.tokens.assign(prompt.begin(), prompt.end());
  res.trace.initial.tokens.resize(prompt.size() + cfg.gen_len, model.vocab().mask());
  res.trace.initial.prompt_len = prompt.size();

  PhaseHooks hooks{&res.trace, &res.timings, cfg.max_gen_len};
  Sequence draft;
  if (alloc.mask_steps > 0) {
    draft = mask_phase(model, prompt, cfg.gen_len, alloc.mask_steps, cfg.policy, cfg.seed,
                       hooks);
  } else {
    // Edit-only: the edit heads start from the fully masked state.
    if (cfg.gen_len > cfg.max_gen_len) throw DomainError("gen_len exceeds the length cap");
    draft = res.trace.initial;
  }
  const std::size_t edit_budget = std::min(alloc.edit_steps, cfg.max_edit_steps);
  const EditPhaseResult edited = edit_phase(model, draft, edit_budget, hooks);
  res.output = edited.output;
  res.trace.edit_steps_used = edited.steps_used;
  res.trace.empty_edit_step = edited.empty_step;
  res.trace.truncated = edited.truncated;
  return res;
}

}  // namespace editdiff
