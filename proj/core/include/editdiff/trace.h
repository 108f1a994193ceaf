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

#ifndef EDITDIFF_TRACE_H_
#define EDITDIFF_TRACE_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "editdiff/edit_engine.h"
#include "editdiff/sequence.h"

namespace editdiff {

enum class SelectionPolicy : std::uint8_t { kConfidence, kRandom };

const char* to_string(SelectionPolicy policy);
SelectionPolicy parse_selection_policy(std::string_view name);

struct StepAllocation {
  std::size_t mask_steps = 0;
  std::size_t edit_steps = 0;

  std::size_t total() const { return mask_steps + edit_steps; }
  friend bool operator==(const StepAllocation&, const StepAllocation&) = default;
};

enum class Phase : std::uint8_t { kMask, kEdit };

struct StepRecord {
  Phase phase = Phase::kMask;
  std::size_t step = 0;
  // Mask phase: slots revealed and the tokens written there.
  std::vector<std::size_t> positions;
  std::vector<TokenId> tokens;
  // Edit phase: the greedy prediction and what applying it did.
  EditPrediction edits;
  std::size_t replacements = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  bool empty = false;
  bool truncated = false;
  std::vector<TokenId> state;  // sequence after the step

  friend bool operator==(const StepRecord& a, const StepRecord& b) {
    return a.phase == b.phase && a.step == b.step && a.positions == b.positions &&
           a.tokens == b.tokens && a.edits.c == b.edits.c && a.edits.n == b.edits.n &&
           a.replacements == b.replacements && a.deletions == b.deletions &&
           a.insertions == b.insertions && a.empty == b.empty &&
           a.truncated == b.truncated && a.state == b.state;
  }
};

struct GenerationTrace {
  Sequence initial;  // prompt followed by gen_len MASK tokens
  StepAllocation allocation;
  SelectionPolicy policy = SelectionPolicy::kConfidence;
  std::uint64_t seed = 0;
  std::size_t max_gen_len = 512;
  std::vector<StepRecord> steps;
  // Edit steps that changed the sequence before the first empty prediction.
  std::size_t edit_steps_used = 0;
  // Index (within the edit phase) of the first empty prediction, if any.
  std::optional<std::size_t> empty_edit_step;
  bool truncated = false;

  friend bool operator==(const GenerationTrace&, const GenerationTrace&) = default;
};

// Rebuilds the output from the initial state: mask fills are written back,
// recorded edit predictions are re-applied. Throws DomainError if a recorded
// state snapshot disagrees with the replay.
Sequence replay(const GenerationTrace& trace, const Vocab& vocab);

// Line-delimited JSON, schema "editdiff.trace" version 1: a header line, one
// line per step, and a summary line. Tokens are written as symbols.
inline constexpr int kTraceSchemaVersion = 1;
void write_trace_jsonl(std::ostream& out, const GenerationTrace& trace, const Vocab& vocab);
GenerationTrace read_trace_jsonl(std::istream& in, const Vocab& vocab);

}  // namespace editdiff

#endif  // EDITDIFF_TRACE_H_
