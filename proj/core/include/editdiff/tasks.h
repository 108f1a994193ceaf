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

#ifndef EDITDIFF_TASKS_H_
#define EDITDIFF_TASKS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "editdiff/sequence.h"

namespace editdiff {

enum class TaskKind : std::uint8_t { kArithmetic, kBrackets, kKeyedCopy };

const char* to_string(TaskKind kind);
TaskKind parse_task_kind(std::string_view name);

struct TaskSpec {
  TaskKind kind = TaskKind::kArithmetic;
  // arithmetic: every "a + b = c" with a, b in [operand_min, operand_max] and
  // c = a + b <= sum_max (when set).
  int operand_min = 0;
  int operand_max = 9;
  std::optional<int> sum_max;
  // brackets: all balanced strings of exactly `bracket_pairs` pairs whose
  // nesting depth stays within max_depth.
  std::size_t bracket_pairs = 4;
  std::size_t max_depth = 3;
  // keyed-copy: prompt "k v.. k v.. ... ? k_query", target = the queried
  // value. Sampled, not enumerated.
  std::size_t copy_pairs = 3;
  std::size_t key_alphabet = 6;
  std::size_t value_alphabet = 6;
  std::size_t value_len = 2;
  std::size_t copy_examples = 600;
  // Seed for sampling and for the train/eval split.
  std::uint64_t split_seed = 7;
  double eval_fraction = 0.2;
};

struct Task {
  TaskSpec spec;
  Vocab vocab;
  std::vector<Sequence> corpus;  // every generated sequence
  std::vector<Sequence> train;
  std::vector<Sequence> eval;

  std::size_t gen_len() const { return corpus.front().gen_len(); }
  bool conditional() const { return corpus.front().prompt_len > 0; }
};

// Throws ConfigError for empty parameter ranges.
Task make_task(const TaskSpec& spec);

// Validity oracle for the task family; independent of the corpus listing.
bool is_valid(const Task& task, const Sequence& x);

}  // namespace editdiff

#endif  // EDITDIFF_TASKS_H_
