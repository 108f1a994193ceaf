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

#include "editdiff/tasks.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>

#include "editdiff/errors.h"
#include "editdiff/rng.h"

namespace editdiff {
namespace {

constexpr const char* kQueryMarker = "?";

std::optional<int> parse_int(const std::string& s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

void shuffle(std::vector<Sequence>& xs, Philox& rng) {
  for (std::size_t i = xs.size(); i > 1; --i) {
    std::swap(xs[i - 1], xs[static_cast<std::size_t>(rng.below(i))]);
  }
}

Task arithmetic(const TaskSpec& spec) {
  if (spec.operand_min < 0 || spec.operand_max < spec.operand_min) {
    throw ConfigError("arithmetic: operand range must be non-empty and non-negative");
  }
  const int top = spec.sum_max.value_or(2 * spec.operand_max);
  if (top < 2 * spec.operand_min) throw ConfigError("arithmetic: sum_max excludes every equation");
  std::vector<std::string> symbols;
  for (int i = 0; i <= top; ++i) symbols.push_back(std::to_string(i));
  symbols.emplace_back("+");
  symbols.emplace_back("=");
  Task task{spec, Vocab(symbols), {}, {}, {}};
  const Vocab& v = task.vocab;
  for (int a = spec.operand_min; a <= spec.operand_max; ++a) {
    for (int b = spec.operand_min; b <= spec.operand_max; ++b) {
      if (a + b > top) continue;
      const std::vector<TokenId> target = {v.id(std::to_string(a)), v.id("+"),
                                           v.id(std::to_string(b)), v.id("="),
                                           v.id(std::to_string(a + b))};
      task.corpus.push_back(make_sequence({}, target, v));
    }
  }
  return task;
}

Task brackets(const TaskSpec& spec) {
  if (spec.bracket_pairs == 0 || spec.max_depth == 0) {
    throw ConfigError("brackets: need at least one pair and depth one");
  }
  Task task{spec, Vocab({"(", ")"}), {}, {}, {}};
  const TokenId open = task.vocab.id("(");
  const TokenId close = task.vocab.id(")");
  std::vector<TokenId> cur;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t opened,
                                                           std::size_t depth) {
    if (cur.size() == 2 * spec.bracket_pairs) {
      task.corpus.push_back(make_sequence({}, cur, task.vocab));
      return;
    }
    if (opened < spec.bracket_pairs && depth < spec.max_depth) {
      cur.push_back(open);
      rec(opened + 1, depth + 1);
      cur.pop_back();
    }
    if (depth > 0) {
      cur.push_back(close);
      rec(opened, depth - 1);
      cur.pop_back();
    }
  };
  rec(0, 0);
  return task;
}

Task keyed_copy(const TaskSpec& spec) {
  if (spec.copy_pairs == 0 || spec.key_alphabet < spec.copy_pairs ||
      spec.value_alphabet == 0 || spec.value_len == 0 || spec.copy_examples == 0) {
    throw ConfigError("keyed-copy: empty parameter range");
  }
  std::vector<std::string> symbols;
  for (std::size_t i = 0; i < spec.key_alphabet; ++i) symbols.push_back("k" + std::to_string(i));
  for (std::size_t i = 0; i < spec.value_alphabet; ++i) symbols.push_back("v" + std::to_string(i));
  symbols.emplace_back(kQueryMarker);
  Task task{spec, Vocab(symbols), {}, {}, {}};
  const Vocab& v = task.vocab;
  Philox rng = Philox(spec.split_seed).split(1);
  std::set<std::vector<TokenId>> seen;
  const std::size_t max_attempts = spec.copy_examples * 50;
  for (std::size_t attempt = 0;
       attempt < max_attempts && task.corpus.size() < spec.copy_examples; ++attempt) {
    std::vector<std::size_t> keys(spec.key_alphabet);
    for (std::size_t i = 0; i < keys.size(); ++i) keys[i] = i;
    for (std::size_t i = 0; i < spec.copy_pairs; ++i) {
      std::swap(keys[i], keys[i + static_cast<std::size_t>(rng.below(keys.size() - i))]);
    }
    std::vector<TokenId> prompt;
    std::vector<std::vector<TokenId>> values(spec.copy_pairs);
    for (std::size_t i = 0; i < spec.copy_pairs; ++i) {
      prompt.push_back(v.id("k" + std::to_string(keys[i])));
      for (std::size_t j = 0; j < spec.value_len; ++j) {
        values[i].push_back(v.id("v" + std::to_string(rng.below(spec.value_alphabet))));
      }
      prompt.insert(prompt.end(), values[i].begin(), values[i].end());
    }
    const std::size_t q = static_cast<std::size_t>(rng.below(spec.copy_pairs));
    prompt.push_back(v.id(kQueryMarker));
    prompt.push_back(v.id("k" + std::to_string(keys[q])));
    if (!seen.insert(prompt).second) continue;
    task.corpus.push_back(make_sequence(prompt, values[q], v));
  }
  return task;
}

bool arithmetic_valid(const Task& task, std::span<const TokenId> gen) {
  const Vocab& v = task.vocab;
  if (gen.size() != 6 || gen[5] != v.eos()) return false;
  if (gen[1] != v.id("+") || gen[3] != v.id("=")) return false;
  std::optional<int> a, b, c;
  for (int i : {0, 2, 4}) {
    if (v.is_reserved(gen[i])) return false;
  }
  a = parse_int(v.symbol(gen[0]));
  b = parse_int(v.symbol(gen[2]));
  c = parse_int(v.symbol(gen[4]));
  if (!a || !b || !c) return false;
  const TaskSpec& s = task.spec;
  if (*a < s.operand_min || *a > s.operand_max || *b < s.operand_min || *b > s.operand_max) {
    return false;
  }
  return *a + *b == *c;
}

bool brackets_valid(const Task& task, std::span<const TokenId> gen) {
  const Vocab& v = task.vocab;
  if (gen.size() != 2 * task.spec.bracket_pairs + 1 || gen.back() != v.eos()) return false;
  std::size_t depth = 0;
  for (std::size_t i = 0; i + 1 < gen.size(); ++i) {
    if (gen[i] == v.id("(")) {
      if (++depth > task.spec.max_depth) return false;
    } else if (gen[i] == v.id(")")) {
      if (depth == 0) return false;
      --depth;
    } else {
      return false;
    }
  }
  return depth == 0;
}

bool keyed_copy_valid(const Task& task, const Sequence& x) {
  const Vocab& v = task.vocab;
  const TaskSpec& s = task.spec;
  const auto prompt = x.prompt();
  const std::size_t block = 1 + s.value_len;
  if (prompt.size() != s.copy_pairs * block + 2) return false;
  const TokenId query = prompt.back();
  for (std::size_t i = 0; i < s.copy_pairs; ++i) {
    if (prompt[i * block] != query) continue;
    auto gen = x.generated();
    if (gen.size() != s.value_len + 1 || gen.back() != v.eos()) return false;
    return std::equal(gen.begin(), gen.end() - 1, prompt.begin() + i * block + 1);
  }
  return false;
}

}  // namespace

const char* to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::kArithmetic:
      return "arithmetic";
    case TaskKind::kBrackets:
      return "brackets";
    case TaskKind::kKeyedCopy:
      return "keyed-copy";
  }
  return "?";
}

TaskKind parse_task_kind(std::string_view name) {
  if (name == "arithmetic") return TaskKind::kArithmetic;
  if (name == "brackets") return TaskKind::kBrackets;
  if (name == "keyed-copy") return TaskKind::kKeyedCopy;
  throw ConfigError("unknown task '" + std::string(name) + "'");
}

Task make_task(const TaskSpec& spec) {
  if (!(spec.eval_fraction >= 0.0 && spec.eval_fraction < 1.0)) {
    throw ConfigError("eval_fraction must lie in [0, 1)");
  }
  Task task;
  switch (spec.kind) {
    case TaskKind::kArithmetic:
      task = arithmetic(spec);
      break;
    case TaskKind::kBrackets:
      task = brackets(spec);
      break;
    case TaskKind::kKeyedCopy:
      task = keyed_copy(spec);
      break;
  }
  if (task.corpus.empty()) throw ConfigError("task produced an empty corpus");
  std::vector<Sequence> shuffled = task.corpus;
  Philox rng = Philox(spec.split_seed).split(2);
  shuffle(shuffled, rng);
  const auto n_eval = static_cast<std::size_t>(
      std::floor(spec.eval_fraction * static_cast<double>(shuffled.size())));
  task.eval.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_eval));
  task.train.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(n_eval), shuffled.end());
  return task;
}

bool is_valid(const Task& task, const Sequence& x) {
  try {
    validate(x, task.vocab, Completeness::kComplete);
  } catch (const DomainError&) {
    return false;
  }
  switch (task.spec.kind) {
    case TaskKind::kArithmetic:
      return x.prompt_len == 0 && arithmetic_valid(task, x.generated());
    case TaskKind::kBrackets:
      return x.prompt_len == 0 && brackets_valid(task, x.generated());
    case TaskKind::kKeyedCopy:
      return keyed_copy_valid(task, x);
  }
  return false;
}

}  // namespace editdiff
