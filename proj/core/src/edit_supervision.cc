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

#include "editdiff/edit_supervision.h"

#include <algorithm>
#include <optional>
#include <sstream>

#include "editdiff/errors.h"

namespace editdiff {
namespace {

// Script in per-slot form: fate of each source token plus the insertion
// block of each gap (gap g follows source token g; gap 0 is the boundary).
struct Alignment {
  std::vector<std::optional<TokenId>> kept;  // nullopt: deleted
  std::vector<std::vector<TokenId>> gaps;    // size n + 1
};

Alignment to_alignment(std::span<const TokenId> a, const EditScript& script) {
  Alignment al{std::vector<std::optional<TokenId>>(a.begin(), a.end()),
               std::vector<std::vector<TokenId>>(a.size() + 1)};
  std::vector<std::uint8_t> touched(a.size() + 1, 0);
  std::size_t last_pos = 0;
  for (const EditOp& op : script.ops) {
    if (op.pos < last_pos) throw DomainError("edit script: positions out of order");
    last_pos = op.pos;
    if (op.kind == EditOp::Kind::kInsert) {
      if (op.pos > a.size()) throw DomainError("edit script: insertion past the end");
      al.gaps[op.pos].push_back(op.token);
      continue;
    }
    if (op.pos == 0 || op.pos > a.size()) {
      throw DomainError("edit script: position out of range");
    }
    if (touched[op.pos] || !al.gaps[op.pos].empty()) {
      throw DomainError("edit script: token edited twice or after its insertions");
    }
    touched[op.pos] = 1;
    if (op.kind == EditOp::Kind::kDelete) {
      al.kept[op.pos - 1] = std::nullopt;
    } else {
      if (op.token == a[op.pos - 1]) {
        throw DomainError("edit script: replacement by the same token");
      }
      al.kept[op.pos - 1] = op.token;
    }
  }
  return al;
}

EditScript to_script(std::span<const TokenId> a, const Alignment& al) {
  EditScript s;
  for (TokenId t : al.gaps[0]) s.ops.push_back(EditOp::insert(0, t));
  for (std::size_t k = 1; k <= a.size(); ++k) {
    const auto& kept = al.kept[k - 1];
    if (!kept) {
      s.ops.push_back(EditOp::remove(k));
    } else if (*kept != a[k - 1]) {
      s.ops.push_back(EditOp::replace(k, *kept));
    }
    for (TokenId t : al.gaps[k]) s.ops.push_back(EditOp::insert(k, t));
  }
  return s;
}

void canonicalize(Alignment& al) {
  const std::size_t n = al.kept.size();
  std::size_t block_start = 0;  // first gap feeding the next kept token
  for (std::size_t k = 1; k <= n; ++k) {
    if (!al.kept[k - 1]) continue;
    const TokenId kept = *al.kept[k - 1];
    std::vector<TokenId> block;
    for (std::size_t g = block_start; g < k; ++g) {
      block.insert(block.end(), al.gaps[g].begin(), al.gaps[g].end());
    }
    if (!block.empty() && block.front() == kept) {
      // x.. v [v] == [v] x.. v: rematch the kept token to the block's head.
      std::vector<TokenId> moved(block.begin() + 1, block.end());
      moved.push_back(block.front());
      moved.insert(moved.end(), al.gaps[k].begin(), al.gaps[k].end());
      for (std::size_t g = block_start; g < k; ++g) al.gaps[g].clear();
      al.gaps[k] = std::move(moved);
    }
    block_start = k;
  }
}

void check_prompts(const Sequence& a, const Sequence& b) {
  if (!std::equal(a.prompt().begin(), a.prompt().end(), b.prompt().begin(),
                  b.prompt().end())) {
    throw DomainError("edit supervision: sequences have different prompts");
  }
}

std::vector<std::uint32_t> distance_table(std::span<const TokenId> a,
                                          std::span<const TokenId> b) {
  const std::size_t cols = b.size() + 1;
  std::vector<std::uint32_t> d((a.size() + 1) * cols);
  for (std::size_t j = 0; j < cols; ++j) d[j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::uint32_t* row = &d[i * cols];
    const std::uint32_t* up = &d[(i - 1) * cols];
    row[0] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 1; j < cols; ++j) {
      const std::uint32_t diag = up[j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u);
      row[j] = std::min({diag, up[j] + 1u, row[j - 1] + 1u});
    }
  }
  return d;
}

}  // namespace

std::string to_string(const EditScript& script, const Vocab& vocab) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < script.ops.size(); ++i) {
    const EditOp& op = script.ops[i];
    if (i) os << ", ";
    switch (op.kind) {
      case EditOp::Kind::kReplace:
        os << "Replace(" << op.pos << ", " << vocab.symbol(op.token) << ')';
        break;
      case EditOp::Kind::kDelete:
        os << "Delete(" << op.pos << ')';
        break;
      case EditOp::Kind::kInsert:
        os << "Insert(after " << op.pos << ", " << vocab.symbol(op.token) << ')';
        break;
    }
  }
  os << ']';
  return os.str();
}

std::size_t levenshtein_distance(std::span<const TokenId> a, std::span<const TokenId> b) {
  // Two-row variant of distance_table.
  std::vector<std::uint32_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::uint32_t diag = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u);
      cur[j] = std::min({diag, prev[j] + 1u, cur[j - 1] + 1u});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::size_t levenshtein_distance(const Sequence& a, const Sequence& b) {
  check_prompts(a, b);
  return levenshtein_distance(a.generated(), b.generated());
}

EditScript minimal_edit_script(std::span<const TokenId> a, std::span<const TokenId> b) {
  const std::vector<std::uint32_t> d = distance_table(a, b);
  const std::size_t cols = b.size() + 1;
  auto at = [&](std::size_t i, std::size_t j) { return d[i * cols + j]; };

  std::vector<EditOp> reversed;
  std::size_t i = a.size(), j = b.size();
  while (i > 0 || j > 0) {
    const std::uint32_t here = at(i, j);
    if (i > 0 && j > 0 && a[i - 1] == b[j - 1] && here == at(i - 1, j - 1)) {
      --i, --j;
    } else if (i > 0 && j > 0 && here == at(i - 1, j - 1) + 1) {
      reversed.push_back(EditOp::replace(i, b[j - 1]));
      --i, --j;
    } else if (i > 0 && here == at(i - 1, j) + 1) {
      reversed.push_back(EditOp::remove(i));
      --i;
    } else {
      reversed.push_back(EditOp::insert(i, b[j - 1]));
      --j;
    }
  }
  EditScript raw{std::vector<EditOp>(reversed.rbegin(), reversed.rend())};
  return canonicalize_insertions(raw, a);
}

EditScript minimal_edit_script(const Sequence& a, const Sequence& b) {
  check_prompts(a, b);
  return minimal_edit_script(a.generated(), b.generated());
}

EditScript canonicalize_insertions(const EditScript& script, std::span<const TokenId> a) {
  Alignment al = to_alignment(a, script);
  canonicalize(al);
  return to_script(a, al);
}

EditScript canonicalize_insertions(const EditScript& script, const Sequence& a) {
  return canonicalize_insertions(script, a.generated());
}

std::vector<TokenId> apply_script(std::span<const TokenId> a, const EditScript& script) {
  const Alignment al = to_alignment(a, script);
  std::vector<TokenId> out(al.gaps[0]);
  for (std::size_t k = 1; k <= a.size(); ++k) {
    if (al.kept[k - 1]) out.push_back(*al.kept[k - 1]);
    out.insert(out.end(), al.gaps[k].begin(), al.gaps[k].end());
  }
  return out;
}

EditTargets script_to_targets(const Sequence& a, const EditScript& script,
                              const Vocab& vocab) {
  const auto gen = a.generated();
  Alignment al = to_alignment(gen, script);
  {
    Alignment canon = al;
    canonicalize(canon);
    if (canon.gaps != al.gaps) throw DomainError("script_to_targets: script is not canonical");
  }

  const std::size_t len = a.size();
  const std::size_t p = a.prompt_len;
  EditTargets t;
  t.c_star = a.tokens;
  t.n_star.assign(len, vocab.eos());
  t.c_mask.assign(len, 0);
  t.n_mask.assign(len, 0);
  for (std::size_t k = 1; k <= gen.size(); ++k) {
    t.c_star[p + k - 1] = al.kept[k - 1] ? *al.kept[k - 1] : vocab.del();
    t.c_mask[p + k - 1] = 1;
  }

  // Each kept token j receives the concatenated insertion blocks of the gaps
  // since the previous kept token, through the n slot it inherits from.
  std::size_t block_start = 0;
  for (std::size_t k = 1; k <= gen.size(); ++k) {
    if (!al.kept[k - 1]) continue;
    std::size_t block_len = 0;
    std::optional<TokenId> first;
    for (std::size_t g = block_start; g < k; ++g) {
      if (!first && !al.gaps[g].empty()) first = al.gaps[g].front();
      block_len += al.gaps[g].size();
    }
    const std::size_t slot = inherited_slot(p + k - 1, a);
    t.n_star[slot] = first ? *first : *al.kept[k - 1];
    t.n_mask[slot] = 1;
    if (block_len > 0) {
      ++t.staged_insertions;
      t.deferred_insertions += block_len - 1;
    }
    t.max_block_insertions = std::max(t.max_block_insertions, block_len);
    block_start = k;
  }
  // Insertions after the last kept token have no slot to ride on.
  std::size_t tail = 0;
  for (std::size_t g = block_start; g <= gen.size(); ++g) tail += al.gaps[g].size();
  t.deferred_insertions += tail;
  t.max_block_insertions = std::max(t.max_block_insertions, tail);
  return t;
}

EditTargets build_targets(const Sequence& a, const Sequence& target, const Vocab& vocab) {
  return script_to_targets(a, minimal_edit_script(a, target), vocab);
}

}  // namespace editdiff
