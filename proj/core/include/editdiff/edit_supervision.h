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

#ifndef EDITDIFF_EDIT_SUPERVISION_H_
#define EDITDIFF_EDIT_SUPERVISION_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "editdiff/edit_engine.h"
#include "editdiff/sequence.h"

namespace editdiff {

// Positions index the source's generated region, 1-based. Insert's pos is the
// gap it follows: 0 is the prompt boundary, k is right after source token k.
struct EditOp {
  enum class Kind : std::uint8_t { kReplace, kDelete, kInsert };
  Kind kind;
  std::size_t pos;
  TokenId token;  // unused for kDelete

  static EditOp replace(std::size_t pos, TokenId t) { return {Kind::kReplace, pos, t}; }
  static EditOp remove(std::size_t pos) { return {Kind::kDelete, pos, 0}; }
  static EditOp insert(std::size_t after, TokenId t) { return {Kind::kInsert, after, t}; }

  friend auto operator<=>(const EditOp&, const EditOp&) = default;
};

// Ops in canonical order: ascending position, and within a position the
// replace/delete of that token before the insertions that follow it.
struct EditScript {
  std::vector<EditOp> ops;

  std::size_t distance() const { return ops.size(); }
  friend auto operator<=>(const EditScript&, const EditScript&) = default;
};

std::string to_string(const EditScript& script, const Vocab& vocab);

// Unit-cost insert/delete/substitute distance.
std::size_t levenshtein_distance(std::span<const TokenId> a, std::span<const TokenId> b);
// Distance between generated regions; prompts must match.
std::size_t levenshtein_distance(const Sequence& a, const Sequence& b);

// Backtrace from the end preferring Match > Substitute > Delete > Insert,
// followed by canonicalize_insertions.
EditScript minimal_edit_script(std::span<const TokenId> a, std::span<const TokenId> b);
EditScript minimal_edit_script(const Sequence& a, const Sequence& b);

// Moves every insertion block whose first token equals the kept token after
// it to the right of that token (repeatedly, across runs), so that the pair
// rule can realize it. The result yields the same target with the same
// number of operations.
EditScript canonicalize_insertions(const EditScript& script, std::span<const TokenId> a);
EditScript canonicalize_insertions(const EditScript& script, const Sequence& a);

// Interprets the script against a generated region. Throws DomainError on
// malformed scripts.
std::vector<TokenId> apply_script(std::span<const TokenId> a, const EditScript& script);

// Per-slot supervision. c_star/n_star are sized to the full sequence. Only the
// first insertion of each block is staged; the rest are deferred. n slots the
// pair rule discards (prompt interior, the predecessor of a deleted token,
// the final slot when a prompt exists) are excluded via n_mask and hold EOS.
struct EditTargets {
  std::vector<TokenId> c_star;
  std::vector<TokenId> n_star;
  std::vector<std::uint8_t> c_mask;  // generated positions
  std::vector<std::uint8_t> n_mask;
  std::size_t staged_insertions = 0;
  std::size_t deferred_insertions = 0;
  std::size_t max_block_insertions = 0;  // longest insertion block

  EditPrediction as_prediction() const { return {c_star, n_star}; }
  // Number of script operations applied by one step.
  std::size_t applied_actions(std::size_t script_distance) const {
    return script_distance - deferred_insertions;
  }
};

// Throws DomainError if the script is not canonical for a.
EditTargets script_to_targets(const Sequence& a, const EditScript& script,
                              const Vocab& vocab);

// minimal_edit_script + script_to_targets.
EditTargets build_targets(const Sequence& a, const Sequence& target, const Vocab& vocab);

}  // namespace editdiff

#endif  // EDITDIFF_EDIT_SUPERVISION_H_
