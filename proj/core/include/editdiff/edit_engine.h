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

#ifndef EDITDIFF_EDIT_ENGINE_H_
#define EDITDIFF_EDIT_ENGINE_H_

#include <cstddef>
#include <vector>

#include "editdiff/model.h"
#include "editdiff/sequence.h"

namespace editdiff {

// Token-wise edit actions for a sequence of length L: c[i] is the refined
// token at i (or DEL), n[i] the candidate inserted after i.
//
// Pairing rule. Position j of the generated region inherits the insertion
// candidate m_j = n[j-1] of its original predecessor; with an empty prompt
// the first position inherits n[L-1] (the rotated slot). Prompt positions
// are frozen: c must equal the prompt token there and their inherited
// candidates are ignored. A position with c = DEL is dropped together with
// its inherited candidate. Each survivor then emits m_j (only if m_j != c_j)
// followed by c_j.
struct EditPrediction {
  std::vector<TokenId> c;
  std::vector<TokenId> n;
};

struct EditOutcome {
  Sequence result;
  std::size_t replacements = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  bool was_empty = false;  // result is token-identical to the input
  bool truncated = false;  // generated region was cut back to the length cap
};

struct EditLimits {
  // L_max, applied to the generated region. Overflow is truncated and EOS
  // forced into the last slot.
  std::size_t max_gen_len = 512;
};

// Sequential reference: one left-to-right pass over the pairs.
EditOutcome apply_edits(const Sequence& x, const EditPrediction& e,
                        const Vocab& vocab, const EditLimits& limits = {});

// Shift-mask-interleave formulation: rotate n by one slot, overwrite prompt
// slots, drop DEL pairs, then interleave the candidates that differ from the
// kept token. Every pass is elementwise or a prefix sum.
EditOutcome apply_edits_parallel(const Sequence& x, const EditPrediction& e,
                                 const Vocab& vocab,
                                 const EditLimits& limits = {});

// True iff every c_i = x_i and every active inherited candidate equals its c.
bool is_empty_edit(const Sequence& x, const EditPrediction& e, const Vocab& vocab);

// The index whose n feeds m_j, for a generated position j.
std::size_t inherited_slot(std::size_t j, const Sequence& x);

// c = x, n[i] = x[i+1]: applies as a no-op.
EditPrediction identity_edit(const Sequence& x);

// Argmax of both heads (ties to the lowest id), prompt slots forced.
EditPrediction greedy_prediction(const EditDistributions& dist, const Sequence& x);

struct GreedyStep {
  EditOutcome outcome;
  bool terminated = false;
};

GreedyStep greedy_edit_step(const DenoiserModel& model, const Sequence& x,
                            const EditLimits& limits = {});

}  // namespace editdiff

#endif  // EDITDIFF_EDIT_ENGINE_H_
