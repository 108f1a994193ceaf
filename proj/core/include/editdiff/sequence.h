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

#ifndef EDITDIFF_SEQUENCE_H_
#define EDITDIFF_SEQUENCE_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "editdiff/vocab.h"

namespace editdiff {

// A frozen prompt prefix followed by the editable generated region. Only the
// live region is stored; PAD never appears inside it.
struct Sequence {
  std::vector<TokenId> tokens;
  std::size_t prompt_len = 0;

  std::size_t size() const { return tokens.size(); }
  std::size_t gen_len() const { return tokens.size() - prompt_len; }
  std::span<const TokenId> prompt() const {
    return std::span<const TokenId>(tokens).first(prompt_len);
  }
  std::span<const TokenId> generated() const {
    return std::span<const TokenId>(tokens).subspan(prompt_len);
  }

  friend bool operator==(const Sequence&, const Sequence&) = default;
};

enum class Completeness {
  kAny,       // MASK allowed in the generated region
  kComplete,  // no MASK anywhere
  kTarget,    // complete, and the generated region ends with exactly one EOS
};

// Throws DomainError naming the first violated invariant.
void validate(const Sequence& x, const Vocab& vocab,
              Completeness completeness = Completeness::kAny);

// prompt + target + EOS.
Sequence make_sequence(std::span<const TokenId> prompt,
                       std::span<const TokenId> target, const Vocab& vocab);

// Decodes the generated region; the trailing EOS is kept so that layout
// errors stay visible.
std::string to_string(const Sequence& x, const Vocab& vocab);

}  // namespace editdiff

#endif  // EDITDIFF_SEQUENCE_H_
