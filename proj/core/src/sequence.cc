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

#include "editdiff/sequence.h"

#include <algorithm>

#include "editdiff/errors.h"

namespace editdiff {

void validate(const Sequence& x, const Vocab& vocab, Completeness completeness) {
  if (x.prompt_len > x.tokens.size()) {
    throw DomainError("sequence: prompt_len exceeds length");
  }
  for (std::size_t i = 0; i < x.tokens.size(); ++i) {
    const TokenId t = x.tokens[i];
    if (!vocab.contains(t)) {
      throw DomainError("sequence: token id out of range at " + std::to_string(i));
    }
    if (t == vocab.pad()) throw DomainError("sequence: PAD inside live region");
    if (t == vocab.del()) throw DomainError("sequence: DEL inside live region");
    if (t == vocab.mask() &&
        (i < x.prompt_len || completeness != Completeness::kAny)) {
      throw DomainError("sequence: unexpected MASK at " + std::to_string(i));
    }
  }
  if (completeness == Completeness::kTarget) {
    auto gen = x.generated();
    if (gen.empty() || gen.back() != vocab.eos() ||
        std::count(gen.begin(), gen.end(), vocab.eos()) != 1) {
      throw DomainError("sequence: generated region must end with exactly one EOS");
    }
  }
}

Sequence make_sequence(std::span<const TokenId> prompt,
                       std::span<const TokenId> target, const Vocab& vocab) {
  Sequence x;
  x.tokens.assign(prompt.begin(), prompt.end());
  x.tokens.insert(x.tokens.end(), target.begin(), target.end());
  x.tokens.push_back(vocab.eos());
  x.prompt_len = prompt.size();
  return x;
}

std::string to_string(const Sequence& x, const Vocab& vocab) {
  return vocab.decode(x.generated());
}

}  // namespace editdiff
