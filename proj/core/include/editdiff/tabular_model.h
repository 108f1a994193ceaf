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

#ifndef EDITDIFF_TABULAR_MODEL_H_
#define EDITDIFF_TABULAR_MODEL_H_

#include <vector>

#include "editdiff/model.h"

namespace editdiff {

// Exact conditionals of a small closed corpus, computed by enumeration.
//
// Unmasking: the posterior at each masked slot is uniform over the corpus
// sequences that agree with every unmasked slot of x_t (duplicates count).
// If no sequence agrees, the positional marginals of same-length sequences
// are used, and failing that a uniform row.
//
// Editing: the refinement target is uniform over the corpus sequences with
// the same prompt that are nearest to x in edit distance, ties broken toward
// the longest common prefix with x's generated region (earlier tokens are
// treated as evidence, later ones as the suspects). Each head row is the
// average of the one-hot canonical targets toward those sequences.
class TabularModel final : public DenoiserModel {
 public:
  // Throws DomainError on an empty corpus, on sequences violating the target
  // layout, or on mixed lengths/prompt lengths.
  static TabularModel fit(Vocab vocab, std::vector<Sequence> corpus);

  const Vocab& vocab() const override { return vocab_; }
  UnmaskPrediction predict_unmask(const Sequence& xt) const override;
  EditDistributions predict_edits(const Sequence& x) const override;

  const std::vector<Sequence>& corpus() const { return corpus_; }

 private:
  TabularModel(Vocab vocab, std::vector<Sequence> corpus)
      : vocab_(std::move(vocab)), corpus_(std::move(corpus)) {}

  Vocab vocab_;
  std::vector<Sequence> corpus_;
};

}  // namespace editdiff

#endif  // EDITDIFF_TABULAR_MODEL_H_
