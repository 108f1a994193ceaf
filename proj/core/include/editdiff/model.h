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

#ifndef EDITDIFF_MODEL_H_
#define EDITDIFF_MODEL_H_

#include <cstddef>
#include <vector>

#include "editdiff/rows.h"
#include "editdiff/sequence.h"

namespace editdiff {

// One row per MASK token of the input, in position order. `positions` holds
// absolute indices into the input sequence.
struct UnmaskPrediction {
  std::vector<std::size_t> positions;
  RowMatrix probs;
};

// One row per live position. Columns span the whole vocab; the c-head puts
// zero mass on MASK and PAD, the n-head additionally on DEL.
struct EditDistributions {
  RowMatrix c;
  RowMatrix n;
};

// A denoiser with an unmasking head and a pair of edit heads sharing one
// parameter set. Implementations must be safe to query concurrently.
class DenoiserModel {
 public:
  virtual ~DenoiserModel() = default;

  virtual const Vocab& vocab() const = 0;
  virtual UnmaskPrediction predict_unmask(const Sequence& xt) const = 0;
  virtual EditDistributions predict_edits(const Sequence& x) const = 0;
  // Untrained models are refused by the evaluation harness.
  virtual bool is_trained() const { return true; }
};

}  // namespace editdiff

#endif  // EDITDIFF_MODEL_H_
