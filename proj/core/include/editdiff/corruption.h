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

#ifndef EDITDIFF_CORRUPTION_H_
#define EDITDIFF_CORRUPTION_H_

#include <cstdint>
#include <vector>

#include "editdiff/rng.h"
#include "editdiff/rows.h"
#include "editdiff/sequence.h"

namespace editdiff {

struct CorruptionConfig {
  double noise_level = 1.0;  // t in (0, 1]
  std::uint64_t rng_seed = 0;
};

// x_t: `base` carries MASK at every masked position; `masked` has one flag per
// generated position. The prompt is never masked.
struct MaskedSequence {
  Sequence base;
  std::vector<std::uint8_t> masked;

  std::size_t masked_count() const;
};

// Masks each generated position independently with probability t.
MaskedSequence corrupt(const Sequence& x0, const CorruptionConfig& cfg,
                       const Vocab& vocab);
// Same, drawing from a caller-owned stream (one uniform per generated slot).
MaskedSequence corrupt(const Sequence& x0, double noise_level, Philox& rng,
                       const Vocab& vocab);

// ln(1e-12): zero probability on a true token costs -kLogFloor.
inline constexpr double kLogFloor = -27.631021115928547;

// -(1/(t L)) * sum over masked i of log pred_i(x0_i), where L is the
// generated-region length and pred has one row per masked position, in
// position order.
double denoising_loss(const RowMatrix& pred, const Sequence& x0,
                      const MaskedSequence& xt, double t);

}  // namespace editdiff

#endif  // EDITDIFF_CORRUPTION_H_
