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

#include "editdiff/corruption.h"

#include <algorithm>
#include <cmath>

#include "editdiff/errors.h"

namespace editdiff {
namespace {

void check_noise_level(double t) {
  if (!(t > 0.0 && t <= 1.0)) {
    throw DomainError("corrupt: noise level must lie in (0, 1], got " + std::to_string(t));
  }
}

}  // namespace

std::size_t MaskedSequence::masked_count() const {
  return static_cast<std::size_t>(std::count(masked.begin(), masked.end(), 1));
}

MaskedSequence corrupt(const Sequence& x0, const CorruptionConfig& cfg,
                       const Vocab& vocab) {
  Philox rng(cfg.rng_seed);
  return corrupt(x0, cfg.noise_level, rng, vocab);
}

MaskedSequence corrupt(const Sequence& x0, double noise_level, Philox& rng,
                       const Vocab& vocab) {
  check_noise_level(noise_level);
  validate(x0, vocab, Completeness::kComplete);
  MaskedSequence out{x0, std::vector<std::uint8_t>(x0.gen_len(), 0)};
  for (std::size_t i = 0; i < x0.gen_len(); ++i) {
    if (rng.bernoulli(noise_level)) {
      out.masked[i] = 1;
      out.base.tokens[x0.prompt_len + i] = vocab.mask();
    }
  }
  return out;
}

double denoising_loss(const RowMatrix& pred, const Sequence& x0,
                      const MaskedSequence& xt, double t) {
  check_noise_level(t);
  if (xt.masked.size() != x0.gen_len() || xt.base.size() != x0.size()) {
    throw ShapeError("denoising_loss: x_t does not match x_0");
  }
  if (pred.rows() != xt.masked_count()) {
    throw ShapeError("denoising_loss: expected " + std::to_string(xt.masked_count()) +
                     " prediction rows, got " + std::to_string(pred.rows()));
  }
  pred.check_normalized();
  const double len = static_cast<double>(x0.gen_len());
  double sum = 0.0;
  std::size_t row = 0;
  for (std::size_t i = 0; i < xt.masked.size(); ++i) {
    if (!xt.masked[i]) continue;
    const TokenId truth = x0.tokens[x0.prompt_len + i];
    if (static_cast<std::size_t>(truth) >= pred.cols()) {
      throw ShapeError("denoising_loss: prediction rows narrower than vocab");
    }
    const double p = pred.at(row++, static_cast<std::size_t>(truth));
    sum += p > 0.0 ? std::max(std::log(p), kLogFloor) : kLogFloor;
  }
  return -sum / (t * len);
}

}  // namespace editdiff
