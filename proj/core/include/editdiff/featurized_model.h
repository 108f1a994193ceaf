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

#ifndef EDITDIFF_FEATURIZED_MODEL_H_
#define EDITDIFF_FEATURIZED_MODEL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "editdiff/model.h"

namespace editdiff {

struct FeaturizedConfig {
  std::size_t embed_dim = 8;
  std::size_t hidden_dim = 64;
  std::size_t window_radius = 4;
  std::size_t max_positions = 64;  // later positions share the last embedding
  double init_scale = 0.1;
  std::uint64_t seed = 1;

  friend bool operator==(const FeaturizedConfig&, const FeaturizedConfig&) = default;
};

enum class Head : std::uint8_t { kUnmask = 0, kReplace = 1, kNext = 2 };

// One weighted cross-entropy term: -weight * log p_head(target | position).
struct HeadTarget {
  std::size_t position;
  Head head;
  TokenId target;
  double weight;
};

struct TrainingExample {
  Sequence input;
  std::vector<HeadTarget> targets;
};

// Desk-scale denoiser. For position i the feature vector concatenates the
// token embeddings of the window [i - r, i + r] (PAD outside the sequence,
// or wrapped around when there is no prompt) with a position embedding; one tanh layer maps it to a hidden state shared
// by three linear-softmax heads (unmask, replace-or-delete, next token).
//
// Forward passes are const and safe to run concurrently; parameter updates
// need exclusive access.
class FeaturizedModel final : public DenoiserModel {
 public:
  FeaturizedModel(Vocab vocab, FeaturizedConfig config);

  const Vocab& vocab() const override { return vocab_; }
  UnmaskPrediction predict_unmask(const Sequence& xt) const override;
  EditDistributions predict_edits(const Sequence& x) const override;
  bool is_trained() const override { return updates_ > 0; }

  const FeaturizedConfig& config() const { return config_; }
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  std::size_t updates() const { return updates_; }
  void record_update() { ++updates_; }

  // Probability row of one head at one position.
  std::vector<double> head_probs(const Sequence& x, std::size_t position, Head head) const;

  // Sum of the example's weighted cross-entropy terms. When grad is
  // non-empty (same size as params()) the gradient is accumulated into it.
  double loss_and_gradient(const TrainingExample& example, std::span<double> grad) const;
  double loss(const TrainingExample& example) const {
    return loss_and_gradient(example, {});
  }

  // Versioned JSON checkpoint: format tag, version, config, vocab symbols,
  // parameters and update count. A mismatched tag or version throws
  // CheckpointError.
  static constexpr int kCheckpointVersion = 1;
  void save(const std::filesystem::path& path) const;
  static FeaturizedModel load(const std::filesystem::path& path);

 private:
  struct Layout {
    std::size_t tok, pos, w1, b1;
    std::array<std::size_t, 3> head_w, head_b;
    std::size_t features, total;
  };

  TokenId window_token(const Sequence& x, std::size_t position, std::ptrdiff_t offset) const;
  void features(const Sequence& x, std::size_t position, std::span<double> out) const;
  void hidden(std::span<const double> feats, std::span<double> out) const;
  // Softmax over the head's allowed tokens; disallowed entries are 0.
  void head_softmax(Head head, std::span<const double> h, std::span<double> out) const;

  Vocab vocab_;
  FeaturizedConfig config_;
  Layout layout_;
  std::array<std::vector<std::uint8_t>, 3> allowed_;
  std::vector<double> params_;
  std::size_t updates_ = 0;
};

}  // namespace editdiff

#endif  // EDITDIFF_FEATURIZED_MODEL_H_
