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

#ifndef EDITDIFF_TRAINING_H_
#define EDITDIFF_TRAINING_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "editdiff/edit_supervision.h"
#include "editdiff/featurized_model.h"
#include "editdiff/rng.h"

namespace editdiff {

enum class Stage : std::uint8_t { kMaskPretrain, kMaskSft, kMaskEdit };
enum class StateSource : std::uint8_t { kModelRollout, kMaskOnly, kRuleBasedNoise };

const char* to_string(Stage stage);
Stage parse_stage(std::string_view name);
const char* to_string(StateSource source);
StateSource parse_state_source(std::string_view name);

struct RolloutConfig {
  std::vector<std::size_t> unmask_k_choices{2, 4, 8, 16};
  // Step n of the unmasking loop reveals everything that is left.
  std::size_t max_unmask_steps = 64;
  // Upper bound on the edit-rollout depth m reached by the curriculum.
  std::size_t max_edit_depth = 3;
  std::uint64_t seed = 0;
};

struct StageThreeConfig {
  double alpha = 0.5;  // probability that a batch is a mask-edit batch
  double beta = 0.0;   // rollout noise level drawn from (beta, 1]
  StateSource state_source = StateSource::kModelRollout;
  double noise_rate = 0.1;  // per-token rate for rule-based noise
};

struct TrainConfig {
  std::size_t epochs = 10;
  std::size_t batch_size = 16;
  double learning_rate = 0.1;
  double momentum = 0.0;
  double next_token_weight = 1.0;  // pretraining next-token head
  double edit_weight = 1.0;
  std::uint64_t seed = 0;
};

// m is capped at 0 for the first quarter of the epochs and then rises by one
// per quarter, never above max_depth.
std::size_t curriculum_cap(std::size_t epoch, std::size_t epochs, std::size_t max_depth);

struct RolloutState {
  Sequence state;
  double noise_level = 1.0;
  std::size_t unmask_steps = 0;
  std::size_t edit_steps = 0;
};

// Corrupt x_star at t ~ U(beta, 1], reveal with random k per step until no
// MASK remains, then take m ~ U{0..depth_cap} greedy edit steps.
RolloutState rollout_state(const DenoiserModel& model, const Sequence& x_star,
                           const RolloutConfig& rcfg, const StageThreeConfig& scfg,
                           std::size_t depth_cap, Philox& rng);

// Canonical per-slot edit targets turning x_m into x_star.
EditTargets build_example(const Sequence& x_m, const Sequence& x_star, const Vocab& vocab);

struct NoisyState {
  Sequence state;
  std::size_t perturbations = 0;
};

// Independent insert/delete/replace noise at `rate` per generated token; the
// final EOS is left alone.
NoisyState rule_based_noise(const Sequence& x_star, double rate, const Vocab& vocab,
                            Philox& rng);

// Cheaper refinement states: kMaskOnly is a rollout with m forced to 0,
// kRuleBasedNoise perturbs x_star directly. kModelRollout is rejected.
Sequence ablation_state(const DenoiserModel& model, const Sequence& x_star, StateSource mode,
                        const StageThreeConfig& scfg, const RolloutConfig& rcfg, Philox& rng);

// ELBO-weighted unmask terms (1/(tL) per masked slot) plus, when
// next_weight > 0, next-token terms on the clean successor of every slot.
TrainingExample mask_example(const Sequence& x0, double t, Philox& rng, const Vocab& vocab,
                             double next_weight);

// Mean cross-entropy of the c-head over generated slots plus that of the
// n-head over supervised slots, scaled by weight.
TrainingExample edit_example(const Sequence& x_m, const EditTargets& targets, double weight);

// Momentum buffer carried across train_step calls.
struct SgdState {
  std::vector<double> velocity;
};

// One update on the mean loss of the batch: v = mu*v - lr*g, theta += v.
// Returns the batch loss measured before the update. Throws
// NonFiniteLossError (parameters untouched) when it is not finite.
double train_step(FeaturizedModel& model, std::span<const TrainingExample> batch,
                  double learning_rate, double momentum, SgdState& state);

struct EpochMetrics {
  std::size_t epoch = 0;
  Stage stage = Stage::kMaskSft;
  double mask_loss = 0.0;
  double next_loss = 0.0;
  double edit_loss = 0.0;
  double total_loss = 0.0;
  std::size_t curriculum_cap = 0;
  std::size_t mask_batches = 0;
  std::size_t edit_batches = 0;
  std::optional<double> heldout_loss;
  std::optional<double> dev_validity;
};

struct TrainHooks {
  // Weighted mask loss on these sequences (fixed corruption seed) after each epoch.
  const std::vector<Sequence>* heldout = nullptr;
  std::function<double(const FeaturizedModel&)> dev_validity;
  // Frozen model for rollouts; the model being trained when null.
  const DenoiserModel* rollout_model = nullptr;
  std::function<void(const EpochMetrics&)> on_epoch;
};

// Plain (momentum) gradient descent over seeded, shuffled fixed-size batches.
std::vector<EpochMetrics> train_stage(FeaturizedModel& model, const std::vector<Sequence>& corpus,
                                      Stage stage, const StageThreeConfig& scfg,
                                      const RolloutConfig& rcfg, const TrainConfig& tcfg,
                                      const TrainHooks& hooks = {});

double heldout_mask_loss(const FeaturizedModel& model, const std::vector<Sequence>& heldout,
                         std::uint64_t seed);

// Append-only CSV; the header is written when the file is new or empty.
void append_metrics_csv(const std::filesystem::path& path,
                        const std::vector<EpochMetrics>& metrics);

}  // namespace editdiff

#endif  // EDITDIFF_TRAINING_H_
