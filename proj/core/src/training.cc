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

#include "editdiff/training.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "editdiff/corruption.h"
#include "editdiff/errors.h"

namespace editdiff {
namespace {

constexpr std::uint64_t kShuffleStream = 1;
constexpr std::uint64_t kMaskStream = 2;
constexpr std::uint64_t kMixStream = 3;
constexpr std::uint64_t kRolloutStream = 4;
constexpr std::uint64_t kHeldoutSeed = 0x4e1d0;

double noise_level_above(double beta, Philox& rng) {
  // 1 - U[0,1) lies in (0, 1]; rescale into (beta, 1].
  return 1.0 - rng.uniform() * (1.0 - beta);
}

void check_configs(const StageThreeConfig& scfg, const RolloutConfig& rcfg) {
  if (!(scfg.alpha >= 0.0 && scfg.alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
  if (!(scfg.beta >= 0.0 && scfg.beta < 1.0)) throw ConfigError("beta must lie in [0, 1)");
  if (!(scfg.noise_rate >= 0.0 && scfg.noise_rate <= 1.0)) {
    throw ConfigError("noise_rate must lie in [0, 1]");
  }
  if (rcfg.unmask_k_choices.empty()) throw ConfigError("unmask_k_choices is empty");
  for (std::size_t k : rcfg.unmask_k_choices) {
    if (k == 0) throw ConfigError("unmask_k_choices must be positive");
  }
  if (rcfg.max_unmask_steps == 0) throw ConfigError("max_unmask_steps must be positive");
}

void shuffle_indices(std::vector<std::size_t>& idx, Philox& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    std::swap(idx[i - 1], idx[static_cast<std::size_t>(rng.below(i))]);
  }
}

std::string format_optional(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os.precision(10);
  os << *v;
  return os.str();
}

}  // namespace

const char* to_string(Stage stage) {
  switch (stage) {
    case Stage::kMaskPretrain:
      return "mask-pretrain";
    case Stage::kMaskSft:
      return "mask-sft";
    case Stage::kMaskEdit:
      return "mask-edit";
  }
  return "?";
}

Stage parse_stage(std::string_view name) {
  if (name == "mask-pretrain") return Stage::kMaskPretrain;
  if (name == "mask-sft") return Stage::kMaskSft;
  if (name == "mask-edit") return Stage::kMaskEdit;
  throw ConfigError("unknown stage '" + std::string(name) + "'");
}

const char* to_string(StateSource source) {
  switch (source) {
    case StateSource::kModelRollout:
      return "model-rollout";
    case StateSource::kMaskOnly:
      return "mask-only";
    case StateSource::kRuleBasedNoise:
      return "rule-based-noise";
  }
  return "?";
}

StateSource parse_state_source(std::string_view name) {
  if (name == "model-rollout") return StateSource::kModelRollout;
  if (name == "mask-only") return StateSource::kMaskOnly;
  if (name == "rule-based-noise") return StateSource::kRuleBasedNoise;
  throw ConfigError("unknown state source '" + std::string(name) + "'");
}

std::size_t curriculum_cap(std::size_t epoch, std::size_t epochs, std::size_t max_depth) {
  if (epochs == 0) return 0;
  return std::min((epoch * 4) / epochs, max_depth);
}

RolloutState rollout_state(const DenoiserModel& model, const Sequence& x_star,
                           const RolloutConfig& rcfg, const StageThreeConfig& scfg,
                           std::size_t depth_cap, Philox& rng) {
  check_configs(scfg, rcfg);
  const Vocab& vocab = model.vocab();
  RolloutState out;
  out.noise_level = noise_level_above(scfg.beta, rng);
  out.state = corrupt(x_star, out.noise_level, rng, vocab).base;

  while (true) {
    const UnmaskPrediction pred = model.predict_unmask(out.state);
    const std::size_t masked = pred.positions.size();
    if (masked == 0) break;
    std::size_t k = rcfg.unmask_k_choices[rng.below(rcfg.unmask_k_choices.size())];
    if (out.unmask_steps + 1 >= rcfg.max_unmask_steps) k = masked;
    k = std::min(k, masked);
    std::vector<std::size_t> order(masked);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(order[i], order[i + static_cast<std::size_t>(rng.below(masked - i))]);
    }
    for (std::size_t i = 0; i < k; ++i) {
      out.state.tokens[pred.positions[order[i]]] = argmax(pred.probs.row(order[i]));
    }
    ++out.unmask_steps;
  }

  const std::size_t m = static_cast<std::size_t>(rng.below(depth_cap + 1));
  for (std::size_t s = 0; s < m; ++s) {
    GreedyStep step = greedy_edit_step(model, out.state);
    if (step.terminated) break;
    out.state = std::move(step.outcome.result);
    ++out.edit_steps;
  }
  return out;
}

EditTargets build_example(const Sequence& x_m, const Sequence& x_star, const Vocab& vocab) {
  return build_targets(x_m, x_star, vocab);
}

NoisyState rule_based_noise(const Sequence& x_star, double rate, const Vocab& vocab,
                            Philox& rng) {
  const std::vector<TokenId> content = vocab.content_ids();
  if (content.empty()) throw DomainError("rule-based noise needs content symbols");
  NoisyState out;
  out.state.prompt_len = x_star.prompt_len;
  out.state.tokens.assign(x_star.tokens.begin(), x_star.tokens.begin() + x_star.prompt_len);
  const auto gen = x_star.generated();
  for (std::size_t i = 0; i < gen.size(); ++i) {
    const bool last_eos = i + 1 == gen.size() && gen[i] == vocab.eos();
    if (last_eos || !rng.bernoulli(rate)) {
      out.state.tokens.push_back(gen[i]);
      continue;
    }
    ++out.perturbations;
    switch (rng.below(3)) {
      case 0:  // insert after
        out.state.tokens.push_back(gen[i]);
        out.state.tokens.push_back(content[rng.below(content.size())]);
        break;
      case 1:  // delete
        break;
      default: {  // replace with a different symbol when one exists
        TokenId t = content[rng.below(content.size())];
        if (content.size() > 1) {
          while (t == gen[i]) t = content[rng.below(content.size())];
        }
        out.state.tokens.push_back(t);
      }
    }
  }
  return out;
}

Sequence ablation_state(const DenoiserModel& model, const Sequence& x_star, StateSource mode,
                        const StageThreeConfig& scfg, const RolloutConfig& rcfg, Philox& rng) {
  switch (mode) {
    case StateSource::kMaskOnly:
      return rollout_state(model, x_star, rcfg, scfg, 0, rng).state;
    case StateSource::kRuleBasedNoise:
      return rule_based_noise(x_star, scfg.noise_rate, model.vocab(), rng).state;
    case StateSource::kModelRollout:
      break;
  }
  throw DomainError("ablation_state: mode must be mask-only or rule-based-noise");
}

TrainingExample mask_example(const Sequence& x0, double t, Philox& rng, const Vocab& vocab,
                             double next_weight) {
  MaskedSequence xt = corrupt(x0, t, rng, vocab);
  TrainingExample ex{xt.base, {}};
  const double len = static_cast<double>(x0.gen_len());
  for (std::size_t i = 0; i < xt.masked.size(); ++i) {
    if (!xt.masked[i]) continue;
    const std::size_t pos = x0.prompt_len + i;
    ex.targets.push_back({pos, Head::kUnmask, x0.tokens[pos], 1.0 / (t * len)});
  }
  if (next_weight > 0.0 && x0.gen_len() > 0) {
    const std::size_t first = x0.prompt_len == 0 ? 0 : x0.prompt_len - 1;
    const std::size_t count = x0.size() - 1 - first;
    for (std::size_t i = first; i + 1 < x0.size(); ++i) {
      ex.targets.push_back(
          {i, Head::kNext, x0.tokens[i + 1], next_weight / static_cast<double>(count)});
    }
  }
  return ex;
}

TrainingExample edit_example(const Sequence& x_m, const EditTargets& targets, double weight) {
  TrainingExample ex{x_m, {}};
  const auto c_count = static_cast<double>(
      std::count(targets.c_mask.begin(), targets.c_mask.end(), std::uint8_t{1}));
  const auto n_count = static_cast<double>(
      std::count(targets.n_mask.begin(), targets.n_mask.end(), std::uint8_t{1}));
  for (std::size_t i = 0; i < x_m.size(); ++i) {
    if (targets.c_mask[i]) {
      ex.targets.push_back({i, Head::kReplace, targets.c_star[i], weight / c_count});
    }
    if (targets.n_mask[i]) {
      ex.targets.push_back({i, Head::kNext, targets.n_star[i], weight / n_count});
    }
  }
  return ex;
}

double train_step(FeaturizedModel& model, std::span<const TrainingExample> batch,
                  double learning_rate, double momentum, SgdState& state) {
  if (batch.empty()) throw DomainError("train_step: empty batch");
  const std::size_t n_params = model.params().size();
  std::vector<double> grad(n_params, 0.0);
  double loss = 0.0;
  for (const TrainingExample& ex : batch) loss += model.loss_and_gradient(ex, grad);
  const double scale = 1.0 / static_cast<double>(batch.size());
  loss *= scale;
  if (!std::isfinite(loss)) throw NonFiniteLossError("non-finite training loss");
  if (state.velocity.size() != n_params) state.velocity.assign(n_params, 0.0);
  auto params = model.params();
  for (std::size_t i = 0; i < n_params; ++i) {
    state.velocity[i] = momentum * state.velocity[i] - learning_rate * (grad[i] * scale);
    params[i] += state.velocity[i];
  }
  model.record_update();
  return loss;
}

double heldout_mask_loss(const FeaturizedModel& model, const std::vector<Sequence>& heldout,
                         std::uint64_t seed) {
  if (heldout.empty()) return 0.0;
  Philox rng(seed);
  double sum = 0.0;
  for (const Sequence& x : heldout) {
    const double t = noise_level_above(0.0, rng);
    sum += model.loss(mask_example(x, t, rng, model.vocab(), 0.0));
  }
  return sum / static_cast<double>(heldout.size());
}

std::vector<EpochMetrics> train_stage(FeaturizedModel& model, const std::vector<Sequence>& corpus,
                                      Stage stage, const StageThreeConfig& scfg,
                                      const RolloutConfig& rcfg, const TrainConfig& tcfg,
                                      const TrainHooks& hooks) {
  check_configs(scfg, rcfg);
  if (corpus.empty()) throw DomainError("train_stage: empty corpus");
  if (tcfg.batch_size == 0) throw ConfigError("batch_size must be positive");
  const Vocab& vocab = model.vocab();
  SgdState sgd;
  const double next_weight = tcfg.next_token_weight;

  const Philox base(tcfg.seed);
  const Philox rollout_base(rcfg.seed);
  std::vector<EpochMetrics> history;
  for (std::size_t epoch = 0; epoch < tcfg.epochs; ++epoch) {
    Philox shuffle_rng = base.split(kShuffleStream).split(epoch);
    Philox mask_rng = base.split(kMaskStream).split(epoch);
    Philox mix_rng = base.split(kMixStream).split(epoch);
    Philox rollout_rng = rollout_base.split(kRolloutStream).split(epoch);

    EpochMetrics m;
    m.epoch = epoch;
    m.stage = stage;
    m.curriculum_cap = curriculum_cap(epoch, tcfg.epochs, rcfg.max_edit_depth);
    std::size_t depth_cap = m.curriculum_cap;
    if (scfg.state_source == StateSource::kMaskOnly) depth_cap = 0;

    std::vector<std::size_t> order(corpus.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle_indices(order, shuffle_rng);

    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += tcfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + tcfg.batch_size);
      const bool edit_batch = stage == Stage::kMaskEdit && mix_rng.bernoulli(scfg.alpha);
      double mask_part = 0.0, next_part = 0.0;
      const DenoiserModel& roller =
          hooks.rollout_model ? *hooks.rollout_model : static_cast<const DenoiserModel&>(model);
      std::vector<TrainingExample> batch;
      batch.reserve(end - start);
      for (std::size_t b = start; b < end; ++b) {
        const Sequence& x0 = corpus[order[b]];
        if (edit_batch) {
          Sequence state =
              scfg.state_source == StateSource::kRuleBasedNoise
                  ? rule_based_noise(x0, scfg.noise_rate, vocab, rollout_rng).state
                  : rollout_state(roller, x0, rcfg, scfg, depth_cap, rollout_rng).state;
          const EditTargets targets = build_example(state, x0, vocab);
          batch.push_back(edit_example(state, targets, tcfg.edit_weight));
        } else {
          const double t = noise_level_above(0.0, mask_rng);
          batch.push_back(mask_example(x0, t, mask_rng, vocab, next_weight));
          if (next_weight > 0.0) {
            TrainingExample only_next{batch.back().input, {}};
            for (const auto& tg : batch.back().targets) {
              if (tg.head == Head::kNext) only_next.targets.push_back(tg);
            }
            next_part += model.loss(only_next);
          }
        }
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      double batch_loss = 0.0;
      try {
        batch_loss = train_step(model, batch, tcfg.learning_rate, tcfg.momentum, sgd);
      } catch (const NonFiniteLossError& e) {
        throw NonFiniteLossError(std::string(e.what()) + " (" + to_string(stage) + " epoch " +
                                 std::to_string(epoch) + " batch " + std::to_string(batches) +
                                 ")");
      }
      next_part *= scale;
      mask_part = batch_loss - next_part;
      if (edit_batch) {
        ++m.edit_batches;
        m.edit_loss += batch_loss;
      } else {
        ++m.mask_batches;
        m.mask_loss += mask_part;
        m.next_loss += next_part;
      }
      m.total_loss += batch_loss;
      ++batches;
    }
    if (m.edit_batches) m.edit_loss /= static_cast<double>(m.edit_batches);
    if (m.mask_batches) {
      m.mask_loss /= static_cast<double>(m.mask_batches);
      m.next_loss /= static_cast<double>(m.mask_batches);
    }
    m.total_loss /= static_cast<double>(batches);
    if (hooks.heldout) m.heldout_loss = heldout_mask_loss(model, *hooks.heldout, kHeldoutSeed);
    if (hooks.dev_validity) m.dev_validity = hooks.dev_validity(model);
    if (hooks.on_epoch) hooks.on_epoch(m);
    history.push_back(m);
  }
  return history;
}

void append_metrics_csv(const std::filesystem::path& path,
                        const std::vector<EpochMetrics>& metrics) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw DomainError("cannot write metrics to " + path.string());
  out.precision(10);
  if (fresh) {
    out << "epoch,stage,mask_loss,next_loss,edit_loss,total_loss,curriculum_cap,"
           "mask_batches,edit_batches,heldout_loss,dev_validity\n";
  }
  for (const auto& m : metrics) {
    out << m.epoch << ',' << to_string(m.stage) << ',' << m.mask_loss << ',' << m.next_loss
        << ',' << m.edit_loss << ',' << m.total_loss << ',' << m.curriculum_cap << ','
        << m.mask_batches << ',' << m.edit_batches << ',' << format_optional(m.heldout_loss)
        << ',' << format_optional(m.dev_validity) << '\n';
  }
}

}  // namespace editdiff
