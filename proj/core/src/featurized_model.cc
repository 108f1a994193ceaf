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

#include "editdiff/featurized_model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "editdiff/errors.h"
#include "editdiff/rng.h"
#include "json.hpp"

namespace editdiff {
namespace {

constexpr const char* kCheckpointFormat = "editdiff.featurized";

std::size_t head_index(Head h) { return static_cast<std::size_t>(h); }

}  // namespace

FeaturizedModel::FeaturizedModel(Vocab vocab, FeaturizedConfig config)
    : vocab_(std::move(vocab)), config_(config) {
  if (config_.embed_dim == 0 || config_.hidden_dim == 0 || config_.max_positions == 0) {
    throw ConfigError("featurized model: dimensions must be positive");
  }
  const std::size_t v = vocab_.size();
  const std::size_t d = config_.embed_dim;
  const std::size_t hd = config_.hidden_dim;
  layout_.features = (2 * config_.window_radius + 1) * d + d;
  std::size_t off = 0;
  layout_.tok = off;
  off += v * d;
  layout_.pos = off;
  off += config_.max_positions * d;
  layout_.w1 = off;
  off += hd * layout_.features;
  layout_.b1 = off;
  off += hd;
  for (std::size_t k = 0; k < 3; ++k) {
    layout_.head_w[k] = off;
    off += v * hd;
    layout_.head_b[k] = off;
    off += v;
  }
  layout_.total = off;

  for (auto& a : allowed_) a.assign(v, 1);
  for (auto& a : allowed_) {
    a[vocab_.mask()] = 0;
    a[vocab_.pad()] = 0;
  }
  allowed_[head_index(Head::kUnmask)][vocab_.del()] = 0;
  allowed_[head_index(Head::kNext)][vocab_.del()] = 0;

  params_.assign(layout_.total, 0.0);
  Philox rng(config_.seed);
  auto fill = [&](std::size_t begin, std::size_t count, double scale) {
    for (std::size_t i = 0; i < count; ++i) {
      params_[begin + i] = (2.0 * rng.uniform() - 1.0) * scale;
    }
  };
  fill(layout_.tok, v * d, config_.init_scale);
  fill(layout_.pos, config_.max_positions * d, config_.init_scale);
  fill(layout_.w1, hd * layout_.features,
       1.0 / std::sqrt(static_cast<double>(layout_.features)));
  for (std::size_t k = 0; k < 3; ++k) {
    fill(layout_.head_w[k], v * hd, 1.0 / std::sqrt(static_cast<double>(hd)));
  }
}

TokenId FeaturizedModel::window_token(const Sequence& x, std::size_t position,
                                      std::ptrdiff_t offset) const {
  const auto len = static_cast<std::ptrdiff_t>(x.size());
  std::ptrdiff_t j = static_cast<std::ptrdiff_t>(position) + offset;
  // Without a prompt the window wraps, like the pair rule does.
  if (x.prompt_len == 0 && len > 0) j = ((j % len) + len) % len;
  return (j < 0 || j >= len) ? vocab_.pad() : x.tokens[static_cast<std::size_t>(j)];
}

void FeaturizedModel::features(const Sequence& x, std::size_t position,
                               std::span<double> out) const {
  const std::size_t d = config_.embed_dim;
  const auto r = static_cast<std::ptrdiff_t>(config_.window_radius);
  std::size_t slot = 0;
  for (std::ptrdiff_t o = -r; o <= r; ++o, ++slot) {
    const TokenId tok = window_token(x, position, o);
    if (!vocab_.contains(tok)) throw DomainError("featurized model: token out of range");
    const double* e = &params_[layout_.tok + static_cast<std::size_t>(tok) * d];
    std::copy(e, e + d, out.begin() + static_cast<std::ptrdiff_t>(slot * d));
  }
  const std::size_t p = std::min(position, config_.max_positions - 1);
  const double* pe = &params_[layout_.pos + p * d];
  std::copy(pe, pe + d, out.begin() + static_cast<std::ptrdiff_t>(slot * d));
}

void FeaturizedModel::hidden(std::span<const double> feats, std::span<double> out) const {
  const std::size_t f = layout_.features;
  for (std::size_t h = 0; h < config_.hidden_dim; ++h) {
    const double* w = &params_[layout_.w1 + h * f];
    double z = params_[layout_.b1 + h];
    for (std::size_t k = 0; k < f; ++k) z += w[k] * feats[k];
    out[h] = std::tanh(z);
  }
}

void FeaturizedModel::head_softmax(Head head, std::span<const double> h,
                                   std::span<double> out) const {
  const std::size_t k = head_index(head);
  const std::size_t hd = config_.hidden_dim;
  const auto& allowed = allowed_[k];
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < vocab_.size(); ++v) {
    if (!allowed[v]) {
      out[v] = 0.0;
      continue;
    }
    const double* w = &params_[layout_.head_w[k] + v * hd];
    double z = params_[layout_.head_b[k] + v];
    for (std::size_t j = 0; j < hd; ++j) z += w[j] * h[j];
    out[v] = z;
    mx = std::max(mx, z);
  }
  double sum = 0.0;
  for (std::size_t v = 0; v < vocab_.size(); ++v) {
    if (!allowed[v]) continue;
    out[v] = std::exp(out[v] - mx);
    sum += out[v];
  }
  for (std::size_t v = 0; v < vocab_.size(); ++v) out[v] /= sum;
}

std::vector<double> FeaturizedModel::head_probs(const Sequence& x, std::size_t position,
                                                Head head) const {
  std::vector<double> feats(layout_.features), h(config_.hidden_dim), out(vocab_.size());
  features(x, position, feats);
  hidden(feats, h);
  head_softmax(head, h, out);
  return out;
}

UnmaskPrediction FeaturizedModel::predict_unmask(const Sequence& xt) const {
  // The encoder runs over the whole sequence, as it does for the edit heads;
  // the unmask head is read out at masked slots only.
  const std::size_t hd = config_.hidden_dim;
  std::vector<double> feats(layout_.features), hs(xt.size() * hd);
  for (std::size_t i = 0; i < xt.size(); ++i) {
    features(xt, i, feats);
    hidden(feats, std::span<double>(hs).subspan(i * hd, hd));
  }
  UnmaskPrediction out;
  for (std::size_t i = 0; i < xt.size(); ++i) {
    if (xt.tokens[i] == vocab_.mask()) out.positions.push_back(i);
  }
  out.probs = RowMatrix(out.positions.size(), vocab_.size());
  for (std::size_t r = 0; r < out.positions.size(); ++r) {
    head_softmax(Head::kUnmask,
                 std::span<const double>(hs).subspan(out.positions[r] * hd, hd),
                 out.probs.row(r));
  }
  return out;
}

EditDistributions FeaturizedModel::predict_edits(const Sequence& x) const {
  const std::size_t hd = config_.hidden_dim;
  std::vector<double> feats(layout_.features), h(hd);
  EditDistributions out{RowMatrix(x.size(), vocab_.size()), RowMatrix(x.size(), vocab_.size())};
  for (std::size_t i = 0; i < x.size(); ++i) {
    features(x, i, feats);
    hidden(feats, h);
    head_softmax(Head::kReplace, h, out.c.row(i));
    head_softmax(Head::kNext, h, out.n.row(i));
  }
  return out;
}

double FeaturizedModel::loss_and_gradient(const TrainingExample& example,
                                          std::span<double> grad) const {
  const bool want_grad = !grad.empty();
  if (want_grad && grad.size() != params_.size()) {
    throw ShapeError("gradient buffer does not match parameter count");
  }
  const Sequence& x = example.input;
  const std::size_t v = vocab_.size();
  const std::size_t d = config_.embed_dim;
  const std::size_t hd = config_.hidden_dim;
  const std::size_t f = layout_.features;

  std::vector<double> feats(f), h(hd), probs(v), dh(hd), dz(hd), df(f);
  double total = 0.0;
  for (const HeadTarget& t : example.targets) {
    if (t.position >= x.size()) throw ShapeError("training target outside the sequence");
    const std::size_t k = head_index(t.head);
    if (!vocab_.contains(t.target) || !allowed_[k][t.target]) {
      throw DomainError("training target not in the head's support");
    }
    features(x, t.position, feats);
    hidden(feats, h);
    head_softmax(t.head, h, probs);
    // log p via the softmax itself; allowed tokens never underflow to zero
    // for the magnitudes reached here, but clamp anyway.
    const double p = std::max(probs[t.target], std::numeric_limits<double>::min());
    total += -t.weight * std::log(p);
    if (!want_grad || t.weight == 0.0) continue;

    std::fill(dh.begin(), dh.end(), 0.0);
    for (std::size_t tok = 0; tok < v; ++tok) {
      if (!allowed_[k][tok]) continue;
      const double dlogit =
          t.weight * (probs[tok] - (static_cast<TokenId>(tok) == t.target ? 1.0 : 0.0));
      const std::size_t wrow = layout_.head_w[k] + tok * hd;
      grad[layout_.head_b[k] + tok] += dlogit;
      for (std::size_t j = 0; j < hd; ++j) {
        grad[wrow + j] += dlogit * h[j];
        dh[j] += dlogit * params_[wrow + j];
      }
    }
    for (std::size_t j = 0; j < hd; ++j) dz[j] = dh[j] * (1.0 - h[j] * h[j]);
    std::fill(df.begin(), df.end(), 0.0);
    for (std::size_t j = 0; j < hd; ++j) {
      if (dz[j] == 0.0) continue;
      const std::size_t wrow = layout_.w1 + j * f;
      grad[layout_.b1 + j] += dz[j];
      for (std::size_t q = 0; q < f; ++q) {
        grad[wrow + q] += dz[j] * feats[q];
        df[q] += dz[j] * params_[wrow + q];
      }
    }
    // Scatter feature gradients back to the embeddings they were read from.
    const auto r = static_cast<std::ptrdiff_t>(config_.window_radius);
    std::size_t slot = 0;
    for (std::ptrdiff_t o = -r; o <= r; ++o, ++slot) {
      const TokenId tok = window_token(x, t.position, o);
      double* g = &grad[layout_.tok + static_cast<std::size_t>(tok) * d];
      for (std::size_t q = 0; q < d; ++q) g[q] += df[slot * d + q];
    }
    const std::size_t pidx = std::min(t.position, config_.max_positions - 1);
    double* gp = &grad[layout_.pos + pidx * d];
    for (std::size_t q = 0; q < d; ++q) gp[q] += df[slot * d + q];
  }
  return total;
}

void FeaturizedModel::save(const std::filesystem::path& path) const {
  nlohmann::json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kCheckpointVersion;
  j["config"] = {{"embed_dim", config_.embed_dim},
                 {"hidden_dim", config_.hidden_dim},
                 {"window_radius", config_.window_radius},
                 {"max_positions", config_.max_positions},
                 {"init_scale", config_.init_scale},
                 {"seed", config_.seed}};
  j["vocab"] = vocab_.symbols();
  j["updates"] = updates_;
  j["params"] = params_;
  std::ofstream out(path);
  if (!out) throw CheckpointError("cannot write checkpoint " + path.string());
  out << j.dump() << '\n';
}

FeaturizedModel FeaturizedModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("checkpoint " + path.string() + " is not valid JSON: " + e.what());
  }
  if (j.value("format", std::string{}) != kCheckpointFormat) {
    throw CheckpointError("checkpoint " + path.string() + " has an unknown format tag");
  }
  if (j.value("version", -1) != kCheckpointVersion) {
    throw CheckpointError("checkpoint version " + j.value("version", nlohmann::json()).dump() +
                          " does not match supported version " +
                          std::to_string(kCheckpointVersion));
  }
  try {
    FeaturizedConfig cfg;
    const auto& c = j.at("config");
    cfg.embed_dim = c.at("embed_dim").get<std::size_t>();
    cfg.hidden_dim = c.at("hidden_dim").get<std::size_t>();
    cfg.window_radius = c.at("window_radius").get<std::size_t>();
    cfg.max_positions = c.at("max_positions").get<std::size_t>();
    cfg.init_scale = c.at("init_scale").get<double>();
    cfg.seed = c.at("seed").get<std::uint64_t>();
    FeaturizedModel model(Vocab(j.at("vocab").get<std::vector<std::string>>()), cfg);
    auto params = j.at("params").get<std::vector<double>>();
    if (params.size() != model.params_.size()) {
      throw CheckpointError("checkpoint parameter count does not match its config");
    }
    model.params_ = std::move(params);
    model.updates_ = j.at("updates").get<std::size_t>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("malformed checkpoint " + path.string() + ": " + e.what());
  }
}

}  // namespace editdiff
