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

#include "editdiff/tabular_model.h"

#include <algorithm>
#include <limits>

#include "editdiff/edit_supervision.h"
#include "editdiff/errors.h"

namespace editdiff {
namespace {

std::vector<TokenId> unmask_support(const Vocab& v) {
  std::vector<TokenId> ids = v.content_ids();
  ids.push_back(v.eos());
  return ids;
}

std::size_t common_prefix(std::span<const TokenId> a, std::span<const TokenId> b) {
  std::size_t k = 0;
  while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
  return k;
}

}  // namespace

TabularModel TabularModel::fit(Vocab vocab, std::vector<Sequence> corpus) {
  if (corpus.empty()) throw DomainError("fit_tabular: empty corpus");
  for (const auto& x : corpus) {
    validate(x, vocab, Completeness::kTarget);
    if (x.size() != corpus.front().size() ||
        x.prompt_len != corpus.front().prompt_len) {
      throw DomainError("fit_tabular: corpus mixes sequence layouts");
    }
  }
  return TabularModel(std::move(vocab), std::move(corpus));
}

UnmaskPrediction TabularModel::predict_unmask(const Sequence& xt) const {
  UnmaskPrediction out;
  for (std::size_t i = 0; i < xt.size(); ++i) {
    if (xt.tokens[i] == vocab_.mask()) out.positions.push_back(i);
  }
  out.probs = RowMatrix(out.positions.size(), vocab_.size());
  if (out.positions.empty()) return out;

  auto consistent = [&](const Sequence& y) {
    if (y.size() != xt.size() || y.prompt_len != xt.prompt_len) return false;
    for (std::size_t i = 0; i < xt.size(); ++i) {
      if (xt.tokens[i] != vocab_.mask() && xt.tokens[i] != y.tokens[i]) return false;
    }
    return true;
  };
  std::vector<const Sequence*> support;
  for (const auto& y : corpus_) {
    if (consistent(y)) support.push_back(&y);
  }
  if (support.empty()) {
    for (const auto& y : corpus_) {
      if (y.size() == xt.size()) support.push_back(&y);
    }
  }

  for (std::size_t r = 0; r < out.positions.size(); ++r) {
    auto row = out.probs.row(r);
    if (support.empty()) {
      const auto ids = unmask_support(vocab_);
      for (TokenId t : ids) row[t] = 1.0 / static_cast<double>(ids.size());
      continue;
    }
    const double w = 1.0 / static_cast<double>(support.size());
    for (const Sequence* y : support) row[y->tokens[out.positions[r]]] += w;
  }
  return out;
}

EditDistributions TabularModel::predict_edits(const Sequence& x) const {
  const std::size_t len = x.size();
  EditDistributions out{RowMatrix(len, vocab_.size()), RowMatrix(len, vocab_.size())};

  std::vector<const Sequence*> nearest;
  std::size_t best_dist = std::numeric_limits<std::size_t>::max();
  std::size_t best_prefix = 0;
  for (const auto& y : corpus_) {
    if (y.prompt_len != x.prompt_len ||
        !std::equal(y.prompt().begin(), y.prompt().end(), x.prompt().begin())) {
      continue;
    }
    const std::size_t d = levenshtein_distance(x.generated(), y.generated());
    const std::size_t pre = common_prefix(x.generated(), y.generated());
    if (d < best_dist || (d == best_dist && pre > best_prefix)) {
      nearest.clear();
      best_dist = d;
      best_prefix = pre;
    }
    if (d == best_dist && pre == best_prefix) nearest.push_back(&y);
  }

  if (nearest.empty()) {
    // Unknown prompt: predict the empty edit.
    const EditPrediction id = identity_edit(x);
    for (std::size_t i = 0; i < len; ++i) {
      out.c.at(i, static_cast<std::size_t>(
                      id.c[i] == vocab_.mask() ? vocab_.eos() : id.c[i])) = 1.0;
      out.n.at(i, static_cast<std::size_t>(
                      id.n[i] == vocab_.mask() ? vocab_.eos() : id.n[i])) = 1.0;
    }
    return out;
  }

  const double w = 1.0 / static_cast<double>(nearest.size());
  for (const Sequence* y : nearest) {
    const EditTargets t = build_targets(x, *y, vocab_);
    for (std::size_t i = 0; i < len; ++i) {
      out.c.at(i, static_cast<std::size_t>(t.c_star[i])) += w;
      out.n.at(i, static_cast<std::size_t>(t.n_star[i])) += w;
    }
  }
  return out;
}

}  // namespace editdiff
