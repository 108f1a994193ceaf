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

#include "editdiff/edit_engine.h"

#include <algorithm>
#include <numeric>

#include "editdiff/errors.h"

namespace editdiff {
namespace {

bool valid_c(TokenId t, const Vocab& v) {
  return v.contains(t) && t != v.mask() && t != v.pad();
}

bool valid_n(TokenId t, const Vocab& v) {
  return valid_c(t, v) && t != v.del();
}

void check_prediction(const Sequence& x, const EditPrediction& e, const Vocab& v) {
  if (e.c.size() != x.size() || e.n.size() != x.size()) {
    throw ShapeError("edit prediction sized " + std::to_string(e.c.size()) + "/" +
                     std::to_string(e.n.size()) + " for a sequence of length " +
                     std::to_string(x.size()));
  }
  for (std::size_t i = 0; i < x.prompt_len; ++i) {
    if (e.c[i] == v.del()) {
      throw DomainError("edit prediction deletes prompt position " + std::to_string(i));
    }
    if (e.c[i] != x.tokens[i]) {
      throw DomainError("edit prediction rewrites prompt position " + std::to_string(i));
    }
  }
  for (std::size_t j = x.prompt_len; j < x.size(); ++j) {
    if (!valid_c(e.c[j], v)) {
      throw DomainError("invalid replacement token at " + std::to_string(j));
    }
    if (!valid_n(e.n[inherited_slot(j, x)], v)) {
      throw DomainError("invalid insertion candidate feeding " + std::to_string(j));
    }
  }
}

void enforce_length(EditOutcome& out, const Vocab& v, const EditLimits& limits) {
  Sequence& r = out.result;
  if (r.gen_len() <= limits.max_gen_len) return;
  r.tokens.resize(r.prompt_len + limits.max_gen_len);
  if (limits.max_gen_len > 0) r.tokens.back() = v.eos();
  out.truncated = true;
}

}  // namespace

std::size_t inherited_slot(std::size_t j, const Sequence& x) {
  return j == 0 ? x.size() - 1 : j - 1;
}

EditOutcome apply_edits(const Sequence& x, const EditPrediction& e,
                        const Vocab& vocab, const EditLimits& limits) {
  check_prediction(x, e, vocab);
  EditOutcome out;
  out.result.prompt_len = x.prompt_len;
  out.result.tokens.assign(x.tokens.begin(), x.tokens.begin() + x.prompt_len);
  for (std::size_t j = x.prompt_len; j < x.size(); ++j) {
    const TokenId kept = e.c[j];
    if (kept == vocab.del()) {
      ++out.deletions;
      continue;
    }
    const TokenId candidate = e.n[inherited_slot(j, x)];
    if (candidate != kept) {
      out.result.tokens.push_back(candidate);
      ++out.insertions;
    }
    out.result.tokens.push_back(kept);
    if (kept != x.tokens[j]) ++out.replacements;
  }
  out.was_empty = out.result.tokens == x.tokens;
  enforce_length(out, vocab, limits);
  return out;
}

EditOutcome apply_edits_parallel(const Sequence& x, const EditPrediction& e,
                                 const Vocab& vocab, const EditLimits& limits) {
  check_prediction(x, e, vocab);
  const std::size_t len = x.size();
  const std::size_t p = x.prompt_len;

  // curr = c; next = roll(n, 1); prompt slots take the input token.
  std::vector<TokenId> curr(e.c);
  std::vector<TokenId> next(len);
  if (len > 0) {
    std::rotate_copy(e.n.begin(), e.n.end() - 1, e.n.end(), next.begin());
  }
  std::copy(x.tokens.begin(), x.tokens.begin() + p, curr.begin());
  std::copy(x.tokens.begin(), x.tokens.begin() + p, next.begin());

  // Per-slot emission width: 0 (deleted), 1 (kept) or 2 (insert + kept).
  const TokenId del = vocab.del();
  std::vector<std::size_t> width(len);
  std::transform(curr.begin(), curr.end(), next.begin(), width.begin(),
                 [del](TokenId c, TokenId m) -> std::size_t {
                   return c == del ? 0 : (c != m ? 2 : 1);
                 });
  std::vector<std::size_t> offset(len);
  std::exclusive_scan(width.begin(), width.end(), offset.begin(), std::size_t{0});
  const std::size_t total = len == 0 ? 0 : offset.back() + width.back();

  EditOutcome out;
  out.result.prompt_len = p;
  out.result.tokens.resize(total);
  TokenId* dst = out.result.tokens.data();
  for (std::size_t j = 0; j < len; ++j) {  // independent scatter
    if (width[j] == 2) dst[offset[j]] = next[j];
    if (width[j] != 0) dst[offset[j] + width[j] - 1] = curr[j];
  }

  out.deletions = static_cast<std::size_t>(std::count(width.begin(), width.end(), 0));
  out.insertions = static_cast<std::size_t>(std::count(width.begin(), width.end(), 2));
  out.replacements = std::transform_reduce(
      curr.begin() + p, curr.end(), x.tokens.begin() + p, std::size_t{0},
      std::plus<>(), [del](TokenId c, TokenId t) -> std::size_t {
        return c != del && c != t ? 1 : 0;
      });
  out.was_empty = out.result.tokens == x.tokens;
  enforce_length(out, vocab, limits);
  return out;
}

bool is_empty_edit(const Sequence& x, const EditPrediction& e, const Vocab& vocab) {
  check_prediction(x, e, vocab);
  for (std::size_t j = x.prompt_len; j < x.size(); ++j) {
    if (e.c[j] != x.tokens[j]) return false;
    if (e.n[inherited_slot(j, x)] != e.c[j]) return false;
  }
  return true;
}

EditPrediction identity_edit(const Sequence& x) {
  EditPrediction e{x.tokens, std::vector<TokenId>(x.size())};
  for (std::size_t i = 0; i < x.size(); ++i) {
    e.n[i] = x.tokens[(i + 1) % x.size()];
  }
  return e;
}

EditPrediction greedy_prediction(const EditDistributions& dist, const Sequence& x) {
  if (dist.c.rows() != x.size() || dist.n.rows() != x.size()) {
    throw ShapeError("edit heads returned " + std::to_string(dist.c.rows()) + "/" +
                     std::to_string(dist.n.rows()) + " rows for length " +
                     std::to_string(x.size()));
  }
  EditPrediction e{std::vector<TokenId>(x.size()), std::vector<TokenId>(x.size())};
  for (std::size_t i = 0; i < x.size(); ++i) {
    e.c[i] = i < x.prompt_len ? x.tokens[i] : argmax(dist.c.row(i));
    e.n[i] = argmax(dist.n.row(i));
  }
  return e;
}

GreedyStep greedy_edit_step(const DenoiserModel& model, const Sequence& x,
                            const EditLimits& limits) {
  const EditDistributions dist = model.predict_edits(x);
  if (dist.c.cols() != model.vocab().size() || dist.n.cols() != model.vocab().size()) {
    throw ShapeError("edit heads do not span the vocab");
  }
  const EditPrediction e = greedy_prediction(dist, x);
  GreedyStep step;
  step.outcome = apply_edits_parallel(x, e, model.vocab(), limits);
  step.terminated = step.outcome.was_empty;
  return step;
}

}  // namespace editdiff
