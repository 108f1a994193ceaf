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

#include "oracles.h"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>


namespace editdiff::testing {

std::size_t recursive_distance(std::span<const TokenId> a, std::span<const TokenId> b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> d = [&](std::size_t i, std::size_t j) {
    if (i == 0) return j;
    if (j == 0) return i;
    auto it = memo.find({i, j});
    if (it != memo.end()) return it->second;
    std::size_t best = std::min(d(i - 1, j) + 1, d(i, j - 1) + 1);
    best = std::min(best, d(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1));
    memo[{i, j}] = best;
    return best;
  };
  return d(a.size(), b.size());
}

EditGraph::EditGraph(std::size_t symbols, std::size_t max_len) : symbols_(symbols) {
  offset_.push_back(0);
  std::vector<std::vector<TokenId>> layer{{}};
  for (std::size_t len = 0; len <= max_len; ++len) {
    for (auto& s : layer) strings_.push_back(s);
    offset_.push_back(strings_.size());
    std::vector<std::vector<TokenId>> next;
    for (const auto& s : layer) {
      for (std::size_t v = 0; v < symbols; ++v) {
        auto t = s;
        t.push_back(static_cast<TokenId>(v));
        next.push_back(std::move(t));
      }
    }
    layer = std::move(next);
  }
  adj_begin_.push_back(0);
  for (const auto& s : strings_) {
    std::set<std::size_t> nb;
    for (std::size_t i = 0; i < s.size(); ++i) {
      auto t = s;
      t.erase(t.begin() + static_cast<std::ptrdiff_t>(i));
      nb.insert(id(t));
      for (std::size_t v = 0; v < symbols; ++v) {
        if (static_cast<TokenId>(v) == s[i]) continue;
        auto r = s;
        r[i] = static_cast<TokenId>(v);
        nb.insert(id(r));
      }
    }
    if (s.size() < max_len) {
      for (std::size_t i = 0; i <= s.size(); ++i) {
        for (std::size_t v = 0; v < symbols; ++v) {
          auto t = s;
          t.insert(t.begin() + static_cast<std::ptrdiff_t>(i), static_cast<TokenId>(v));
          nb.insert(id(t));
        }
      }
    }
    for (auto n : nb) adj_.push_back(static_cast<std::uint32_t>(n));
    adj_begin_.push_back(static_cast<std::uint32_t>(adj_.size()));
  }
}

std::size_t EditGraph::id(std::span<const TokenId> s) const {
  std::size_t code = 0;
  for (TokenId t : s) code = code * symbols_ + static_cast<std::size_t>(t);
  return offset_[s.size()] + code;
}

void EditGraph::bfs(std::size_t source, std::vector<std::uint8_t>& dist) const {
  dist.assign(size(), 0xFF);
  std::vector<std::uint32_t> queue;
  queue.reserve(size());
  queue.push_back(static_cast<std::uint32_t>(source));
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t u = queue[head];
    for (std::uint32_t k = adj_begin_[u]; k < adj_begin_[u + 1]; ++k) {
      const std::uint32_t v = adj_[k];
      if (dist[v] == 0xFF) {
        dist[v] = static_cast<std::uint8_t>(dist[u] + 1);
        queue.push_back(v);
      }
    }
  }
}

std::set<EditScript> oracle_min_scripts(std::span<const TokenId> a, std::span<const TokenId> b) {
  if (a.size() > 8 || b.size() > 8) throw std::invalid_argument("oracle_min_scripts: too long");
  const std::size_t best = recursive_distance(a, b);
  std::set<EditScript> out;
  std::vector<EditOp> ops;
  // i tokens of a consumed, j of b produced. Insertions after a-token i carry
  // pos i; within a gap they appear in target order.
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t i, std::size_t j) {
    if (ops.size() > best) return;
    if (i == a.size() && j == b.size()) {
      if (ops.size() == best) {
        EditScript s{ops};
        std::stable_sort(s.ops.begin(), s.ops.end(), [](const EditOp& x, const EditOp& y) {
          auto key = [](const EditOp& o) {
            return o.kind == EditOp::Kind::kInsert ? 2 * o.pos + 1 : 2 * o.pos;
          };
          return key(x) < key(y);
        });
        out.insert(s);
      }
      return;
    }
    if (i < a.size() && j < b.size()) {
      if (a[i] == b[j]) {
        walk(i + 1, j + 1);
      } else {
        ops.push_back(EditOp::replace(i + 1, b[j]));
        walk(i + 1, j + 1);
        ops.pop_back();
      }
    }
    if (i < a.size()) {
      ops.push_back(EditOp::remove(i + 1));
      walk(i + 1, j);
      ops.pop_back();
    }
    if (j < b.size()) {
      ops.push_back(EditOp::insert(i, b[j]));
      walk(i, j + 1);
      ops.pop_back();
    }
  };
  walk(0, 0);
  return out;
}

std::vector<TokenId> naive_apply(const Sequence& x, const EditPrediction& e, const Vocab& vocab) {
  std::vector<TokenId> out(x.tokens.begin(), x.tokens.begin() + x.prompt_len);
  const std::size_t len = x.size();
  for (std::size_t j = x.prompt_len; j < len; ++j) {
    const TokenId c = e.c[j];
    if (c == vocab.del()) continue;
    const TokenId m = j == 0 ? e.n[len - 1] : e.n[j - 1];
    if (m != c) out.push_back(m);
    out.push_back(c);
  }
  return out;
}

std::vector<double> finite_difference(std::span<double> params,
                                      const std::vector<std::size_t>& coords, double h,
                                      const std::function<double()>& f) {
  std::vector<double> out;
  for (std::size_t c : coords) {
    const double saved = params[c];
    params[c] = saved + h;
    const double up = f();
    params[c] = saved - h;
    const double down = f();
    params[c] = saved;
    out.push_back((up - down) / (2 * h));
  }
  return out;
}

Sequence ThreeSentence::seq(const std::string& text) const {
  return make_sequence({}, vocab.encode(text), vocab);
}

TaskSpec three_sentence_spec() {
  TaskSpec spec;
  spec.operand_min = 2;
  spec.operand_max = 3;
  spec.sum_max = 5;
  return spec;
}

ThreeSentence three_sentence() {
  // The vocabulary comes from the task generator so that its validity oracle
  // applies; the sentences themselves are spelled out here.
  ThreeSentence f{make_task(three_sentence_spec()).vocab, {}};
  for (const char* text : {"2 + 2 = 4", "2 + 3 = 5", "3 + 2 = 5"}) f.corpus.push_back(f.seq(text));
  return f;
}

}  // namespace editdiff::testing
