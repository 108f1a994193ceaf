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

#include "editdiff/corpus_io.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "editdiff/errors.h"

namespace editdiff {

std::vector<RawExample> parse_corpus(std::istream& in) {
  std::vector<RawExample> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tab = line.find('\t');
    RawExample ex;
    if (tab == std::string::npos) {
      ex.target = split_whitespace(line);
    } else {
      ex.prompt = split_whitespace(std::string_view(line).substr(0, tab));
      ex.target = split_whitespace(std::string_view(line).substr(tab + 1));
    }
    if (ex.prompt.empty() && ex.target.empty()) continue;
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<RawExample> read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("corpus: cannot open " + path.string());
  return parse_corpus(in);
}

Vocab vocab_from_corpus(const std::vector<RawExample>& raw) {
  std::vector<std::string> symbols;
  std::unordered_set<std::string> seen;
  auto add = [&](const std::vector<std::string>& toks) {
    for (const auto& t : toks) {
      if (seen.insert(t).second) symbols.push_back(t);
    }
  };
  for (const auto& ex : raw) {
    add(ex.prompt);
    add(ex.target);
  }
  return Vocab(std::move(symbols));
}

std::vector<Sequence> encode_corpus(const std::vector<RawExample>& raw,
                                    const Vocab& vocab) {
  std::vector<Sequence> out;
  out.reserve(raw.size());
  for (const auto& ex : raw) {
    std::vector<TokenId> prompt, target;
    for (const auto& t : ex.prompt) prompt.push_back(vocab.id(t));
    for (const auto& t : ex.target) target.push_back(vocab.id(t));
    Sequence x = make_sequence(prompt, target, vocab);
    validate(x, vocab, Completeness::kTarget);
    out.push_back(std::move(x));
  }
  return out;
}

void write_corpus(std::ostream& out, const std::vector<Sequence>& corpus,
                  const Vocab& vocab) {
  for (const auto& x : corpus) {
    auto gen = x.generated();
    if (!gen.empty() && gen.back() == vocab.eos()) gen = gen.first(gen.size() - 1);
    if (x.prompt_len > 0) out << vocab.decode(x.prompt()) << '\t';
    out << vocab.decode(gen) << '\n';
  }
}

}  // namespace editdiff
