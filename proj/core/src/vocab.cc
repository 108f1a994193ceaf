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

#include "editdiff/vocab.h"

#include <fstream>
#include <sstream>

#include "editdiff/errors.h"

namespace editdiff {

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  auto is_space = [](char ch) {
    return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\f' ||
           ch == '\v';
  };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

Vocab::Vocab(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  for (std::string_view sentinel :
       {kMaskSymbol, kDelSymbol, kEosSymbol, kPadSymbol}) {
    bool present = false;
    for (const auto& s : symbols_) present = present || s == sentinel;
    if (!present) symbols_.emplace_back(sentinel);
  }
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i].empty()) {
      throw DomainError("vocab: empty symbol at index " + std::to_string(i));
    }
    auto [it, inserted] =
        index_.emplace(symbols_[i], static_cast<TokenId>(i));
    if (!inserted) throw DomainError("vocab: duplicate symbol '" + symbols_[i] + "'");
  }
  mask_ = index_.at(std::string(kMaskSymbol));
  del_ = index_.at(std::string(kDelSymbol));
  eos_ = index_.at(std::string(kEosSymbol));
  pad_ = index_.at(std::string(kPadSymbol));
}

Vocab Vocab::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("vocab: cannot open " + path.string());
  std::vector<std::string> symbols;
  std::string line;
  while (std::getline(in, line)) {
    auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    if (fields.size() != 1) {
      throw DomainError("vocab: symbols may not contain whitespace: '" + line + "'");
    }
    symbols.push_back(std::move(fields[0]));
  }
  return Vocab(std::move(symbols));
}

void Vocab::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DomainError("vocab: cannot write " + path.string());
  for (const auto& s : symbols_) out << s << '\n';
}

const std::string& Vocab::symbol(TokenId id) const {
  if (!contains(id)) throw DomainError("vocab: token id out of range: " + std::to_string(id));
  return symbols_[static_cast<std::size_t>(id)];
}

std::optional<TokenId> Vocab::find(std::string_view symbol) const {
  auto it = index_.find(std::string(symbol));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocab::id(std::string_view symbol) const {
  auto found = find(symbol);
  if (!found) throw DomainError("vocab: unknown symbol '" + std::string(symbol) + "'");
  return *found;
}

std::vector<TokenId> Vocab::content_ids() const {
  std::vector<TokenId> out;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!is_reserved(static_cast<TokenId>(i))) out.push_back(static_cast<TokenId>(i));
  }
  return out;
}

std::vector<TokenId> Vocab::encode(std::string_view text) const {
  std::vector<TokenId> out;
  for (const auto& tok : split_whitespace(text)) out.push_back(id(tok));
  return out;
}

std::string Vocab::decode(std::span<const TokenId> ids) const {
  std::ostringstream os;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) os << ' ';
    os << symbol(ids[i]);
  }
  return os.str();
}

}  // namespace editdiff
