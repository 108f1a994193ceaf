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

#ifndef EDITDIFF_VOCAB_H_
#define EDITDIFF_VOCAB_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace editdiff {

using TokenId = std::int32_t;

// Closed symbolic vocabulary. Ids are dense in [0, size()). The four reserved
// sentinels are always present exactly once; any the caller did not list are
// appended after the ordinary symbols, in the order MASK, DEL, EOS, PAD.
class Vocab {
 public:
  static constexpr std::string_view kMaskSymbol = "[MASK]";
  static constexpr std::string_view kDelSymbol = "[DEL]";
  static constexpr std::string_view kEosSymbol = "<eos>";
  static constexpr std::string_view kPadSymbol = "<pad>";

  Vocab() : Vocab(std::vector<std::string>{}) {}
  explicit Vocab(std::vector<std::string> symbols);

  // One symbol per line; blank lines are skipped.
  static Vocab load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::size_t size() const { return symbols_.size(); }
  const std::string& symbol(TokenId id) const;
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::optional<TokenId> find(std::string_view symbol) const;
  // Throws DomainError for unknown symbols.
  TokenId id(std::string_view symbol) const;
  bool contains(TokenId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < symbols_.size();
  }

  TokenId mask() const { return mask_; }
  TokenId del() const { return del_; }
  TokenId eos() const { return eos_; }
  TokenId pad() const { return pad_; }
  bool is_reserved(TokenId id) const {
    return id == mask_ || id == del_ || id == eos_ || id == pad_;
  }
  // Ordinary (non-sentinel) symbols in id order.
  std::vector<TokenId> content_ids() const;

  // Whitespace-separated encoding. Unknown symbols throw DomainError.
  std::vector<TokenId> encode(std::string_view text) const;
  std::string decode(std::span<const TokenId> ids) const;

  friend bool operator==(const Vocab& a, const Vocab& b) {
    return a.symbols_ == b.symbols_;
  }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, TokenId> index_;
  TokenId mask_ = -1;
  TokenId del_ = -1;
  TokenId eos_ = -1;
  TokenId pad_ = -1;
};

std::vector<std::string> split_whitespace(std::string_view text);

}  // namespace editdiff

#endif  // EDITDIFF_VOCAB_H_
