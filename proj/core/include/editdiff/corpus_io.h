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

#ifndef EDITDIFF_CORPUS_IO_H_
#define EDITDIFF_CORPUS_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "editdiff/sequence.h"

namespace editdiff {

// One line of a corpus file: "prompt tokens<TAB>target tokens", or just the
// target when no TAB is present. EOS is implicit and never written.
struct RawExample {
  std::vector<std::string> prompt;
  std::vector<std::string> target;
};

std::vector<RawExample> parse_corpus(std::istream& in);
std::vector<RawExample> read_corpus(const std::filesystem::path& path);

// Ordinary symbols in first-seen order.
Vocab vocab_from_corpus(const std::vector<RawExample>& raw);
std::vector<Sequence> encode_corpus(const std::vector<RawExample>& raw,
                                    const Vocab& vocab);

// Inverse of parse_corpus for complete target sequences.
void write_corpus(std::ostream& out, const std::vector<Sequence>& corpus,
                  const Vocab& vocab);

}  // namespace editdiff

#endif  // EDITDIFF_CORPUS_IO_H_
