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

#include "editdiff/trace.h"

#include <istream>
#include <ostream>
#include <string>

#include "editdiff/errors.h"
#include "json.hpp"

namespace editdiff {
namespace {

using nlohmann::json;

constexpr const char* kTraceSchema = "editdiff.trace";

json symbols(std::span<const TokenId> ids, const Vocab& v) {
  json arr = json::array();
  for (TokenId t : ids) arr.push_back(v.symbol(t));
  return arr;
}

std::vector<TokenId> ids_of(const json& arr, const Vocab& v) {
  std::vector<TokenId> out;
  for (const auto& s : arr) out.push_back(v.id(s.get<std::string>()));
  return out;
}

}  // namespace

const char* to_string(SelectionPolicy policy) {
  return policy == SelectionPolicy::kConfidence ? "confidence" : "random";
}

SelectionPolicy parse_selection_policy(std::string_view name) {
  if (name == "confidence") return SelectionPolicy::kConfidence;
  if (name == "random") return SelectionPolicy::kRandom;
  throw ConfigError("unknown selection policy '" + std::string(name) + "'");
}

Sequence replay(const GenerationTrace& trace, const Vocab& vocab) {
  Sequence x = trace.initial;
  const EditLimits limits{trace.max_gen_len};
  for (const StepRecord& rec : trace.steps) {
    if (rec.phase == Phase::kMask) {
      if (rec.positions.size() != rec.tokens.size()) {
        throw DomainError("replay: malformed mask step");
      }
      for (std::size_t i = 0; i < rec.positions.size(); ++i) {
        if (rec.positions[i] >= x.size() || x.tokens[rec.positions[i]] != vocab.mask()) {
          throw DomainError("replay: mask step fills an unmasked slot");
        }
        x.tokens[rec.positions[i]] = rec.tokens[i];
      }
    } else {
      EditOutcome out = apply_edits(x, rec.edits, vocab, limits);
      if (out.was_empty != rec.empty) throw DomainError("replay: empty flag mismatch");
      x = std::move(out.result);
    }
    if (x.tokens != rec.state) {
      throw DomainError("replay: state diverges at step " + std::to_string(rec.step));
    }
  }
  return x;
}

void write_trace_jsonl(std::ostream& out, const GenerationTrace& trace, const Vocab& vocab) {
  json header = {{"type", "header"},
                 {"schema", kTraceSchema},
                 {"version", kTraceSchemaVersion},
                 {"prompt_len", trace.initial.prompt_len},
                 {"initial", symbols(trace.initial.tokens, vocab)},
                 {"mask_steps", trace.allocation.mask_steps},
                 {"edit_steps", trace.allocation.edit_steps},
                 {"policy", to_string(trace.policy)},
                 {"seed", trace.seed},
                 {"max_gen_len", trace.max_gen_len}};
  out << header.dump() << '\n';
  for (const StepRecord& rec : trace.steps) {
    json line = {{"type", "step"}, {"step", rec.step}};
    if (rec.phase == Phase::kMask) {
      line["phase"] = "mask";
      line["positions"] = rec.positions;
      line["tokens"] = symbols(rec.tokens, vocab);
    } else {
      line["phase"] = "edit";
      line["c"] = symbols(rec.edits.c, vocab);
      line["n"] = symbols(rec.edits.n, vocab);
      line["replacements"] = rec.replacements;
      line["deletions"] = rec.deletions;
      line["insertions"] = rec.insertions;
      line["empty"] = rec.empty;
      line["truncated"] = rec.truncated;
    }
    line["state"] = symbols(rec.state, vocab);
    out << line.dump() << '\n';
  }
  json summary = {{"type", "summary"},
                  {"edit_steps_used", trace.edit_steps_used},
                  {"empty_edit_step", trace.empty_edit_step
                                          ? json(*trace.empty_edit_step)
                                          : json(nullptr)},
                  {"truncated", trace.truncated}};
  out << summary.dump() << '\n';
}

GenerationTrace read_trace_jsonl(std::istream& in, const Vocab& vocab) {
  GenerationTrace trace;
  std::string line;
  bool have_header = false;
  bool have_summary = false;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        if (j.at("schema").get<std::string>() != kTraceSchema ||
            j.at("version").get<int>() != kTraceSchemaVersion) {
          throw DomainError("trace: unsupported schema or version");
        }
        trace.initial.tokens = ids_of(j.at("initial"), vocab);
        trace.initial.prompt_len = j.at("prompt_len").get<std::size_t>();
        trace.allocation = {j.at("mask_steps").get<std::size_t>(),
                            j.at("edit_steps").get<std::size_t>()};
        trace.policy = parse_selection_policy(j.at("policy").get<std::string>());
        trace.seed = j.at("seed").get<std::uint64_t>();
        trace.max_gen_len = j.at("max_gen_len").get<std::size_t>();
        have_header = true;
      } else if (type == "step") {
        StepRecord rec;
        rec.step = j.at("step").get<std::size_t>();
        rec.state = ids_of(j.at("state"), vocab);
        if (j.at("phase").get<std::string>() == "mask") {
          rec.phase = Phase::kMask;
          rec.positions = j.at("positions").get<std::vector<std::size_t>>();
          rec.tokens = ids_of(j.at("tokens"), vocab);
        } else {
          rec.phase = Phase::kEdit;
          rec.edits.c = ids_of(j.at("c"), vocab);
          rec.edits.n = ids_of(j.at("n"), vocab);
          rec.replacements = j.at("replacements").get<std::size_t>();
          rec.deletions = j.at("deletions").get<std::size_t>();
          rec.insertions = j.at("insertions").get<std::size_t>();
          rec.empty = j.at("empty").get<bool>();
          rec.truncated = j.at("truncated").get<bool>();
        }
        trace.steps.push_back(std::move(rec));
      } else if (type == "summary") {
        trace.edit_steps_used = j.at("edit_steps_used").get<std::size_t>();
        const json& e = j.at("empty_edit_step");
        if (!e.is_null()) trace.empty_edit_step = e.get<std::size_t>();
        trace.truncated = j.at("truncated").get<bool>();
        have_summary = true;
      } else {
        throw DomainError("trace: unknown record type '" + type + "'");
      }
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("trace: malformed JSON line: ") + e.what());
  }
  if (!have_header || !have_summary) throw DomainError("trace: missing header or summary");
  return trace;
}

}  // namespace editdiff
