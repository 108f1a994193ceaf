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

#include "editdiff/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "editdiff/errors.h"

namespace editdiff {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& v) {
  T out{};
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError("bad number '" + v + "'");
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("bad boolean '" + v + "'");
}

std::vector<std::string> parse_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty list item in '" + v + "'");
    out.push_back(item);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

template <typename T, typename Field>
Setter num(Field field) {
  return [field](RunConfig& c, const std::string& v) { field(c) = parse_number<T>(v); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"task.kind", [](RunConfig& c, const std::string& v) { c.task.kind = parse_task_kind(v); }},
      {"task.operand_min", num<int>([](RunConfig& c) -> int& { return c.task.operand_min; })},
      {"task.operand_max", num<int>([](RunConfig& c) -> int& { return c.task.operand_max; })},
      {"task.sum_max",
       [](RunConfig& c, const std::string& v) { c.task.sum_max = parse_number<int>(v); }},
      {"task.bracket_pairs",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.task.bracket_pairs; })},
      {"task.max_depth",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.task.max_depth; })},
      {"task.copy_pairs",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.task.copy_pairs; })},
      {"task.key_alphabet",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.task.key_alphabet; })},
      {"task.value_alphabet",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.task.value_alphabet; })},
      {"task.value_len",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.task.value_len; })},
      {"task.copy_examples",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.task.copy_examples; })},
      {"task.split_seed",
       num<std::uint64_t>([](RunConfig& c) -> std::uint64_t& { return c.task.split_seed; })},
      {"task.eval_fraction",
       num<double>([](RunConfig& c) -> double& { return c.task.eval_fraction; })},
      {"model.kind", [](RunConfig& c, const std::string& v) { c.model = parse_model_kind(v); }},
      {"model.embed_dim",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.featurized.embed_dim; })},
      {"model.hidden_dim",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.featurized.hidden_dim; })},
      {"model.window_radius",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.featurized.window_radius; })},
      {"model.max_positions",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.featurized.max_positions; })},
      {"model.init_scale",
       num<double>([](RunConfig& c) -> double& { return c.featurized.init_scale; })},
      {"train.stages",
       [](RunConfig& c, const std::string& v) {
         c.stages.clear();
         for (const auto& s : parse_list(v)) c.stages.push_back(parse_stage(s));
       }},
      {"train.epochs",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.train.epochs; })},
      {"train.batch_size",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.train.batch_size; })},
      {"train.learning_rate",
       num<double>([](RunConfig& c) -> double& { return c.train.learning_rate; })},
      {"train.momentum", num<double>([](RunConfig& c) -> double& { return c.train.momentum; })},
      {"train.next_token_weight",
       num<double>([](RunConfig& c) -> double& { return c.train.next_token_weight; })},
      {"train.edit_weight",
       num<double>([](RunConfig& c) -> double& { return c.train.edit_weight; })},
      {"train.dev_budget",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.dev_budget; })},
      {"train.dev_instances",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.dev_instances; })},
      {"rollout.k_choices",
       [](RunConfig& c, const std::string& v) {
         c.rollout.unmask_k_choices.clear();
         for (const auto& s : parse_list(v)) {
           c.rollout.unmask_k_choices.push_back(parse_number<std::size_t>(s));
         }
       }},
      {"rollout.max_unmask_steps",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.rollout.max_unmask_steps; })},
      {"rollout.max_edit_depth",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.rollout.max_edit_depth; })},
      {"rollout.frozen_tabular",
       [](RunConfig& c, const std::string& v) { c.frozen_tabular_rollout = parse_bool(v); }},
      {"stage3.alpha", num<double>([](RunConfig& c) -> double& { return c.stage3.alpha; })},
      {"stage3.beta", num<double>([](RunConfig& c) -> double& { return c.stage3.beta; })},
      {"stage3.state_source",
       [](RunConfig& c, const std::string& v) {
         c.stage3.state_source = parse_state_source(v);
       }},
      {"stage3.noise_rate",
       num<double>([](RunConfig& c) -> double& { return c.stage3.noise_rate; })},
      {"eval.policy",
       [](RunConfig& c, const std::string& v) { c.eval.policy = parse_selection_policy(v); }},
      {"eval.instances",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.eval.instances; })},
      {"eval.seeds",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.eval_seed_count; })},
      {"eval.max_gen_len",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.eval.max_gen_len; })},
      {"eval.max_edit_steps",
       num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.eval.max_edit_steps; })},
      {"eval.allow_untrained",
       [](RunConfig& c, const std::string& v) { c.eval.allow_untrained = parse_bool(v); }},
  };
  return table;
}

}  // namespace

const char* to_string(ModelKind kind) {
  return kind == ModelKind::kTabular ? "tabular" : "featurized";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "tabular") return ModelKind::kTabular;
  if (name == "featurized") return ModelKind::kFeaturized;
  throw ConfigError("unknown model kind '" + std::string(name) + "'");
}

void RunConfig::apply_seed(std::uint64_t seed) {
  featurized.seed = seed;
  train.seed = seed;
  rollout.seed = seed;
  eval.seeds.clear();
  for (std::size_t i = 0; i < std::max<std::size_t>(eval_seed_count, 1); ++i) {
    eval.seeds.push_back(seed + i);
  }
}

void apply_config_text(RunConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    try {
      it->second(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + key + ": " + e.what());
    }
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig cfg;
  apply_config_text(cfg, ss.str());
  return cfg;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

}  // namespace editdiff
