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

// editdiff command-line driver.
//
//   editdiff gen-task --task arithmetic --out data/
//   editdiff train    --task arithmetic --config run.cfg --checkpoint model.json --out train.csv
//   editdiff generate --task arithmetic --checkpoint model.json --budget 8 --out trace.jsonl
//   editdiff eval     --task arithmetic --checkpoint model.json --budget 64 --out eval.csv
//   editdiff sweep    --task arithmetic --checkpoint model.json --budget 64 --out sweep.json
//
// Exit status: 0 success, 2 usage or configuration error, 1 runtime failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "editdiff/config.h"
#include "editdiff/corpus_io.h"
#include "editdiff/errors.h"
#include "editdiff/eval.h"
#include "editdiff/featurized_model.h"
#include "editdiff/pipeline.h"
#include "editdiff/scheduler.h"
#include "editdiff/tabular_model.h"
#include "editdiff/tasks.h"

namespace {

using namespace editdiff;
namespace fs = std::filesystem;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string task;
  std::string config;
  std::uint64_t seed = 0;
  std::optional<std::size_t> budget;
  std::string alloc;
  std::string grid;
  std::string out;
  std::string checkpoint;
  std::string model;
  std::string prompt;
  bool timing = false;
};

// Relative --out paths land under EDITDIFF_OUT_DIR when it is set.
fs::path resolve_out(const std::string& out) {
  fs::path p(out);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("EDITDIFF_OUT_DIR"); dir && *dir) p = fs::path(dir) / p;
  }
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

StepAllocation parse_alloc(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) throw ConfigError("--alloc expects m/e, got '" + text + "'");
  try {
    std::size_t used = 0;
    const std::string m = text.substr(0, slash), e = text.substr(slash + 1);
    const std::size_t ms = std::stoul(m, &used);
    if (used != m.size()) throw std::invalid_argument(m);
    const std::size_t es = std::stoul(e, &used);
    if (used != e.size()) throw std::invalid_argument(e);
    return {ms, es};
  } catch (const std::logic_error&) {
    throw ConfigError("--alloc expects m/e, got '" + text + "'");
  }
}

RunConfig build_config(const Options& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  cfg.task.kind = parse_task_kind(o.task);
  if (!o.model.empty()) cfg.model = parse_model_kind(o.model);
  cfg.apply_seed(o.seed);
  return cfg;
}

// Either the explicit --alloc (checked against --budget) or the quarter rule.
StepAllocation resolve_allocation(const Options& o) {
  if (!o.alloc.empty()) {
    const StepAllocation a = parse_alloc(o.alloc);
    if (o.budget && a.total() != *o.budget) {
      throw ConfigError("--alloc " + o.alloc + " does not sum to --budget " +
                        std::to_string(*o.budget));
    }
    if (a.total() == 0) throw ConfigError("allocation must use at least one step");
    return a;
  }
  if (!o.budget || *o.budget == 0) throw ConfigError("--budget (positive) or --alloc is required");
  return allocate_steps(*o.budget);
}

std::unique_ptr<DenoiserModel> load_model(const RunConfig& cfg, const Options& o,
                                          const Task& task) {
  if (cfg.model == ModelKind::kTabular) {
    return std::make_unique<TabularModel>(TabularModel::fit(task.vocab, task.train));
  }
  if (o.checkpoint.empty()) {
    if (!cfg.eval.allow_untrained) {
      throw ConfigError("--checkpoint is required for the featurized model");
    }
    return std::make_unique<FeaturizedModel>(task.vocab, cfg.featurized);
  }
  auto m = std::make_unique<FeaturizedModel>(FeaturizedModel::load(o.checkpoint));
  if (!(m->vocab() == task.vocab)) {
    throw CheckpointError("checkpoint vocabulary does not match task " + o.task);
  }
  return m;
}

void write_text(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(resolve_out(out), std::ios::binary);
  if (!f) throw Error("cannot write " + out);
  f << text;
}

void write_report(const Options& o, const EvalReport& rep) {
  std::ostringstream ss;
  if (fs::path(o.out).extension() == ".json") {
    write_report_json(ss, rep, o.timing);
  } else {
    write_report_csv(ss, rep, o.timing);
  }
  write_text(o.out, ss.str());
}

int cmd_gen_task(const Options& o) {
  const RunConfig cfg = build_config(o);
  const Task task = make_task(cfg.task);
  if (o.out.empty()) {
    write_corpus(std::cout, task.corpus, task.vocab);
    return 0;
  }
  const fs::path dir = resolve_out(o.out + "/");
  fs::create_directories(dir);
  task.vocab.save(dir / "vocab.txt");
  for (const auto& [name, part] : {std::pair{"corpus.txt", &task.corpus},
                                   std::pair{"train.txt", &task.train},
                                   std::pair{"eval.txt", &task.eval}}) {
    std::ofstream f(dir / name);
    write_corpus(f, *part, task.vocab);
  }
  std::cout << "wrote " << task.corpus.size() << " sequences (" << task.train.size()
            << " train, " << task.eval.size() << " eval) to " << dir.string() << "\n";
  return 0;
}

int cmd_train(const Options& o) {
  const RunConfig cfg = build_config(o);
  if (cfg.model != ModelKind::kFeaturized) {
    throw ConfigError("only the featurized model is trained; the tabular model is fit on load");
  }
  if (o.checkpoint.empty()) throw ConfigError("train needs --checkpoint to write the model");
  const Task task = make_task(cfg.task);
  FeaturizedModel model(task.vocab, cfg.featurized);
  const auto metrics = run_training(model, task, cfg, [](const EpochMetrics& m) {
    std::cerr << to_string(m.stage) << " epoch " << m.epoch << " loss " << m.total_loss;
    if (m.heldout_loss) std::cerr << " heldout " << *m.heldout_loss;
    if (m.dev_validity) std::cerr << " dev_validity " << *m.dev_validity;
    std::cerr << "\n";
  });
  model.save(resolve_out(o.checkpoint));
  if (!o.out.empty()) append_metrics_csv(resolve_out(o.out), metrics);
  return 0;
}

int cmd_generate(const Options& o) {
  const RunConfig cfg = build_config(o);
  const Task task = make_task(cfg.task);
  const auto model = load_model(cfg, o, task);
  GenerationConfig g;
  g.allocation = resolve_allocation(o);
  g.total_steps = g.allocation->total();
  g.policy = cfg.eval.policy;
  g.max_gen_len = cfg.eval.max_gen_len;
  g.max_edit_steps = cfg.eval.max_edit_steps;
  g.seed = o.seed;
  std::vector<TokenId> prompt;
  if (task.conditional()) {
    prompt = o.prompt.empty() ? std::vector<TokenId>(task.eval[0].prompt().begin(),
                                                     task.eval[0].prompt().end())
                              : task.vocab.encode(o.prompt);
  } else if (!o.prompt.empty()) {
    throw ConfigError("task " + o.task + " takes no prompt");
  }
  g.gen_len = task.gen_len();
  const GenerationResult res = generate(*model, prompt, g);
  std::cout << to_string(res.output, task.vocab) << "\t"
            << (is_valid(task, res.output) ? "valid" : "invalid") << "\n";
  if (!o.out.empty()) {
    std::ostringstream ss;
    write_trace_jsonl(ss, res.trace, task.vocab);
    write_text(o.out, ss.str());
  }
  return 0;
}

int cmd_eval(const Options& o, bool sweep) {
  const RunConfig cfg = build_config(o);
  const Task task = make_task(cfg.task);
  const auto model = load_model(cfg, o, task);
  EvalReport rep;
  if (sweep) {
    if (!o.budget || *o.budget == 0) throw ConfigError("sweep needs a positive --budget");
    std::vector<StepAllocation> grid = default_sweep_grid(*o.budget);
    if (!o.grid.empty()) {
      grid.clear();
      std::stringstream ss(o.grid);
      std::string item;
      while (std::getline(ss, item, ',')) grid.push_back(parse_alloc(item));
    }
    rep = sweep_allocation(*model, task, *o.budget, grid, cfg.eval);
  } else {
    rep = evaluate(*model, task, {resolve_allocation(o)}, cfg.eval);
  }
  write_report(o, rep);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"editdiff: masked diffusion drafts refined by learned edits"};
  app.require_subcommand(1);
  Options o;
  std::string config_keys_help = "Flat key = value file. Keys:";
  for (const auto& k : editdiff::config_keys()) config_keys_help += " " + k;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--task", o.task, "arithmetic | brackets | keyed-copy")->required();
    sub->add_option("--config", o.config, config_keys_help)->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "Seed for every random choice");
    sub->add_option("--out", o.out, "Output path (EDITDIFF_OUT_DIR prefixes relative paths)");
    sub->add_option("--model", o.model, "featurized | tabular");
  };
  auto add_budget = [&](CLI::App* sub) {
    sub->add_option("--budget", o.budget, "Total diffusion steps");
    sub->add_option("--alloc", o.alloc, "Explicit mask/edit split, e.g. 48/16");
    sub->add_option("--checkpoint", o.checkpoint, "Featurized model checkpoint");
    sub->add_flag("--timing", o.timing, "Add per-phase median step times to reports");
  };

  auto* gen_task = app.add_subcommand("gen-task", "Write a task corpus and its split");
  add_common(gen_task);
  auto* train = app.add_subcommand("train", "Train the featurized model");
  add_common(train);
  train->add_option("--checkpoint", o.checkpoint, "Where to write the model")->required();
  auto* gen = app.add_subcommand("generate", "Generate one sequence and its trace");
  add_common(gen);
  add_budget(gen);
  gen->add_option("--prompt", o.prompt, "Prompt tokens for conditional tasks");
  auto* eval = app.add_subcommand("eval", "Evaluate at one allocation");
  add_common(eval);
  add_budget(eval);
  auto* sweep = app.add_subcommand("sweep", "Evaluate allocations of a fixed budget");
  add_common(sweep);
  add_budget(sweep);
  sweep->add_option("--grid", o.grid, "Comma-separated m/e pairs (default: B/0,3B/4/B/4,...)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (*gen_task) return cmd_gen_task(o);
    if (*train) return cmd_train(o);
    if (*gen) return cmd_generate(o);
    if (*eval) return cmd_eval(o, false);
    if (*sweep) return cmd_eval(o, true);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
