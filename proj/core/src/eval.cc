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

#include "editdiff/eval.h"

#include <algorithm>
#include <ostream>
#include <set>

#include "json.hpp"

#include "editdiff/errors.h"
#include "editdiff/rng.h"

namespace editdiff {
namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

std::vector<std::string> csv_header(bool timing) {
  std::vector<std::string> cols{"task",        "policy",        "budget",
                                "mask_steps",  "edit_steps",    "generations",
                                "validity_rate", "exact_match", "mean_edit_steps"};
  if (timing) {
    cols.emplace_back("median_mask_step_ms");
    cols.emplace_back("median_edit_step_ms");
  }
  return cols;
}

}  // namespace

EvalReport evaluate(const DenoiserModel& model, const Task& task,
                    const std::vector<StepAllocation>& grid, const EvalOptions& opts) {
  if (!model.is_trained() && !opts.allow_untrained) {
    throw DomainError("refusing to evaluate an untrained model");
  }
  if (opts.seeds.empty()) throw ConfigError("evaluation needs at least one seed");
  if (task.eval.empty()) throw DomainError("task has an empty eval split");
  const bool prompted = task.conditional();
  const std::size_t instances = opts.instances ? opts.instances : task.eval.size();
  const std::set<std::vector<TokenId>> corpus = [&] {
    std::set<std::vector<TokenId>> s;
    for (const auto& x : task.corpus) s.insert(x.tokens);
    return s;
  }();

  EvalReport report;
  report.task = to_string(task.spec.kind);
  report.policy = opts.policy;
  for (const StepAllocation& alloc : grid) {
    EvalRow row;
    row.budget = alloc.total();
    row.allocation = alloc;
    std::size_t valid = 0, exact = 0, edit_steps = 0;
    std::vector<double> mask_times, edit_times;
    for (std::uint64_t seed : opts.seeds) {
      const Philox seeder(seed);
      std::size_t seed_valid = 0;
      for (std::size_t i = 0; i < instances; ++i) {
        const Sequence& ref = task.eval[i % task.eval.size()];
        GenerationConfig cfg;
        cfg.total_steps = alloc.total();
        cfg.allocation = alloc;
        cfg.policy = opts.policy;
        cfg.gen_len = prompted ? ref.gen_len() : task.gen_len();
        cfg.max_gen_len = opts.max_gen_len;
        cfg.max_edit_steps = opts.max_edit_steps;
        cfg.seed = seeder.split(i).next_u64();
        const std::span<const TokenId> prompt =
            prompted ? ref.prompt() : std::span<const TokenId>{};
        GenerationResult res = generate(model, prompt, cfg);
        const bool ok = is_valid(task, res.output);
        seed_valid += ok;
        if (prompted ? res.output == ref : corpus.contains(res.output.tokens)) ++exact;
        edit_steps += res.trace.edit_steps_used;
        mask_times.insert(mask_times.end(), res.timings.mask_step_seconds.begin(),
                          res.timings.mask_step_seconds.end());
        edit_times.insert(edit_times.end(), res.timings.edit_step_seconds.begin(),
                          res.timings.edit_step_seconds.end());
      }
      valid += seed_valid;
      row.seed_validity.push_back(static_cast<double>(seed_valid) /
                                  static_cast<double>(instances));
    }
    row.generations = instances * opts.seeds.size();
    const auto n = static_cast<double>(row.generations);
    row.validity_rate = static_cast<double>(valid) / n;
    row.exact_match = static_cast<double>(exact) / n;
    row.mean_edit_steps = static_cast<double>(edit_steps) / n;
    row.median_mask_step_seconds = median(std::move(mask_times));
    row.median_edit_step_seconds = median(std::move(edit_times));
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<StepAllocation> default_sweep_grid(std::size_t budget) {
  const std::size_t q = budget / 4, h = budget / 2;
  return {{budget, 0}, {budget - q, q}, {budget - h, h}, {0, budget}};
}

EvalReport sweep_allocation(const DenoiserModel& model, const Task& task,
                            std::size_t total_budget,
                            const std::vector<StepAllocation>& allocations,
                            const EvalOptions& opts) {
  if (total_budget == 0) throw ConfigError("sweep budget must be positive");
  for (const StepAllocation& a : allocations) {
    if (a.total() != total_budget) {
      throw ConfigError("allocation " + std::to_string(a.mask_steps) + "/" +
                        std::to_string(a.edit_steps) + " does not sum to budget " +
                        std::to_string(total_budget));
    }
  }
  return evaluate(model, task, allocations, opts);
}

void write_report_csv(std::ostream& out, const EvalReport& report, bool timing) {
  const auto cols = csv_header(timing);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  const auto prec = out.precision(10);
  for (const EvalRow& r : report.rows) {
    out << report.task << ',' << to_string(report.policy) << ',' << r.budget << ','
        << r.allocation.mask_steps << ',' << r.allocation.edit_steps << ',' << r.generations
        << ',' << r.validity_rate << ',' << r.exact_match << ',' << r.mean_edit_steps;
    if (timing) {
      out << ',' << r.median_mask_step_seconds * 1e3 << ',' << r.median_edit_step_seconds * 1e3;
    }
    out << '\n';
  }
  out.precision(prec);
}

void write_report_json(std::ostream& out, const EvalReport& report, bool timing) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const EvalRow& r : report.rows) {
    nlohmann::ordered_json j;
    j["task"] = report.task;
    j["policy"] = to_string(report.policy);
    j["budget"] = r.budget;
    j["mask_steps"] = r.allocation.mask_steps;
    j["edit_steps"] = r.allocation.edit_steps;
    j["generations"] = r.generations;
    j["validity_rate"] = r.validity_rate;
    j["exact_match"] = r.exact_match;
    j["mean_edit_steps"] = r.mean_edit_steps;
    if (timing) {
      j["median_mask_step_ms"] = r.median_mask_step_seconds * 1e3;
      j["median_edit_step_ms"] = r.median_edit_step_seconds * 1e3;
    }
    rows.push_back(std::move(j));
  }
  out << nlohmann::ordered_json{{"schema", "editdiff.report"}, {"version", 1}, {"rows", rows}}
             .dump(2)
      << '\n';
}

}  // namespace editdiff
