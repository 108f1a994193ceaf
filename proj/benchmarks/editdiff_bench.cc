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

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "editdiff/edit_engine.h"
#include "editdiff/edit_supervision.h"
#include "editdiff/featurized_model.h"
#include "editdiff/scheduler.h"
#include "editdiff/tasks.h"
#include "editdiff/vocab.h"

namespace editdiff {
namespace {

const Vocab& bench_vocab() {
  static const Vocab v = [] {
    std::vector<std::string> content;
    for (char ch = 'a'; ch <= 'z'; ++ch) content.emplace_back(1, ch);
    return Vocab(content);
  }();
  return v;
}

// Random unprompted sequence of content tokens plus an edit on every slot.
struct EditCase {
  Sequence x;
  EditPrediction e;
};

EditCase random_case(std::size_t len, std::uint64_t seed) {
  const Vocab& v = bench_vocab();
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> letter(0, 25);
  std::uniform_int_distribution<int> kind(0, 9);
  EditCase ec;
  for (std::size_t i = 0; i + 1 < len; ++i) ec.x.tokens.push_back(v.id(std::string(1, 'a' + letter(gen))));
  ec.x.tokens.push_back(v.eos());
  ec.e = identity_edit(ec.x);
  for (std::size_t j = 0; j + 1 < len; ++j) {
    const int k = kind(gen);
    if (k == 0) ec.e.c[j] = v.del();
    if (k == 1) ec.e.c[j] = v.id(std::string(1, 'a' + letter(gen)));
    if (k == 2) ec.e.n[j] = v.id(std::string(1, 'a' + letter(gen)));
  }
  return ec;
}

void BM_ApplyEdits(benchmark::State& state) {
  const EditCase ec = random_case(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(apply_edits(ec.x, ec.e, bench_vocab()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ApplyEdits)->RangeMultiplier(4)->Range(16, 4096);

void BM_ApplyEditsParallel(benchmark::State& state) {
  const EditCase ec = random_case(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(apply_edits_parallel(ec.x, ec.e, bench_vocab()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ApplyEditsParallel)->RangeMultiplier(4)->Range(16, 4096);

void BM_MinimalEditScript(benchmark::State& state) {
  const std::size_t len = static_cast<std::size_t>(state.range(0));
  const Sequence a = random_case(len, 1).x;
  const Sequence b = random_case(len, 2).x;
  for (auto _ : state) benchmark::DoNotOptimize(minimal_edit_script(a, b));
}
BENCHMARK(BM_MinimalEditScript)->RangeMultiplier(4)->Range(8, 512);

struct ModelFixture {
  Task task = make_task(TaskSpec{});
  FeaturizedModel model{task.vocab, {.seed = 3}};
};

const ModelFixture& fixture() {
  static const ModelFixture f;
  return f;
}

void BM_MaskPhaseOneStep(benchmark::State& state) {
  const ModelFixture& f = fixture();
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(mask_phase(f.model, {}, f.task.gen_len(), 1, SelectionPolicy::kRandom, seed++));
}
BENCHMARK(BM_MaskPhaseOneStep);

void BM_EditPhaseOneStep(benchmark::State& state) {
  const ModelFixture& f = fixture();
  const Sequence draft = mask_phase(f.model, {}, f.task.gen_len(), 1, SelectionPolicy::kRandom, 0);
  for (auto _ : state) benchmark::DoNotOptimize(edit_phase(f.model, draft, 1));
}
BENCHMARK(BM_EditPhaseOneStep);

}  // namespace
}  // namespace editdiff

// The packaged benchmark_main archive is LTO bytecode from another compiler.
BENCHMARK_MAIN();
