// Copyright (c) 2026, The augbias Authors. All rights reserved.
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

#include "augbias/metrics.hpp"
#include "augbias/simharness.hpp"

namespace {

using namespace augbias;

const SweepResult& canonical_sweep() {
  static const SweepResult result = sweep(SimConfig::canonical());
  return result;
}

void BM_Tabulate(benchmark::State& state) {
  const auto& r = canonical_sweep();
  for (auto _ : state) benchmark::DoNotOptimize(tabulate(r.log, r.annotations));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(r.log.records().size()));
}
BENCHMARK(BM_Tabulate)->Unit(benchmark::kMillisecond);

void BM_Curves(benchmark::State& state) {
  const auto& r = canonical_sweep();
  const auto table = tabulate(r.log, r.annotations);
  for (auto _ : state) {
    benchmark::DoNotOptimize(metric_curves(table));
    benchmark::DoNotOptimize(confusion_curves(table));
  }
}
BENCHMARK(BM_Curves)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
