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

#include "augbias/policy.hpp"
#include "augbias/simharness.hpp"

namespace {

using namespace augbias;

void BM_TrainClassifier(benchmark::State& state) {
  const auto config = SimConfig::canonical();
  const auto data = generate_dataset(config, 0);
  const auto policy = uniform_policy(Strength(static_cast<double>(state.range(0))));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(train_classifier(config, data.train, policy, ++seed));
}
BENCHMARK(BM_TrainClassifier)->Arg(8)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  const auto config = SimConfig::canonical();
  for (auto _ : state) benchmark::DoNotOptimize(sweep(config));
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);

}  // namespace
