// Copyright 2026 The mgfp Authors. All rights reserved.
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

#include <vector>

#include "benchmark/benchmark.h"
#include "mgfp/dynamics.hpp"
#include "mgfp/generators.hpp"
#include "mgfp/oracles.hpp"
#include "mgfp/schedule.hpp"

namespace {

mgfp::MarkovGame bench_game(int states, int actions) {
  mgfp::GenParams p;
  p.n_states = states;
  p.n_actions = {actions, actions};
  p.seed = 17;
  return mgfp::gen_zero_sum_single_controller(p);
}

void BM_FpStep(benchmark::State& state) {
  const auto g = bench_game(static_cast<int>(state.range(0)),
                            static_cast<int>(state.range(1)));
  const auto sched = mgfp::StepSchedule::power_law(0.6, 0.9);
  mgfp::RunConfig cfg;
  mgfp::FictitiousPlayRunner runner(g, sched, mgfp::make_initial_state(g, cfg));
  for (auto _ : state) {
    runner.step();
    benchmark::DoNotOptimize(runner.state());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FpStep)
    ->Args({3, 2})
    ->Args({10, 4})
    ->Args({30, 4})
    ->Args({10, 8});

void BM_MatrixSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  mgfp::SplitMix64 rng(5);
  std::vector<std::vector<double>> m(n, std::vector<double>(n));
  for (auto& row : m)
    for (double& v : row) v = 2.0 * rng.next_unit() - 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mgfp::solve_matrix_zero_sum(m));
  }
}
BENCHMARK(BM_MatrixSolve)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_Shapley(benchmark::State& state) {
  const auto g = bench_game(static_cast<int>(state.range(0)),
                            static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mgfp::shapley_value_iteration(g, 1e-6));
  }
}
BENCHMARK(BM_Shapley)->Args({3, 2})->Args({10, 4});

void BM_Exploitability(benchmark::State& state) {
  const auto g = bench_game(static_cast<int>(state.range(0)),
                            static_cast<int>(state.range(1)));
  const auto profile = mgfp::StrategyProfile::uniform(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mgfp::exploitability(g, profile));
  }
}
BENCHMARK(BM_Exploitability)->Args({3, 2})->Args({10, 4});

}  // namespace

BENCHMARK_MAIN();
