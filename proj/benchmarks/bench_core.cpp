// Copyright 2026 The chainest Authors
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

#include "chainest/mse_theory.hpp"
#include "chainest/simulate.hpp"

namespace {

using namespace chainest;

GenSpec targets(std::size_t n) {
  GenSpec g;
  g.n_population = n;
  g.mean_y = 183.84;
  g.mean_x = 185.72;
  g.mean_z = 151.12;
  g.cv_y = 0.0546;
  g.cv_x = 0.0526;
  g.cv_z = 0.0488;
  g.rho_xy = 0.7108;
  g.rho_xz = 0.7346;
  g.rho_yz = 0.6932;
  g.seed = 1;
  return g;
}

void BM_Summarize(benchmark::State& state) {
  const FinitePopulation pop =
      generate_population(targets(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(summarize(pop));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Summarize)->Arg(1000)->Arg(100000);

void BM_DrawTwoPhase(benchmark::State& state) {
  const FinitePopulation pop = generate_population(targets(2000));
  const DesignSpec d{2000, 200, 70};
  TwoPhaseDrawer drawer(pop, d);
  TwoPhaseSample sample;
  std::uint64_t rep = 0;
  for (auto _ : state) {
    SplitMix64 rng = SplitMix64::substream(9, rep++);
    drawer.draw(rng, sample);
    benchmark::DoNotOptimize(sample.mean_y_second);
  }
}
BENCHMARK(BM_DrawTwoPhase);

void BM_AnalyticTable(benchmark::State& state) {
  const PopulationSummary s =
      summarize(generate_population(targets(2000)));
  const DesignSpec d{2000, 200, 70};
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytic_table(s, d));
  }
}
BENCHMARK(BM_AnalyticTable);

void BM_EnumerateExact(benchmark::State& state) {
  GenSpec g = targets(12);
  g.cv_y = g.cv_x = g.cv_z = 0.03;
  const FinitePopulation pop = generate_population(g);
  const std::vector<EstimatorId> ests{EstimatorId::T1, EstimatorId::T4,
                                      EstimatorId::Tstar4};
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_exact(pop, {12, 6, 3}, ests));
  }
  state.SetItemsProcessed(state.iterations() * 18480);
}
BENCHMARK(BM_EnumerateExact);

void BM_MonteCarlo(benchmark::State& state) {
  const FinitePopulation pop = generate_population(targets(200));
  const DesignSpec d{200, 40, 15};
  const auto ests = default_simulation_estimators();
  SimConfig cfg;
  cfg.replications = static_cast<std::uint64_t>(state.range(0));
  cfg.seed = 3;
  cfg.threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_monte_carlo(pop, d, ests, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Args({10000, 1})->Args({10000, 2});

}  // namespace

BENCHMARK_MAIN();
