// Copyright 2026 The levinv Authors. All rights reserved.
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

#include "levinv/generator.hpp"
#include "levinv/gradient.hpp"
#include "levinv/hessian.hpp"
#include "levinv/leverage.hpp"
#include "levinv/objective.hpp"

namespace levinv {
namespace {

struct Fixture {
  GeneratedInstance gen;
  Vector x;
};

Fixture make(const benchmark::State& state) {
  GenConfig cfg;
  cfg.n = state.range(0);
  cfg.d = state.range(1);
  cfg.seed = 1;
  Fixture f{gen_instance(cfg), {}};
  f.x = perturb_start(f.gen.x_star, 1e-2 * (1.0 + f.gen.x_star.norm()), 2);
  return f;
}

void BM_Snapshot(benchmark::State& state) {
  const Fixture f = make(state);
  for (auto _ : state) benchmark::DoNotOptimize(snapshot(f.gen.instance, f.x));
}

void BM_GradientIteration(benchmark::State& state) {
  const Fixture f = make(state);
  for (auto _ : state) {
    const LeverageSnapshot snap = snapshot(f.gen.instance, f.x);
    benchmark::DoNotOptimize(loss_total(f.gen.instance, snap, f.gen.reg));
    benchmark::DoNotOptimize(grad_loss_total(f.gen.instance, snap, f.gen.reg));
  }
  state.SetComplexityN(state.range(0));
}

void BM_HessianAssembly(benchmark::State& state) {
  const Fixture f = make(state);
  const LeverageSnapshot snap = snapshot(f.gen.instance, f.x, true);
  for (auto _ : state) benchmark::DoNotOptimize(hessian_total(f.gen.instance, snap, f.gen.reg));
  state.SetComplexityN(state.range(0));
}

void BM_FullSigma(benchmark::State& state) {
  const Fixture f = make(state);
  for (auto _ : state) benchmark::DoNotOptimize(eval_sigma_full(f.gen.instance, f.x));
}

BENCHMARK(BM_Snapshot)->ArgsProduct({{256, 1024, 4096}, {8, 32}});
BENCHMARK(BM_GradientIteration)
    ->ArgsProduct({{256, 512, 1024, 2048}, {8}})
    ->Complexity(benchmark::oNSquared);
BENCHMARK(BM_GradientIteration)->ArgsProduct({{1024}, {4, 8, 16, 32, 64}});
BENCHMARK(BM_HessianAssembly)->ArgsProduct({{64, 128, 256, 512}, {8}})->Complexity();
BENCHMARK(BM_HessianAssembly)->ArgsProduct({{256}, {4, 8, 16, 32}});
BENCHMARK(BM_FullSigma)->ArgsProduct({{256, 1024}, {8}});

}  // namespace
}  // namespace levinv

BENCHMARK_MAIN();
