// Copyright 2026 The tacforce Authors
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

#include "random_fields.hpp"

#include "tacforce/nhhd.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace
{

using tacforce::PoissonOptions;

void poisson(benchmark::State & state, PoissonOptions::Method method)
{
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const auto rhs = tacforce::testing::random_smooth_scalar(tacforce::testing::centred(n, n, 0.5), rng);
  const PoissonOptions opt{method, std::size_t{1} << 20};
  for (auto _ : state) {
    benchmark::DoNotOptimize(tacforce::solve_poisson_freespace(rhs, opt));
  }
  state.SetComplexityN(static_cast<std::int64_t>(n) * n);
}

void BM_PoissonDirect(benchmark::State & state)
{
  poisson(state, PoissonOptions::Method::Direct);
}

void BM_PoissonFft(benchmark::State & state)
{
  poisson(state, PoissonOptions::Method::Fft);
}

void BM_Decompose(benchmark::State & state)
{
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  const auto f = tacforce::testing::random_smooth_field(tacforce::testing::centred(n, n, 0.5), rng);
  const PoissonOptions opt{PoissonOptions::Method::Auto};
  for (auto _ : state) {
    benchmark::DoNotOptimize(tacforce::decompose(f, opt));
  }
}

}  // namespace

BENCHMARK(BM_PoissonDirect)->RangeMultiplier(2)->Range(16, 64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PoissonFft)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Decompose)->Arg(24)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
