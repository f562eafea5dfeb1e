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

#include "tacforce/features.hpp"
#include "tacforce/surrogate.hpp"

#include <benchmark/benchmark.h>

namespace
{

void BM_ComputeFeatures(benchmark::State & state)
{
  const int n = static_cast<int>(state.range(0));
  const tacforce::GridSpec g{n, n, 0.5, {0.0, 0.0}};
  tacforce::LoadTriple load;
  load.f_n = 10.0;
  load.f_t = {3.0, 1.0};
  load.f_tau = 8.0;
  load.contact_center = g.centre();
  const auto field = tacforce::render_load({}, load, g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tacforce::compute_features(field));
  }
}

void BM_RenderLoad(benchmark::State & state)
{
  const tacforce::GridSpec g{24, 24, 0.5, {0.0, 0.0}};
  tacforce::LoadTriple load;
  load.f_n = 10.0;
  load.contact_center = g.centre();
  tacforce::SurrogateConfig cfg;
  cfg.noise_sigma = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tacforce::render_load(cfg, load, g));
  }
}

}  // namespace

BENCHMARK(BM_ComputeFeatures)->Arg(16)->Arg(24)->Arg(32)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RenderLoad)->Unit(benchmark::kMicrosecond);
