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

#include "tacforce/mlp.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace
{

// Full-batch loss and gradient of the raw-field baseline shape.
void BM_MlpGradient(benchmark::State & state)
{
  const int inputs = static_cast<int>(state.range(0));
  const int batch = 250;
  tacforce::MLPModel m({inputs, 512, 128, 10, 3}, tacforce::Activation::Tanh);
  m.initialize(1);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd x(inputs, batch);
  Eigen::MatrixXd y(3, batch);
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    x.data()[k] = n(rng);
  }
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    y.data()[k] = n(rng);
  }
  const Eigen::VectorXd theta = m.parameters();
  Eigen::VectorXd grad;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.loss_and_gradient(theta, x, y, grad));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}

}  // namespace

BENCHMARK(BM_MlpGradient)->Arg(288)->Arg(1152)->Unit(benchmark::kMillisecond);
