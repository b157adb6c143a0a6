// Copyright 2026 The hjblearn Authors
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

#include <random>
#include <vector>

#include "hjbl/envs.hpp"
#include "hjbl/mppi.hpp"
#include "hjbl/network.hpp"
#include "hjbl/rollout.hpp"

namespace {

using namespace hjbl;

ValueNetwork swingup_net() {
  const NetworkPreset p = network_preset("swingup_fcn");
  return ValueNetwork::initialized(p.kind, p.layer_widths, 7);
}

ValueNetwork balance_net() {
  const NetworkPreset p = network_preset("cp_icnn");
  return ValueNetwork::initialized(p.kind, p.layer_widths, 7);
}

void BM_FcnValue(benchmark::State& state) {
  const ValueNetwork net = swingup_net();
  const Vec x = Vec::Constant(4, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(net.value(x, 0.5));
}
BENCHMARK(BM_FcnValue);

void BM_FcnInputDerivatives(benchmark::State& state) {
  const ValueNetwork net = swingup_net();
  const Vec x = Vec::Constant(4, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(net.input_derivatives(x, 0.5));
}
BENCHMARK(BM_FcnInputDerivatives);

void BM_IcnnPdValue(benchmark::State& state) {
  const ValueNetwork net = balance_net();
  const Vec x = Vec::Constant(4, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(net.value(x, 0.5));
}
BENCHMARK(BM_IcnnPdValue);

void BM_FcnSecondOrder(benchmark::State& state) {
  const ValueNetwork net = swingup_net();
  const Vec x = Vec::Constant(4, 0.3);
  const Vec w = Vec::Constant(4, 0.2);
  std::vector<double> h(std::size_t(net.param_count()), 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.accumulate_second_order(x, 0.5, w, 1.0, h));
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_FcnSecondOrder);

// Swing-up rollout and reverse sweep over the training grid (38 steps).
void BM_SwingupRollout(benchmark::State& state) {
  const ValueNetwork net = swingup_net();
  const auto env = make_env("cartpole_swingup");
  const TimeGrid grid = TimeGrid::make(3.04, 0.08);
  const Vec x0 = (Vec(4) << 0.0, 3.1, 0.0, 0.0).finished();
  for (auto _ : state) benchmark::DoNotOptimize(rollout(net, *env, x0, grid));
}
BENCHMARK(BM_SwingupRollout)->Unit(benchmark::kMicrosecond);

void BM_SwingupAdjoint(benchmark::State& state) {
  const ValueNetwork net = swingup_net();
  const auto env = make_env("cartpole_swingup");
  const TimeGrid grid = TimeGrid::make(3.04, 0.08);
  const std::vector<Vec> batch{(Vec(4) << 0.0, 3.1, 0.0, 0.0).finished()};
  GradientOptions o;
  o.loss = LossKind::kValue;
  for (auto _ : state) benchmark::DoNotOptimize(adjoint_gradient(net, *env, batch, grid, o));
}
BENCHMARK(BM_SwingupAdjoint)->Unit(benchmark::kMicrosecond);

void BM_MppiUpdate(benchmark::State& state) {
  const auto env = make_env("twolink");
  MppiConfig c;
  c.samples = int(state.range(0));
  c.horizon = 50;
  c.noise_std = {1.0};
  const Vec x = (Vec(4) << 0.5, -0.5, 0.0, 0.0).finished();
  const Mat nominal = Mat::Zero(c.horizon, 2);
  std::mt19937_64 rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(mppi_update(c, *env, x, nominal, rng));
  state.SetItemsProcessed(state.iterations() * c.samples * c.horizon);
}
BENCHMARK(BM_MppiUpdate)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
