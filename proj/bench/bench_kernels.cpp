// Licensed to the Apache Software Foundation (ASF) under one
// or more contributor license agreements.  See the NOTICE file
// distributed with this work for additional information
// regarding copyright ownership.  The ASF licenses this file
// to you under the Apache License, Version 2.0 (the
// "License"); you may not use this file except in compliance
// with the License.  You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "psdsf/baselines.hpp"
#include "psdsf/kernel.hpp"
#include "psdsf/properties.hpp"
#include "psdsf/random.hpp"
#include "psdsf/solver.hpp"

namespace psdsf {

namespace {

ClusterSpec largeInstance(int64_t servers)
{
  RandomInstanceOptions options;
  options.servers = static_cast<size_t>(servers);
  options.users = 64;
  options.resources = 4;
  return randomInstance(uint64_t{2024}, options);
}


void BM_GammaSerial(benchmark::State& state)
{
  const ClusterSpec spec = largeInstance(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gammaMatrixSerial(spec));
  }
}


void BM_GammaParallel(benchmark::State& state)
{
  const ClusterSpec spec = largeInstance(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gammaMatrix(spec));
  }
}


void BM_InitSerial(benchmark::State& state)
{
  const SharingModel model = SharingModel::rdm(largeInstance(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(initPerServerDrfSerial(model));
  }
}


void BM_InitParallel(benchmark::State& state)
{
  const SharingModel model = SharingModel::rdm(largeInstance(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(initPerServerDrf(model));
  }
}


ClusterSpec harnessInstance()
{
  RandomInstanceOptions options;
  options.servers = 4;
  options.users = 5;
  options.resources = 3;
  return randomInstance(uint64_t{7}, options);
}


void BM_HarnessSerial(benchmark::State& state)
{
  const ClusterSpec spec = harnessInstance();
  for (auto _ : state) {
    benchmark::DoNotOptimize(strategyHarnessSerial(
        spec, Mechanism::PSDSF_TDM, 0, state.range(0), 1));
  }
}


void BM_HarnessParallel(benchmark::State& state)
{
  const ClusterSpec spec = harnessInstance();
  for (auto _ : state) {
    benchmark::DoNotOptimize(strategyHarness(
        spec, Mechanism::PSDSF_TDM, 0, state.range(0), 1));
  }
}

} // namespace {

BENCHMARK(BM_GammaSerial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_GammaParallel)->Arg(1000)->Arg(10000);
BENCHMARK(BM_InitSerial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_InitParallel)->Arg(1000)->Arg(10000);
BENCHMARK(BM_HarnessSerial)->Arg(200);
BENCHMARK(BM_HarnessParallel)->Arg(200);

} // namespace psdsf {

BENCHMARK_MAIN();
