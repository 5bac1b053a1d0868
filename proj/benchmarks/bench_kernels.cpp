// Copyright 2026 The qmeas Authors
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

#include <numbers>

#include <qmeas/chain.hpp>
#include <qmeas/framework.hpp>
#include <qmeas/oracle.hpp>
#include <qmeas/random.hpp>

namespace {

using namespace qmeas;

void ExpmHermitian(benchmark::State& state) {
  Rng rng(1);
  const CMatrix h = random_hermitian(state.range(0), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(expm_hermitian(h, 0.7));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(ExpmHermitian)->RangeMultiplier(4)->Range(16, 256)->Complexity();

void TraceProduct(benchmark::State& state) {
  Rng rng(2);
  const CMatrix a = random_gaussian(state.range(0), state.range(0), rng);
  const CMatrix b = random_gaussian(state.range(0), state.range(0), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trace_product(a, b));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(TraceProduct)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void StatTensorBuild(benchmark::State& state) {
  Rng rng(3);
  const Eigen::Index dim = state.range(0);
  const InstrumentModel instrument = random_instrument(dim, 2, rng);
  const DensityOperator omega = random_density(dim, rng);
  const MicroSystem system(RVector::Zero(2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(stat_tensor(instrument, system, omega, 1.3));
  }
}
BENCHMARK(StatTensorBuild)->Arg(16)->Arg(64);

void ClosedFormOverlap(benchmark::State& state) {
  const int half_length = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chain::log_overlap_minus_in_plus(half_length, 0.8, 1.2));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(ClosedFormOverlap)->RangeMultiplier(10)->Range(20, 20000)->Complexity();

void EnumeratedOverlap(benchmark::State& state) {
  const int half_length = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        oracle::enumerate_overlap(half_length, 0.8, 1.2, oracle::OverlapKind::kMinusInPlus));
  }
}
BENCHMARK(EnumeratedOverlap)->DenseRange(4, 8, 2);

void PerturbedOverlap(benchmark::State& state) {
  const chain::ChainParams base(state.range(0), 0.8, std::numbers::pi / 2.0);
  const chain::PerturbedChain chain = chain::perturb_chain_state(base, {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(chain::overlap_minus_in_plus(chain));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(PerturbedOverlap)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void KickConjugate(benchmark::State& state) {
  const int half_length = state.range(0);
  const CMatrix chain_state = oracle::dense_chain_state(half_length, 0.9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle::kick_conjugate(chain_state, half_length, 1.1));
  }
}
BENCHMARK(KickConjugate)->DenseRange(2, 5, 1);

void TraversalRecord(benchmark::State& state) {
  const chain::ChainParams params(state.range(0), 0.7, 1.1);
  const auto potential = chain::PotentialSpec::rectangular(-1.0, 0.0, 1.1);
  const auto packet = chain::PacketSpec::bump(-1.0, 0.0, 801);
  const oracle::GridConfig grid{-1.0, 0.0, 801, 0.5};
  const double tau = chain::critical_time(state.range(0), 0.0, -1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        oracle::time_resolved_stats(params, potential, packet, grid, 0.5 * tau));
  }
}
BENCHMARK(TraversalRecord)->DenseRange(3, 7, 2);

}  // namespace

BENCHMARK_MAIN();
