// Copyright 2026 The cartan authors
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

#include "cartan/hwmodel.hpp"
#include "cartan/oracle.hpp"

using namespace cartan;

namespace {

C4 random_unitary(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(-kPi, kPi);
  auto one = [&] { return from_zyz({a(rng), a(rng), a(rng)}); };
  return kron(one(), one()) * canonical_gate(a(rng) / 4, a(rng) / 6, a(rng) / 8) *
         kron(one(), one());
}

std::vector<C4> targets(std::size_t n) {
  std::mt19937_64 rng(42);
  std::vector<C4> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_unitary(rng));
  return out;
}

// SWAP into Da(pi/d): compile work should not grow with the invocation count.
void BM_CompileSwapDa(benchmark::State& state) {
  const BasisGate b = BasisGate::da(kPi / static_cast<double>(state.range(0)));
  int count = 0;
  for (auto _ : state) {
    const SynthesisPlan p = compile_2q(gates::SWAP(), b);
    count = p.basis_count;
    benchmark::DoNotOptimize(p.steps.data());
  }
  state.counters["basis_count"] = count;
}
BENCHMARK(BM_CompileSwapDa)->Arg(4)->Arg(8)->Arg(28)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_CompileCountSwapDa(benchmark::State& state) {
  const BasisGate b = BasisGate::da(kPi / static_cast<double>(state.range(0)));
  const CartanCoord swap = cartan_coord(gates::SWAP());
  for (auto _ : state) benchmark::DoNotOptimize(compile_count(swap, b));
}
BENCHMARK(BM_CompileCountSwapDa)->Arg(8)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_CompileRandom(benchmark::State& state) {
  const auto us = targets(64);
  const BasisGate bases[] = {BasisGate::da(kPi / 8), BasisGate::db(kPi / 4, kPi / 8),
                             BasisGate::dc(0.5, 0.3, 0.1)};
  const BasisGate& b = bases[state.range(0)];
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(compile_2q(us[i++ % us.size()], b).basis_count);
  state.SetLabel(b.label);
}
BENCHMARK(BM_CompileRandom)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

void BM_KakDecompose(benchmark::State& state) {
  const auto us = targets(64);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(kak_decompose(us[i++ % us.size()]).coord.x);
}
BENCHMARK(BM_KakDecompose);

void BM_TranspileQft(benchmark::State& state) {
  const Circuit c = gen_qft(static_cast<int>(state.range(0)));
  const std::vector<BasisGate> bases{BasisGate::da(kPi / 16)};
  const HardwareModel model;
  TranspileOptions opts;
  opts.workers = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        transpile_circuit(c, bases, Objective::MaxFidelity, model, opts).report.basis_count);
}
BENCHMARK(BM_TranspileQft)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_DesignSweepQaoa(benchmark::State& state) {
  const std::vector<Benchmark> bench{{"qaoa10", gen_qaoa(10)}};
  std::vector<InstructionSet> grid;
  const auto cells = state.range(0);
  for (long k = 1; k <= cells; ++k)
    grid.push_back({{BasisGate::da(kPi / 4 * static_cast<double>(k) / static_cast<double>(cells))}});
  const HardwareModel model;
  for (auto _ : state) benchmark::DoNotOptimize(sweep_design_space(bench, grid, model).size());
}
BENCHMARK(BM_DesignSweepQaoa)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_BruteForceSwap(benchmark::State& state) {
  const BasisGate cx = BasisGate::da(kPi / 4);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_min_count(gates::SWAP(), cx, 4));
}
BENCHMARK(BM_BruteForceSwap)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
