// Copyright 2026 The bornstat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "bornstat/circuits.hpp"
#include "bornstat/families.hpp"
#include "bornstat/lab.hpp"
#include "bornstat/metrics.hpp"

namespace bornstat {
namespace {

ProbVector dirichlet(int n, std::uint64_t seed) {
    RandomStream s(seed, 0);
    return pseudo_indep_prob_vector({n, Underlying::gamma()}, s);
}

void BM_WalshHadamard(benchmark::State &state) {
    const ProbVector p = dirichlet(static_cast<int>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(walsh_hadamard(p));
}
BENCHMARK(BM_WalshHadamard)->DenseRange(8, 20, 4);

void BM_MmdFourier(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const ProbVector p = dirichlet(n, 1), q = dirichlet(n, 2);
    const KernelSpec k(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(mmd2_fourier(p, q, k));
}
BENCHMARK(BM_MmdFourier)->DenseRange(8, 16, 4);

void BM_MmdPopulation(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const ProbVector p = dirichlet(n, 1), q = dirichlet(n, 2);
    const KernelSpec k(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(mmd2_population(p, q, k));
}
BENCHMARK(BM_MmdPopulation)->DenseRange(6, 10, 2);

void BM_IqpState(benchmark::State &state) {
    RandomStream s(3, 0);
    const IqpCircuit c = random_iqp_circuit(static_cast<int>(state.range(0)), s);
    for (auto _ : state) benchmark::DoNotOptimize(iqp_prob_vector(c));
}
BENCHMARK(BM_IqpState)->DenseRange(8, 14, 2);

void BM_MpsSample(benchmark::State &state) {
    RandomStream s(4, 0);
    const int n = static_cast<int>(state.range(0));
    const MpsState psi = random_mps(n, n, s);
    for (auto _ : state) benchmark::DoNotOptimize(mps_sample(psi, s, 1000));
}
BENCHMARK(BM_MpsSample)->DenseRange(6, 14, 4);

void BM_MmdUnbiased(benchmark::State &state) {
    const int n = 8;
    RandomStream s(5, 0);
    const ProbVector p = dirichlet(n, 1);
    const SampleSet x = sample_prob_vector(p, s, static_cast<std::size_t>(state.range(0)));
    const SampleSet y = sample_prob_vector(p, s, static_cast<std::size_t>(state.range(0)));
    const KernelSpec k(1.0);
    const auto path = state.range(1) ? EstimatorPath::Spectral : EstimatorPath::Pairwise;
    for (auto _ : state) benchmark::DoNotOptimize(mmd2_unbiased(x, y, k, path));
}
BENCHMARK(BM_MmdUnbiased)->ArgsProduct({{50, 200, 1000}, {0, 1}});

void BM_PairwiseDirichletSd(benchmark::State &state) {
    const FamilySpec f = FamilySpec::parse("dirichlet");
    const RandomStream root(6, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pairwise_loss_moments(f, static_cast<int>(state.range(0)), LossSpec{}, 256, root, {1}));
    }
}
BENCHMARK(BM_PairwiseDirichletSd)->Arg(8)->Arg(12);

}  // namespace
}  // namespace bornstat

BENCHMARK_MAIN();
