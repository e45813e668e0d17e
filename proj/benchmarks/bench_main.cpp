#include <benchmark/benchmark.h>

#include "metastab/cw_chain.hpp"
#include "metastab/disorder_stats.hpp"
#include "metastab/dynamics.hpp"
#include "metastab/exact_chain.hpp"

using namespace metastab;

static void BM_McStep(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const ModelParams P{N, 1.5, 0.1, 0.5};
  const Disorder J = Disorder::sample(P, 1);
  const Adjacency adj(J);
  Rng init = Rng::stream(1, StreamTag::Sampling, 0);
  McState st(sample_on_level(N / 2, N, init), adj);
  Rng rng = Rng::stream(1, StreamTag::Dynamics, 0);
  for (auto _ : state) benchmark::DoNotOptimize(mc_step(st, adj, P, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_McStep)->Arg(64)->Arg(1024)->Arg(8192);

static void BM_CouplingHistogram(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const Disorder J = Disorder::sample({N, 1.0, 0.0, 0.5}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(coupling_histogram(J).count.data());
  state.SetItemsProcessed(state.iterations() << N);
}
BENCHMARK(BM_CouplingHistogram)->Arg(14)->Arg(18)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_ExactHarmonic(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const ModelParams P{N, 1.5, 0.2, 0.5};
  const ExactChain X(Disorder::sample(P, 3), P);
  for (auto _ : state) benchmark::DoNotOptimize(harmonic_function(X, 2, N - 2).h_AB.data());
}
BENCHMARK(BM_ExactHarmonic)->Arg(10)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_LumpedChain(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const LumpedChain ch = build_lumped_chain(N, 1.5, 0.1);
    benchmark::DoNotOptimize(cw_mean_hitting(ch, N / 10, N - N / 10).log_exact);
  }
}
BENCHMARK(BM_LumpedChain)->Arg(1000)->Arg(100000)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
