#include <benchmark/benchmark.h>

#include "covergff/eulerian.hpp"
#include "covergff/gff.hpp"
#include "covergff/network.hpp"
#include "covergff/rng.hpp"
#include "covergff/spectral.hpp"
#include "covergff/tree_coupling.hpp"
#include "covergff/walk.hpp"

namespace {

using namespace covergff;

void BM_GffSampleDense(benchmark::State& state) {
  const Network net = make_binary_tree(static_cast<int>(state.range(0)));
  const GffSampler sampler(net, GffSampler::Backend::kDense);
  Rng rng(1);
  std::vector<double> field;
  for (auto _ : state) {
    sampler.sample_into(rng, field);
    benchmark::DoNotOptimize(field.data());
  }
  state.SetComplexityN(net.vertex_count());
}
BENCHMARK(BM_GffSampleDense)->DenseRange(4, 10, 2)->Complexity();

void BM_GffSampleTree(benchmark::State& state) {
  const Network net = make_binary_tree(static_cast<int>(state.range(0)));
  const GffSampler sampler(net, GffSampler::Backend::kTree);
  Rng rng(1);
  std::vector<double> field;
  for (auto _ : state) {
    sampler.sample_into(rng, field);
    benchmark::DoNotOptimize(field.data());
  }
  state.SetComplexityN(net.vertex_count());
}
BENCHMARK(BM_GffSampleTree)->DenseRange(4, 10, 2)->Complexity();

void BM_WalkToInverseLocalTime(benchmark::State& state) {
  const Network net = make_binary_tree(6);
  Rng rng(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate_to_inverse_local_time(net, 1.0, rng).total_time);
  }
}
BENCHMARK(BM_WalkToInverseLocalTime);

void BM_CoverLine(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Network net = make_path(n, n / 2);
  Rng rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate_cover_time(net, n / 2, rng).cover_time);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_CoverLine)->RangeMultiplier(2)->Range(25, 200)->Complexity();

void BM_EffectiveResistance(benchmark::State& state) {
  const Network net = make_binary_tree(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        effective_resistance(net, 0, net.vertex_count() - 1));
  }
  state.SetComplexityN(net.vertex_count());
}
BENCHMARK(BM_EffectiveResistance)->DenseRange(4, 9, 1)->Complexity();

void BM_CompoundQuantile(benchmark::State& state) {
  const CompoundPoissonExponential law(
      static_cast<double>(state.range(0)));
  Rng rng(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(law.quantile(rng.uniform_open()));
  }
}
BENCHMARK(BM_CompoundQuantile)->Arg(1)->Arg(8)->Arg(64);

void BM_BestCircuitCount(benchmark::State& state) {
  EulerianMultigraph g(4);
  for (int u = 0; u < 4; ++u) {
    for (int v = 0; v < 4; ++v) {
      if (u != v) g.set_multiplicity(u, v, 1);
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_circuit_count(g).circuits);
  }
}
BENCHMARK(BM_BestCircuitCount);

void BM_BruteForceCircuits(benchmark::State& state) {
  EulerianMultigraph g(4);
  for (int u = 0; u < 4; ++u) {
    for (int v = 0; v < 4; ++v) {
      if (u != v) g.set_multiplicity(u, v, 1);
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_force_circuits(g, 12));
  }
}
BENCHMARK(BM_BruteForceCircuits);

}  // namespace

BENCHMARK_MAIN();
