// Serial reference kernels against their OpenMP versions. Set OMP_NUM_THREADS
// to control the parallel side.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fracnls/function_spaces.hpp"
#include "fracnls/kernels.hpp"

using namespace fracnls;

namespace {

std::vector<Complex> random_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Complex> v(n);
  for (auto& z : v) z = {normal(rng), normal(rng)};
  return v;
}

Grid grid_for(benchmark::State& state) {
  return Grid(2, static_cast<int>(state.range(0)), 10.0);
}

template <bool Parallel>
void BM_SchrodingerPhase(benchmark::State& state) {
  const Grid g = grid_for(state);
  auto data = random_values(g.size(), 1);
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::schrodinger_phase(data, g.k_squared(), 1e-3);
    else
      kernels::serial::schrodinger_phase(data, g.k_squared(), 1e-3);
    benchmark::DoNotOptimize(data.data());
  }
  state.SetItemsProcessed(state.iterations() * g.size());
}

template <bool Parallel>
void BM_TranslationPhase(benchmark::State& state) {
  const Grid g = grid_for(state);
  auto data = random_values(g.size(), 2);
  const double y[2] = {0.3, -0.2};
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::translation_phase(data, g, y);
    else
      kernels::serial::translation_phase(data, g, y);
    benchmark::DoNotOptimize(data.data());
  }
  state.SetItemsProcessed(state.iterations() * g.size());
}

template <bool Parallel>
void BM_ApplyNonlinearity(benchmark::State& state) {
  const Grid g = grid_for(state);
  const auto in = random_values(g.size(), 3);
  std::vector<Complex> out(g.size());
  const PowerNonlinearity nl{1.0, 2.5};
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::apply_nonlinearity(in, out, nl);
    else
      kernels::serial::apply_nonlinearity(in, out, nl);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * g.size());
}

template <bool Parallel>
void BM_PowerFlow(benchmark::State& state) {
  const Grid g = grid_for(state);
  auto data = random_values(g.size(), 4);
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::power_flow(data, 1.0, 2.0, 1e-4);
    else
      kernels::serial::power_flow(data, 1.0, 2.0, 1e-4);
    benchmark::DoNotOptimize(data.data());
  }
  state.SetItemsProcessed(state.iterations() * g.size());
}

template <bool Parallel>
void BM_RemainderIntegrand(benchmark::State& state) {
  const Grid g = grid_for(state);
  const auto u = random_values(g.size(), 5), tu = random_values(g.size(), 6);
  const auto v = random_values(g.size(), 7), tv = random_values(g.size(), 8);
  std::vector<Complex> out(g.size());
  const ThetaRule rule(32);
  const PowerNonlinearity nl{1.0, 2.0};
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::remainder_integrand(u, tu, v, tv, nl, rule, out);
    else
      kernels::serial::remainder_integrand(u, tu, v, tv, nl, rule, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * g.size());
}

template <bool Parallel>
void BM_AbsPow(benchmark::State& state) {
  const Grid g = grid_for(state);
  const auto in = random_values(g.size(), 9);
  std::vector<double> out(g.size());
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::abs_pow(in, out, 8.0 / 3.0);
    else
      kernels::serial::abs_pow(in, out, 8.0 / 3.0);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * g.size());
}

// End-to-end: the finite-difference Besov norm, parallel over translation nodes.
void BM_BesovNormFd(benchmark::State& state) {
  const Grid g = grid_for(state);
  std::mt19937_64 rng(10);
  std::normal_distribution<double> normal;
  Field f(g);
  for (auto& z : f.values()) z = {normal(rng), normal(rng)};
  const NormSpec spec{NormKind::besov_fd, 0.5, 2.0, 2.0, true};
  for (auto _ : state) benchmark::DoNotOptimize(besov_norm_fd(f, spec));
}

}  // namespace

#define FRACNLS_PAIR(name)                                                      \
  BENCHMARK(name<false>)->Name(#name "/serial")->RangeMultiplier(4)->Range(64, 1024); \
  BENCHMARK(name<true>)->Name(#name "/omp")->RangeMultiplier(4)->Range(64, 1024)

FRACNLS_PAIR(BM_SchrodingerPhase);
FRACNLS_PAIR(BM_TranslationPhase);
FRACNLS_PAIR(BM_ApplyNonlinearity);
FRACNLS_PAIR(BM_PowerFlow);
FRACNLS_PAIR(BM_RemainderIntegrand);
FRACNLS_PAIR(BM_AbsPow);
BENCHMARK(BM_BesovNormFd)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
