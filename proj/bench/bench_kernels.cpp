// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numeric>
#include <random>

#include "sparsedom/czo.hpp"
#include "sparsedom/kernels.hpp"

namespace {

using namespace sparsedom;

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = N(rng);
  return v;
}

template <bool Parallel>
void BM_Gather(benchmark::State& st) {
  const std::size_t n = static_cast<std::size_t>(st.range(0));
  const auto g = noise(n, 1);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<double> out(n);
  auto coef = [](std::size_t i, std::size_t j) { return i == j ? 0.0 : 1.0 / (double(i) - double(j)); };
  for (auto _ : st) {
    if constexpr (Parallel)
      kernels::gather_apply_omp(coef, g, idx, idx, out);
    else
      kernels::gather_apply_serial(coef, g, idx, idx, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(n * n));
}

template <bool Parallel>
void BM_Circulant(benchmark::State& st) {
  const std::size_t n = static_cast<std::size_t>(st.range(0));
  const auto g = noise(n, 2), k = noise(n, 3);
  std::vector<double> out(n);
  for (auto _ : st) {
    if constexpr (Parallel)
      kernels::odd_circulant_apply_omp(k, g, out);
    else
      kernels::odd_circulant_apply_serial(k, g, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_ScatterMax(benchmark::State& st) {
  const GridSpec grid = GridSpec::make(2, static_cast<int>(st.range(0)), 1.0);
  std::vector<CellBox> boxes;
  for (int k = 0; k <= grid.finest_level; ++k)
    for (const auto& q : cubes_at_level(grid, k)) boxes.push_back(q.cells());
  const auto vals = noise(boxes.size(), 4);
  std::vector<double> out(grid.cell_count());
  for (auto _ : st) {
    std::fill(out.begin(), out.end(), 0.0);
    if constexpr (Parallel)
      kernels::scatter_max_omp(boxes, vals, out);
    else
      kernels::scatter_max_serial(boxes, vals, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_Apply(benchmark::State& st) {
  const GridSpec grid = GridSpec::make(1, static_cast<int>(st.range(0)), 1.0);
  const CZOperator t(make_kernel("hilbert", grid), grid);
  const SampledFunction f(grid, noise(grid.cell_count(), 5));
  for (auto _ : st) benchmark::DoNotOptimize(Parallel ? t.apply(f) : t.apply_serial(f));
}

}  // namespace

BENCHMARK(BM_Gather<false>)->Arg(256)->Arg(1024);
BENCHMARK(BM_Gather<true>)->Arg(256)->Arg(1024);
BENCHMARK(BM_Circulant<false>)->Arg(1024)->Arg(4096);
BENCHMARK(BM_Circulant<true>)->Arg(1024)->Arg(4096);
BENCHMARK(BM_ScatterMax<false>)->Arg(6)->Arg(8);
BENCHMARK(BM_ScatterMax<true>)->Arg(6)->Arg(8);
BENCHMARK(BM_Apply<false>)->Arg(10)->Arg(12);
BENCHMARK(BM_Apply<true>)->Arg(10)->Arg(12);

BENCHMARK_MAIN();
