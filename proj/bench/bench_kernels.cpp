// Serial reference kernels against their OpenMP counterparts. Run with
// OMP_NUM_THREADS set to the core count; on a single core the two paths
// should be within noise of each other.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sptvqe/gates.hpp"
#include "sptvqe/kernels.hpp"
#include "sptvqe/spectra.hpp"

namespace {

using namespace sptvqe;

std::vector<Complex> random_amps(int n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<Complex> v(std::size_t{1} << n);
  for (auto& a : v) a = Complex(g(rng), g(rng));
  return v;
}

template <bool Parallel>
void BM_apply_2q(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto amps = random_amps(n);
  const Mat4 m = gates::so4_gate({{0.1, 0.2, 0.3, 0.4, 0.5, 0.6}}).mat4();
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::omp::apply_2q(amps, 2, n - 3, m);
    } else {
      kernels::serial::apply_2q(amps, 2, n - 3, m);
    }
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(amps.size()));
}

template <bool Parallel>
void BM_apply_eswap(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto amps = random_amps(n);
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::omp::apply_eswap(amps, 4, 5, 0.7);
    } else {
      kernels::serial::apply_eswap(amps, 4, 5, 0.7);
    }
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(amps.size()));
}

template <bool Parallel>
void BM_inner_product(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = random_amps(n);
  const auto b = random_amps(n);
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(kernels::omp::inner_product(a, b));
    } else {
      benchmark::DoNotOptimize(kernels::serial::inner_product(a, b));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.size()));
}

template <bool Parallel>
void BM_heisenberg_matvec(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SparseOperator H = build_hamiltonian({n, 1.0, 0.1, Boundary::Open});
  const auto in = random_amps(n);
  std::vector<Complex> out(in.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::omp::heisenberg_matvec(H.bonds(), in, out);
    } else {
      kernels::serial::heisenberg_matvec(H.bonds(), in, out);
    }
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.size()));
}

}  // namespace

BENCHMARK(BM_apply_2q<false>)->Arg(12)->Arg(16)->Arg(20);
BENCHMARK(BM_apply_2q<true>)->Arg(12)->Arg(16)->Arg(20);
BENCHMARK(BM_apply_eswap<false>)->Arg(12)->Arg(16)->Arg(20);
BENCHMARK(BM_apply_eswap<true>)->Arg(12)->Arg(16)->Arg(20);
BENCHMARK(BM_inner_product<false>)->Arg(16)->Arg(20);
BENCHMARK(BM_inner_product<true>)->Arg(16)->Arg(20);
BENCHMARK(BM_heisenberg_matvec<false>)->Arg(12)->Arg(16);
BENCHMARK(BM_heisenberg_matvec<true>)->Arg(12)->Arg(16);

BENCHMARK_MAIN();
