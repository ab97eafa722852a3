#include <benchmark/benchmark.h>

#include "ripkit/matrix.hpp"

namespace {

void BM_GenMatrix(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto d = static_cast<std::uint32_t>(state.range(1));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto a = ripkit::gen_matrix(n, 64 * d, d, 2.0, seed++);
    benchmark::DoNotOptimize(a.supports.data());
  }
  state.SetItemsProcessed(state.iterations() * n * d);
}

void BM_ApplyOnSupport(benchmark::State& state) {
  const auto d = static_cast<std::uint32_t>(state.range(0));
  const auto a = ripkit::gen_matrix(64, 32 * d, d, 2.0, 7);
  const auto s = ripkit::SparseMatrix::from_binary(a);
  std::vector<std::uint32_t> support{0, 1, 2, 3};
  std::vector<double> x{0.5, -0.25, 0.125, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.apply_pnorm_on_support(support, x, 1.5));
  }
}

}  // namespace

BENCHMARK(BM_GenMatrix)->Args({64, 16})->Args({256, 64})->Args({64, 1024});
BENCHMARK(BM_ApplyOnSupport)->Arg(16)->Arg(256)->Arg(2048);

BENCHMARK_MAIN();
