#include <benchmark/benchmark.h>

#include "ripkit/ripcheck.hpp"

namespace {

void BM_RipOnSupport(benchmark::State& state) {
  const auto d = static_cast<std::uint32_t>(state.range(0));
  const auto a = ripkit::gen_matrix(32, 40 * d, d, 2.0, 3);
  const auto s = ripkit::SparseMatrix::from_binary(a);
  ripkit::RipOpts opts;
  opts.restarts = 8;
  opts.iters = 40;
  std::vector<std::uint32_t> support{0, 3, 7, 11};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ripkit::rip_on_support(s, support, 2.0, opts));
  }
}

void BM_SignEnum(benchmark::State& state) {
  const auto k = static_cast<std::uint32_t>(state.range(0));
  const auto a = ripkit::gen_matrix(k, 200, 12, 2.0, 5);
  const auto s = ripkit::SparseMatrix::from_binary(a);
  std::vector<std::uint32_t> support(k);
  for (std::uint32_t j = 0; j < k; ++j) support[j] = j;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ripkit::sign_vector_bound(s, support, 1.5));
  }
}

}  // namespace

BENCHMARK(BM_RipOnSupport)->Arg(16)->Arg(128)->Arg(1024);
BENCHMARK(BM_SignEnum)->Arg(4)->Arg(8)->Arg(12);

BENCHMARK_MAIN();
