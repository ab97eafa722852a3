#include <benchmark/benchmark.h>

#include "ripkit/recover.hpp"
#include "ripkit/rng.hpp"

namespace {

void BM_ProjectPBall(benchmark::State& state) {
  const auto m = static_cast<std::uint32_t>(state.range(0));
  const double p = static_cast<double>(state.range(1)) / 10.0;
  ripkit::Rng rng(5, 0);
  std::vector<double> v(m);
  for (auto& x : v) x = rng.next_gaussian();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ripkit::project_p_ball(v, 1.0, p));
  }
  state.SetItemsProcessed(state.iterations() * m);
}

}  // namespace

BENCHMARK(BM_ProjectPBall)
    ->Args({128, 10})
    ->Args({128, 15})
    ->Args({128, 20})
    ->Args({128, 30})
    ->Args({4096, 15});

BENCHMARK_MAIN();
