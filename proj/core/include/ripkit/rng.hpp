#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace ripkit {

// Counter-based pseudo-random stream built on the splitmix64 finalizer.
// Streams are keyed by (seed, stream id); draws are pure functions of the
// key and an incrementing counter, so results are identical across
// platforms and independent of thread scheduling. All derived samplers
// (bounded integers, doubles, gaussians, subsets) use integer arithmetic
// or IEEE doubles only.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(seed + 0x9e3779b97f4a7c15ULL * (stream + 1))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Unbiased uniform draw from [0, bound) via Lemire's multiply-shift.
  std::uint64_t next_below(std::uint64_t bound) {
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      std::uint64_t t = (-bound) % bound;
      while (lo < t) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1]; safe as a log() argument.
  double next_double_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  bool next_bernoulli(double prob) { return next_double() < prob; }

  // Marsaglia polar method; explicit so that results do not depend on a
  // library's normal_distribution implementation.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double r = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * r;
    have_spare_ = true;
    return u * r;
  }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // Log-uniform over [lo, hi], lo > 0.
  double next_log_uniform(double lo, double hi) {
    return std::exp(next_uniform(std::log(lo), std::log(hi)));
  }

  int next_binomial(int n, double prob) {
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += next_bernoulli(prob) ? 1 : 0;
    return hits;
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Sorted uniform d-subset of [0, m) by partial Fisher-Yates over a sparse
// permutation map; O(d) memory even when m >> d.
std::vector<std::uint32_t> sample_subset(Rng& rng, std::uint32_t m,
                                         std::uint32_t d);

}  // namespace ripkit
