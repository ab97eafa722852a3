#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ripkit/matrix.hpp"

namespace ripkit {

// Two-sided estimate of min/max of ||A_S x||_p / ||x||_p over the unit
// p-sphere of a support. [lo_min, hi_min] brackets the true minimum and
// [lo_max, hi_max] the true maximum; hi_max may be +inf when only a
// heuristic ran. The certification level is always labelled.
struct RipEstimate {
  std::vector<std::uint32_t> support;
  double p = 2.0;
  double lo_min = 0.0;
  double hi_min = 0.0;
  double lo_max = 0.0;
  double hi_max = 0.0;
  enum class Method { grid, sign_enum, heuristic } method = Method::heuristic;
  bool converged = true;  // heuristic extremizer diagnostics
  double grid_band = 0.0;

  double distortion() const;  // hi_max / hi_min after min-normalization
};

// Dense angular grid over the unit p-sphere of the support's coordinate
// space (|support| <= 3). The returned bounds carry a certified error band
// from the grid's Lipschitz modulus.
RipEstimate brute_oracle(const SparseMatrix& a,
                         const std::vector<std::uint32_t>& support, double p,
                         std::uint32_t grid_res = 512);

// Max of ||A_S x||_p / ||x||_p over sign vectors: exhaustive over
// {-1,0,1}^k when 3^k <= 1e6, otherwise the row-sign-matched family plus
// seeded random signs. Always a certified lower bound on the max ratio.
double sign_vector_bound(const SparseMatrix& a,
                         const std::vector<std::uint32_t>& support, double p);
// Same, also returning the attaining sign vector.
std::pair<double, std::vector<double>> sign_vector_argmax(
    const SparseMatrix& a, const std::vector<std::uint32_t>& support, double p);

struct RipOpts {
  std::uint32_t restarts = 200;
  std::uint32_t iters = 100;
  double step = 1.0;
  std::uint64_t seed = 0;
};

// Projected-gradient ascent/descent of ||A_S x||_p^p on the unit p-sphere
// with seeded restarts; extrema merged with sign_vector_bound. Method is
// tagged heuristic and non-convergence is reported, never silent.
RipEstimate rip_on_support(const SparseMatrix& a,
                           const std::vector<std::uint32_t>& support, double p,
                           const RipOpts& opts = {});

struct RipSampledReport {
  double worst_min = 0.0;
  double worst_max = 0.0;
  std::vector<std::uint32_t> worst_min_support;
  std::vector<std::uint32_t> worst_max_support;
  std::uint32_t num_supports = 0;
  bool all_converged = true;
};

// Uniform random k-supports, per-support estimates folded by min/max.
// Deterministic per (seed, support index, restart index).
RipSampledReport rip_sampled(const SparseMatrix& a, std::uint32_t k, double p,
                             std::uint32_t num_supports, const RipOpts& opts,
                             std::uint64_t seed);

}  // namespace ripkit
