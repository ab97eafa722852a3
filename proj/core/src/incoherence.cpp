#include "ripkit/incoherence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "ripkit/rng.hpp"

namespace ripkit {

namespace {

// All pairwise overlaps at once by walking row occupancy lists; early exit
// as soon as some pair exceeds the threshold. Falls back to a hash map
// when n*n counters would be too large.
IncoherenceReport count_overlaps(const SparseBinaryMatrix& a,
                                 double threshold, bool early_exit) {
  IncoherenceReport rep;
  rep.threshold = threshold;
  const std::uint32_t n = a.n;

  std::vector<std::vector<std::uint32_t>> row_cols(a.m);
  for (std::uint32_t j = 0; j < n; ++j) {
    for (auto r : a.supports[j]) row_cols[r].push_back(j);
  }

  const bool dense_ok = static_cast<std::uint64_t>(n) * n <= (1u << 24);
  std::vector<std::uint32_t> dense;
  std::unordered_map<std::uint64_t, std::uint32_t> sparse;
  if (dense_ok) dense.assign(static_cast<std::size_t>(n) * n, 0);

  rep.pass = true;
  for (const auto& cols : row_cols) {
    for (std::size_t x = 0; x < cols.size(); ++x) {
      for (std::size_t y = x + 1; y < cols.size(); ++y) {
        const std::uint32_t i = cols[x], j = cols[y];
        std::uint32_t c;
        if (dense_ok) {
          c = ++dense[static_cast<std::size_t>(i) * n + j];
        } else {
          c = ++sparse[(static_cast<std::uint64_t>(i) << 32) | j];
        }
        if (c > rep.worst_overlap) {
          rep.worst_overlap = c;
          rep.worst_i = i;
          rep.worst_j = j;
          if (static_cast<double>(c) > threshold) {
            rep.pass = false;
            if (early_exit) return rep;  // counts only grow
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace

IncoherenceReport check_incoherence(const SparseBinaryMatrix& a,
                                    std::uint32_t k, double eps,
                                    bool early_exit) {
  a.validate();
  if (k == 0 || k > a.n)
    throw std::invalid_argument("check_incoherence: need 1 <= k <= n");
  if (!(eps > 0.0)) throw std::invalid_argument("check_incoherence: eps > 0");
  const double threshold = eps * a.d / k;
  return count_overlaps(a, threshold, early_exit);
}

LowerTailReport lower_tail_check(const SparseBinaryMatrix& a, std::uint32_t k,
                                 double eps, std::uint32_t num_vectors,
                                 std::uint64_t seed) {
  if (k == 0 || k > a.n)
    throw std::invalid_argument("lower_tail_check: need 1 <= k <= n");
  const SparseMatrix s = SparseMatrix::from_binary(a);
  LowerTailReport rep;
  rep.trials = num_vectors;
  for (std::uint32_t t = 0; t < num_vectors; ++t) {
    Rng rng(seed, t);
    auto support = sample_subset(rng, a.n, k);
    std::vector<double> x(k);
    double xn = 0.0;
    for (auto& v : x) {
      v = rng.next_gaussian();
      xn += std::pow(std::abs(v), a.p);
    }
    if (xn == 0.0) continue;
    const double axn = s.apply_pnorm_on_support(support, x, a.p);
    const double ratio_p = std::pow(axn, a.p) / xn;
    rep.worst_ratio_p = std::min(rep.worst_ratio_p, ratio_p);
    if (ratio_p < (1.0 - eps)) rep.violations++;
  }
  return rep;
}

}  // namespace ripkit
