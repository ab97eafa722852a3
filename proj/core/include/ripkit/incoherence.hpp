#pragma once

#include <cstdint>
#include <vector>

#include "ripkit/matrix.hpp"

namespace ripkit {

struct IncoherenceReport {
  bool pass = false;
  double threshold = 0.0;  // eps * d / k
  std::uint32_t worst_i = 0;
  std::uint32_t worst_j = 0;
  std::uint32_t worst_overlap = 0;
};

// Pass iff every pair of distinct column supports overlaps in at most
// eps*d/k rows; reports the max-overlap pair. With early_exit the scan
// stops at the first violating pair (the verdict is already settled), so
// the reported pair is a witness rather than the maximum.
IncoherenceReport check_incoherence(const SparseBinaryMatrix& a,
                                    std::uint32_t k, double eps,
                                    bool early_exit = false);

struct LowerTailReport {
  std::uint32_t trials = 0;
  std::uint32_t violations = 0;
  double worst_ratio_p = 1.0;  // min of ||Ax||_p^p / ||x||_p^p observed
};

// Samples random k-sparse x (gaussian values on a uniform support) and
// checks ||Ax||_p^p >= (1 - eps) ||x||_p^p for each.
LowerTailReport lower_tail_check(const SparseBinaryMatrix& a, std::uint32_t k,
                                 double eps, std::uint32_t num_vectors,
                                 std::uint64_t seed);

}  // namespace ripkit
