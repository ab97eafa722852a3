#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ripkit/matrix.hpp"

namespace ripkit {

// All audits are pure functions of the matrix and parameters; they check
// necessary conditions of (k, D)-RIP-p on an instance and report slack,
// never proving the property itself.

struct ColumnNormAudit {
  bool pass = false;
  std::uint32_t worst_col = 0;
  double worst_sum = 0.0;   // p-th power sum of the worst column
  double slack_low = 0.0;   // min over columns of (sum - 1)
  double slack_high = 0.0;  // min over columns of (D^p - sum)
};

// Every column's p-th power sum must lie in [1, D^p].
ColumnNormAudit audit_column_pnorms(const SparseMatrix& a, double p, double D);

struct RowOrderStatsAudit {
  bool pass = false;
  std::uint32_t worst_row = 0;
  std::uint32_t worst_t = 0;
  double worst_value = 0.0;
  double worst_bound = 0.0;
  double min_slack = 0.0;
};

// b_{i,t} (t-th largest |entry| of row i) must satisfy
// b_{i,t} <= D t^(1/p-1) for t <= k and <= D k^(1/p-1) beyond; rows are
// partially sorted up to t = k+1 only.
RowOrderStatsAudit audit_row_order_stats(const SparseMatrix& a, double p,
                                         double D, std::uint32_t k);

struct FrobeniusAudit {
  bool pass = false;
  double sum_squares = 0.0;
  double lower_bound = 0.0;  // active for 1 < p <= 2
  double upper_bound = 0.0;  // active for p >= 2
};

FrobeniusAudit audit_frobenius(const SparseMatrix& a, double p, double D,
                               std::uint32_t k);

struct DimensionBound {
  double branch1 = 0.0;
  double branch2 = 0.0;
  double m_min = 0.0;  // the theorem guarantees m exceeds at least one branch
};

struct BoundConstants {
  double c1 = 1.0;
  double c2 = 1.0;
};

// Evaluates both branches of the dimension lower bound with configurable
// leading constants. p = 2 is rejected: the (k/m)^(2/p-1) factor
// degenerates to 1 and no lower bound on m can be deduced there.
DimensionBound dimension_bound(std::uint32_t n, std::uint32_t k, double p,
                               double D, const BoundConstants& c = {});

double sparsity_bound(std::uint32_t k, double p, double D);  // k^(p-1)/D^p

struct SparsityAudit {
  bool pass = false;
  bool m_exceeds_n_over_k = false;
  std::uint32_t max_column_sparsity = 0;
  double d_min = 0.0;
};

// Either m > n/k or the max column sparsity is >= k^(p-1)/D^p.
SparsityAudit check_sparsity_bound(const SparseMatrix& a, std::uint32_t k,
                                   double p, double D);

struct PropertyReport {
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  double worst_margin = 0.0;  // min over samples of (rhs - lhs)
  bool pass = false;
};

// | |a+b|^p - |a|^p - |b|^p | <= C |a| |b|^(p-1) for p in [1,2], sampled
// with adversarial strata (b -> 0, b -> -a, |b| -> inf) plus the
// telescoped n-term form.
PropertyReport scalar_inequality_test(std::uint64_t samples,
                                      std::uint64_t seed, double C = 3.0);

// sum c_i a_i^(p-1) <= ||c||_{1/(2-p)} ||a||_1^(p-1) for nonnegative a, c
// and p in (1,2), plus the all-ones corollary.
PropertyReport holder_inequality_test(std::uint64_t samples,
                                      std::uint64_t seed);

struct IntegralSumCheck {
  double lhs = 0.0;        // sum_{b=2}^{ceil(k/l)} ((b-1)l+1)^(-1/p)
  double rhs_scale = 0.0;  // k^(1-1/p) / l
  double ratio = 0.0;
};

IntegralSumCheck integral_sum_check(std::uint32_t k, std::uint32_t ell,
                                    double p);

// Max-factored p-norm that stays finite for huge exponents.
double pnorm_stable(const std::vector<double>& v, double q);

}  // namespace ripkit
