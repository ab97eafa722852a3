#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ripkit/matrix.hpp"
#include "ripkit/ripcheck.hpp"

namespace ripkit {

struct RecoveryProblem {
  SparseMatrix a;
  std::vector<double> y;
  double p = 2.0;
  double eps = 0.0;  // residual radius
  std::uint32_t k = 0;

  void validate() const;
};

struct SolveOpts {
  int max_iter = 100000;
  double tol = 1e-8;   // duality gap and feasibility, relative
  double rho = 1.0;    // primal/dual step balance
  std::uint64_t seed = 0;
};

struct ClaimRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool pass = false;
  bool applicable = true;
};

struct RecoveryResult {
  std::vector<double> x_hat;
  double residual_p = 0.0;  // ||A x_hat - y||_p
  double objective = 0.0;   // ||x_hat||_1
  double dual_objective = 0.0;
  double gap = 0.0;  // certified optimality gap at exit
  int iterations = 0;
  bool converged = false;
  std::vector<ClaimRecord> claim_ledger;  // filled by audit_recovery_claims
};

// min ||x||_1 s.t. ||A x - y||_p <= eps via a primal-dual splitting:
// soft-thresholding steps on x alternate with projections of the dual
// residual variable onto the p-norm ball. Convergence is certified by a
// feasibility check plus a duality gap from the scaled dual iterate;
// non-convergence within max_iter is flagged, never silent.
RecoveryResult l1_minimize(const RecoveryProblem& prob,
                           const SolveOpts& opts = {});

// Euclidean projection onto {u : ||u||_p <= radius}. Closed forms at
// p = 1 and p = 2; otherwise a Lagrange-multiplier root-find with
// per-coordinate scalar Newton solves.
std::vector<double> project_p_ball(const std::vector<double>& v, double radius,
                                   double p);

struct GuaranteeCheck {
  double lhs = 0.0;   // ||x - x_hat||_p
  double rhs = 0.0;   // C1/k^(1-1/p) * ||x_tail||_1 + C2 * eps
  double slack = 0.0;
  bool pass = false;
};

// S is the top-k coordinate set of |x| (larger magnitude first, then lower
// index).
GuaranteeCheck check_guarantee(const std::vector<double>& x,
                               const std::vector<double>& x_hat,
                               std::uint32_t k, double p, double eps,
                               double C1, double C2);

struct ClaimAuditOpts {
  double alpha = 0.0;  // 0 -> default (2D)^(p/(p-1)) with D = 1.2
  double tol = 1e-8;
  // RIP estimate for an (alpha+1)k support with distortion below
  // alpha^(1-1/p); enables the conditional recovery-error row.
  std::optional<RipEstimate> rip;
};

// Numerically replays the proof-chain inequalities on one instance:
// the residual triangle bound, the tail-optimality bound, the block-tail
// sums, and (when a RIP estimate is supplied) the recovery-error bound.
// x_hat must be feasible within tolerance.
std::vector<ClaimRecord> audit_recovery_claims(
    const std::vector<double>& x, const std::vector<double>& x_hat,
    const SparseMatrix& a, const std::vector<double>& y, double eps,
    std::uint32_t k, double p, const ClaimAuditOpts& opts = {});

using RecoverFn = std::function<std::vector<double>(
    const std::vector<double>& y, double eps)>;

struct ConverseReport {
  bool finite = true;
  double c2_estimate = 0.0;
  double opnorm_lower_bound = 0.0;
  std::uint32_t trials = 0;
  // Witness of a ||Ax||_p = 0 failure (e.g. a zero column).
  std::optional<std::vector<std::uint32_t>> failure_support;
};

// The converse argument: for k-sparse x take e = -Ax (so y = 0); any
// recovery meeting the lp/l1 guarantee must return 0, which forces
// ||x||_p <= C2 ||Ax||_p. Reports the max ratio as an empirical C2 lower
// bound. Requires a sampled check that ||A||_p <= 1 and that
// recover_fn(0) = 0; a vanishing ||Ax||_p is reported as a failure
// witness, not an estimate.
ConverseReport rip_from_recovery(const SparseMatrix& a,
                                 const RecoverFn& recover_fn, std::uint32_t k,
                                 double p, std::uint32_t trials,
                                 std::uint64_t seed);

}  // namespace ripkit
