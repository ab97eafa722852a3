#include "ripkit/recover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ripkit/pmath.hpp"
#include "ripkit/rng.hpp"
#include "ripkit/stats.hpp"

namespace ripkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pnorm(const std::vector<double>& v, double p) {
  return vector_pnorm(v, p);
}

double qnorm_dual(const std::vector<double>& v, double p) {
  if (p == 1.0) {
    double mx = 0.0;
    for (double x : v) mx = std::max(mx, std::abs(x));
    return mx;
  }
  return vector_pnorm(v, p / (p - 1.0));
}

// Projection onto the l1 ball (Duchi et al. style, sort-based).
std::vector<double> project_l1(const std::vector<double>& v, double r) {
  std::vector<double> mag(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) mag[i] = std::abs(v[i]);
  std::vector<double> sorted(mag);
  std::sort(sorted.rbegin(), sorted.rend());
  double cum = 0.0, theta = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cum += sorted[j];
    const double cand = (cum - r) / static_cast<double>(j + 1);
    if (cand < sorted[j]) theta = cand;
  }
  theta = std::max(theta, 0.0);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = std::max(mag[i] - theta, 0.0);
    out[i] = v[i] >= 0.0 ? w : -w;
  }
  return out;
}

// Warm-startable projector onto {u : ||u||_p <= r}; the same multiplier
// is a good initial guess across consecutive solver iterations.
class PBallProjector {
 public:
  explicit PBallProjector(double p) : p_(p) {}

  void project(const std::vector<double>& v, double r, std::vector<double>& out) {
    if (r < 0.0) throw std::invalid_argument("project_p_ball: radius >= 0");
    out.resize(v.size());
    if (r == 0.0) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    if (pnorm(v, p_) <= r) {
      out = v;
      return;
    }
    if (p_ == 1.0) {
      out = project_l1(v, r);
      return;
    }
    if (p_ == 2.0) {
      const double n2 = pnorm(v, 2.0);
      const double s = r / n2;
      for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * s;
      return;
    }
    general_project(v, r, out);
  }

 private:
  double p_;
  double lambda_ = 0.0;  // warm start across calls

  // Root of w + lambda p w^(p-1) = a for w in (0, a]; Newton from the
  // right endpoint converges monotonically for both p < 2 and p > 2.
  double solve_w(double a, double lambda) const {
    if (a <= 0.0) return 0.0;
    double w = a;
    for (int it = 0; it < 64; ++it) {
      const double wp1 = pow_abs(w, p_ - 1.0);
      const double f = w + lambda * p_ * wp1 - a;
      if (std::abs(f) <= 1e-15 * a) break;
      const double wp2 = w > 0.0 ? wp1 / w : 0.0;
      const double fp = 1.0 + lambda * p_ * (p_ - 1.0) * wp2;
      double next = w - f / fp;
      if (!(next > 0.0)) next = w * 0.5;
      if (std::abs(next - w) <= 1e-16 * a) {
        w = next;
        break;
      }
      w = next;
    }
    return w;
  }

  // Multiplier search: phi(lambda) = sum w_i(lambda)^p - r^p is strictly
  // decreasing; Newton steps with a bisection-safeguarded bracket.
  void general_project(const std::vector<double>& v, double r,
                       std::vector<double>& out) {
    const double rp = std::pow(r, p_);
    std::vector<double> w(v.size());

    auto phi = [&](double lambda, double* dphi) {
      double acc = 0.0, der = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double wi = solve_w(std::abs(v[i]), lambda);
        w[i] = wi;
        if (wi > 0.0) {
          const double wp1 = pow_abs(wi, p_ - 1.0);
          acc += wp1 * wi;
          if (dphi != nullptr) {
            const double wp2 = wp1 / wi;
            // d(w^p)/dlambda = p w^(p-1) * dw/dlambda
            der += p_ * wp1 * (-p_ * wp1 / (1.0 + lambda * p_ * (p_ - 1.0) * wp2));
          }
        }
      }
      if (dphi != nullptr) *dphi = der;
      return acc - rp;
    };

    double lo = 0.0;
    double hi = std::max(lambda_, 1e-12);
    while (phi(hi, nullptr) > 0.0) {
      lo = hi;
      hi *= 4.0;
      if (hi > 1e300) throw std::runtime_error("project_p_ball: bracket failed");
    }
    double lambda = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
      double der = 0.0;
      const double f = phi(lambda, &der);
      if (std::abs(f) <= 1e-13 * rp || hi - lo <= 1e-15 * std::max(1.0, hi)) break;
      if (f > 0.0) {
        lo = lambda;
      } else {
        hi = lambda;
      }
      double next = der < 0.0 ? lambda - f / der : lo;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      lambda = next;
    }
    lambda_ = lambda;
    phi(lambda, nullptr);
    for (std::size_t i = 0; i < v.size(); ++i) {
      out[i] = v[i] >= 0.0 ? w[i] : -w[i];
    }
  }
};

}  // namespace

void RecoveryProblem::validate() const {
  if (a.rows != y.size())
    throw std::invalid_argument("recovery problem: |y| != rows");
  if (p < 1.0) throw std::invalid_argument("recovery problem: p >= 1");
  if (eps < 0.0) throw std::invalid_argument("recovery problem: eps >= 0");
}

std::vector<double> project_p_ball(const std::vector<double>& v, double radius,
                                   double p) {
  if (p < 1.0) throw std::invalid_argument("project_p_ball: p >= 1");
  PBallProjector proj(p);
  std::vector<double> out;
  proj.project(v, radius, out);
  return out;
}

namespace {

double estimate_opnorm2(const SparseMatrix& a, std::uint64_t seed) {
  if (a.nnz() == 0) return 0.0;
  Rng rng(seed, 0x09e2);
  std::vector<double> x(a.cols), ax, atax;
  for (auto& v : x) v = rng.next_gaussian();
  double norm = 0.0;
  for (int it = 0; it < 60; ++it) {
    a.apply(x, ax);
    a.apply_adjoint(ax, atax);
    norm = std::sqrt(std::inner_product(atax.begin(), atax.end(),
                                        atax.begin(), 0.0));
    if (norm == 0.0) return 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = atax[i] / norm;
  }
  return std::sqrt(norm) * 1.02;  // slight inflation for safety
}

}  // namespace

RecoveryResult l1_minimize(const RecoveryProblem& prob, const SolveOpts& opts) {
  prob.validate();
  const auto& A = prob.a;
  const auto n = static_cast<std::size_t>(A.cols);
  const auto m = static_cast<std::size_t>(A.rows);
  const double p = prob.p;

  RecoveryResult res;
  res.x_hat.assign(n, 0.0);

  const double ynorm = pnorm(prob.y, p);
  if (ynorm <= prob.eps) {
    // x = 0 is feasible and optimal.
    res.converged = true;
    res.residual_p = ynorm;
    res.objective = 0.0;
    res.gap = 0.0;
    return res;
  }

  const double L = estimate_opnorm2(A, opts.seed);
  if (L == 0.0) {
    // A == 0 and ||y||_p > eps: infeasible.
    res.converged = false;
    res.residual_p = ynorm;
    return res;
  }
  const double tau = opts.rho / L;
  const double sigma = 1.0 / (opts.rho * L);

  std::vector<double> x(n, 0.0), x_bar(n, 0.0), w(m, 0.0);
  std::vector<double> ax_bar, z, shifted, projected(m), ax;
  PBallProjector projector(p);

  const double feas_scale = std::max(1.0, ynorm);
  const int check_every = 16;

  for (int it = 1; it <= opts.max_iter; ++it) {
    // Dual ascent on w with resolvent of the ball indicator's conjugate.
    A.apply(x_bar, ax_bar);
    for (std::size_t i = 0; i < m; ++i) ax_bar[i] = w[i] + sigma * ax_bar[i];
    if (prob.eps == 0.0) {
      for (std::size_t i = 0; i < m; ++i)
        w[i] = ax_bar[i] - sigma * prob.y[i];
    } else {
      shifted.resize(m);
      for (std::size_t i = 0; i < m; ++i)
        shifted[i] = ax_bar[i] / sigma - prob.y[i];
      projector.project(shifted, prob.eps, projected);
      for (std::size_t i = 0; i < m; ++i)
        w[i] = ax_bar[i] - sigma * (prob.y[i] + projected[i]);
    }

    // Primal descent: soft threshold.
    A.apply_adjoint(w, z);
    for (std::size_t j = 0; j < n; ++j) {
      const double u = x[j] - tau * z[j];
      const double mag = std::abs(u) - tau;
      const double xn = mag > 0.0 ? (u > 0.0 ? mag : -mag) : 0.0;
      x_bar[j] = 2.0 * xn - x[j];
      x[j] = xn;
    }

    if (it % check_every == 0 || it == opts.max_iter) {
      A.apply(x, ax);
      for (std::size_t i = 0; i < m; ++i) ax[i] -= prob.y[i];
      const double resid = pnorm(ax, p);
      const double feas_gap = std::max(0.0, resid - prob.eps);
      double obj = 0.0;
      for (double v : x) obj += std::abs(v);

      // Dual objective of a feasible scaled dual point: with
      // w~ = w / max(1, ||A^T w||_inf), the value -<w~, y> - eps ||w~||_q
      // lower-bounds the optimum.
      double atw_inf = 0.0;
      for (double v : z) atw_inf = std::max(atw_inf, std::abs(v));
      const double scale = std::max(1.0, atw_inf);
      double wy = 0.0;
      for (std::size_t i = 0; i < m; ++i) wy += w[i] * prob.y[i];
      const double dual = (-wy - prob.eps * qnorm_dual(w, p)) / scale;

      res.iterations = it;
      res.residual_p = resid;
      res.objective = obj;
      res.dual_objective = dual;
      res.gap = obj - dual;

      const double tol_abs = opts.tol * std::max(1.0, obj);
      if (feas_gap <= opts.tol * feas_scale && res.gap <= tol_abs) {
        res.converged = true;
        break;
      }
    }
  }

  res.x_hat = x;
  return res;
}

GuaranteeCheck check_guarantee(const std::vector<double>& x,
                               const std::vector<double>& x_hat,
                               std::uint32_t k, double p, double eps,
                               double C1, double C2) {
  if (x.size() != x_hat.size())
    throw std::invalid_argument("check_guarantee: size mismatch");
  if (k == 0 || k > x.size())
    throw std::invalid_argument("check_guarantee: need 1 <= k <= n");
  GuaranteeCheck out;
  std::vector<double> h(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) h[i] = x[i] - x_hat[i];
  out.lhs = pnorm(h, p);

  // Top-k of |x|: larger magnitude first, then lower index.
  std::vector<std::uint32_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0u);
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    const double ma = std::abs(x[a]), mb = std::abs(x[b]);
    return ma != mb ? ma > mb : a < b;
  });
  double tail1 = 0.0;
  for (std::size_t r = k; r < idx.size(); ++r) tail1 += std::abs(x[idx[r]]);

  out.rhs = C1 / std::pow(static_cast<double>(k), 1.0 - 1.0 / p) * tail1 +
            C2 * eps;
  out.slack = out.rhs - out.lhs;
  out.pass = out.lhs <= out.rhs;
  return out;
}

std::vector<ClaimRecord> audit_recovery_claims(
    const std::vector<double>& x, const std::vector<double>& x_hat,
    const SparseMatrix& a, const std::vector<double>& y, double eps,
    std::uint32_t k, double p, const ClaimAuditOpts& opts) {
  if (x.size() != x_hat.size() || x.size() != a.cols)
    throw std::invalid_argument("audit_recovery_claims: size mismatch");
  if (k == 0 || k > x.size())
    throw std::invalid_argument("audit_recovery_claims: need 1 <= k <= n");

  const std::size_t n = x.size();
  std::vector<double> ax, axh;
  a.apply(x_hat, axh);
  for (std::size_t i = 0; i < y.size(); ++i) axh[i] -= y[i];
  const double resid_hat = pnorm(axh, p);
  if (resid_hat > eps + std::max(1e-6, 100.0 * opts.tol) * std::max(1.0, pnorm(y, p)))
    throw std::invalid_argument(
        "audit_recovery_claims: x_hat infeasible for the residual constraint");

  double alpha = opts.alpha;
  if (alpha <= 0.0) alpha = std::pow(2.0 * 1.2, p / (p - 1.0));

  std::vector<ClaimRecord> ledger;
  const double tol = opts.tol;

  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = x_hat[i] - x[i];

  // S = top-k of |x| (ties: larger magnitude, then lower index).
  std::vector<std::uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0u);
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t u, std::uint32_t v) {
    const double mu = std::abs(x[u]), mv = std::abs(x[v]);
    return mu != mv ? mu > mv : u < v;
  });
  std::vector<bool> in_s(n, false);
  for (std::uint32_t r = 0; r < k; ++r) in_s[idx[r]] = true;

  double x_tail_1 = 0.0, h_s_1 = 0.0, h_sbar_1 = 0.0, h_s_p = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_s[i]) {
      h_s_1 += std::abs(h[i]);
      h_s_p += std::pow(std::abs(h[i]), p);
    } else {
      x_tail_1 += std::abs(x[i]);
      h_sbar_1 += std::abs(h[i]);
    }
  }
  h_s_p = std::pow(h_s_p, 1.0 / p);

  // Residual triangle bound.
  {
    a.apply(x, ax);
    for (std::size_t i = 0; i < y.size(); ++i) ax[i] -= y[i];
    std::vector<double> ah(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) ah[i] = axh[i] - ax[i];
    ClaimRecord rec;
    rec.name = "residual_triangle";  // ||Ah||_p <= 2 eps
    rec.lhs = pnorm(ah, p);
    rec.rhs = 2.0 * eps + 2.0 * tol * std::max(1.0, pnorm(y, p));
    rec.slack = rec.rhs - rec.lhs;
    rec.pass = rec.lhs <= rec.rhs;
    ledger.push_back(rec);
  }

  // Tail optimality: ||h_Sbar||_1 <= ||h_S||_1 + 2 ||x_Sbar||_1. The
  // derivation uses ||x_hat||_1 <= ||x||_1; an approximate solve's
  // surplus is carried into the tolerance.
  double obj_surplus = 0.0;
  {
    double xh1 = 0.0, x1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      xh1 += std::abs(x_hat[i]);
      x1 += std::abs(x[i]);
    }
    obj_surplus = std::max(0.0, xh1 - x1);
    ClaimRecord rec;
    rec.name = "tail_optimality";
    rec.lhs = h_sbar_1;
    rec.rhs = h_s_1 + 2.0 * x_tail_1 + obj_surplus + tol;
    rec.slack = rec.rhs - rec.lhs;
    rec.pass = rec.lhs <= rec.rhs;
    ledger.push_back(rec);
  }

  // Block tails T_1, T_2, ... of size ceil(alpha k) over Sbar sorted by |h|.
  const auto block = static_cast<std::size_t>(
      std::max<double>(1.0, std::ceil(alpha * k)));
  std::vector<std::uint32_t> sbar;
  for (auto i : idx) {
    if (!in_s[i]) sbar.push_back(i);
  }
  std::sort(sbar.begin(), sbar.end(), [&](std::uint32_t u, std::uint32_t v) {
    const double mu = std::abs(h[u]), mv = std::abs(h[v]);
    return mu != mv ? mu > mv : u < v;
  });

  double tail_blocks_p = 0.0;  // sum_{i>=1} ||h_{T_i}||_p
  double beyond_t0_p = 0.0;    // ||h restricted beyond S u T_0||_p^p
  for (std::size_t start = block; start < sbar.size(); start += block) {
    double bp = 0.0;
    for (std::size_t r = start; r < std::min(start + block, sbar.size()); ++r) {
      const double hv = std::pow(std::abs(h[sbar[r]]), p);
      bp += hv;
      beyond_t0_p += hv;
    }
    tail_blocks_p += std::pow(bp, 1.0 / p);
  }
  beyond_t0_p = std::pow(beyond_t0_p, 1.0 / p);

  const double alpha_pow = std::pow(alpha, 1.0 - 1.0 / p);
  const double k_pow = std::pow(static_cast<double>(k), 1.0 - 1.0 / p);
  const double chained_tol =
      tol + (obj_surplus + tol) / std::pow(alpha * k, 1.0 - 1.0 / p);
  const double tail_rhs =
      (h_s_p + 2.0 * x_tail_1 / k_pow) / alpha_pow + chained_tol;

  {
    ClaimRecord rec;
    rec.name = "block_tail_sum";  // sum ||h_{T_i}||_p bound
    rec.lhs = tail_blocks_p;
    rec.rhs = tail_rhs;
    rec.slack = rec.rhs - rec.lhs;
    rec.pass = rec.lhs <= rec.rhs;
    ledger.push_back(rec);
  }
  {
    ClaimRecord rec;
    rec.name = "remainder_head";  // ||h_{(S u T_0)^c}||_p bound
    rec.lhs = beyond_t0_p;
    rec.rhs = tail_rhs;
    rec.slack = rec.rhs - rec.lhs;
    rec.pass = rec.lhs <= rec.rhs;
    ledger.push_back(rec);
  }

  // Conditional recovery-error bound; needs an RIP estimate on
  // (alpha+1)k supports with distortion below alpha^(1-1/p).
  {
    ClaimRecord rec;
    rec.name = "rip_error_bound";
    rec.applicable = opts.rip.has_value();
    if (rec.applicable) {
      const double D = opts.rip->distortion();
      if (D < alpha_pow) {
        double head_p = 0.0;
        for (std::size_t r = 0; r < std::min(sbar.size(), block); ++r) {
          head_p += std::pow(std::abs(h[sbar[r]]), p);
        }
        for (std::size_t i = 0; i < n; ++i) {
          if (in_s[i]) head_p += std::pow(std::abs(h[i]), p);
        }
        rec.lhs = std::pow(head_p, 1.0 / p);
        rec.rhs = 2.0 * D / (alpha_pow - D) * x_tail_1 / k_pow +
                  2.0 * alpha_pow / (alpha_pow - D) * eps + chained_tol;
        rec.slack = rec.rhs - rec.lhs;
        rec.pass = rec.lhs <= rec.rhs;
      } else {
        rec.applicable = false;  // distortion too large for the lemma
      }
    }
    ledger.push_back(rec);
  }

  return ledger;
}

ConverseReport rip_from_recovery(const SparseMatrix& a,
                                 const RecoverFn& recover_fn, std::uint32_t k,
                                 double p, std::uint32_t trials,
                                 std::uint64_t seed) {
  if (k == 0 || k > a.cols)
    throw std::invalid_argument("rip_from_recovery: need 1 <= k <= cols");
  ConverseReport rep;
  rep.trials = trials;

  // Sampled operator-norm lower bound; must stay at or below 1.
  std::vector<double> ax;
  for (std::uint32_t t = 0; t < 64; ++t) {
    Rng rng(seed, 0x0b5e + t);
    std::vector<double> x(a.cols);
    for (auto& v : x) v = rng.next_gaussian();
    a.apply(x, ax);
    const double ratio = pnorm(ax, p) / pnorm(x, p);
    rep.opnorm_lower_bound = std::max(rep.opnorm_lower_bound, ratio);
  }
  if (rep.opnorm_lower_bound > 1.0 + 1e-9)
    throw std::invalid_argument(
        "rip_from_recovery: sampled ||A||_p exceeds 1; the converse "
        "argument requires ||A||_p <= 1");

  // The recovery map must send the zero sketch to zero.
  const std::vector<double> zero_y(a.rows, 0.0);
  const auto x0 = recover_fn(zero_y, 0.0);
  double x0_inf = 0.0;
  for (double v : x0) x0_inf = std::max(x0_inf, std::abs(v));
  if (x0_inf > 1e-6)
    throw std::invalid_argument(
        "rip_from_recovery: recover(0) != 0; converse argument inapplicable");

  // Basis probes first: a zero (or degenerate) column is a deterministic
  // failure witness.
  for (std::uint32_t j = 0; j < a.cols; ++j) {
    double colp = 0.0;
    for (std::uint32_t t = a.col_ptr[j]; t < a.col_ptr[j + 1]; ++t) {
      colp += std::pow(std::abs(a.values[t]), p);
    }
    if (colp == 0.0) {
      rep.finite = false;
      rep.failure_support = std::vector<std::uint32_t>{j};
      return rep;
    }
    rep.c2_estimate = std::max(rep.c2_estimate, 1.0 / std::pow(colp, 1.0 / p));
  }

  for (std::uint32_t t = 0; t < trials; ++t) {
    Rng rng(seed, 0xc2e5 + t);
    auto support = sample_subset(rng, a.cols, k);
    std::vector<double> x(a.cols, 0.0);
    for (auto j : support) x[j] = rng.next_gaussian();
    a.apply(x, ax);
    const double num = pnorm(x, p);
    const double den = pnorm(ax, p);
    if (den <= 1e-12 * num) {
      rep.finite = false;
      rep.failure_support = support;
      return rep;
    }
    rep.c2_estimate = std::max(rep.c2_estimate, num / den);
  }
  return rep;
}

}  // namespace ripkit
