#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ripkit/matrix.hpp"
#include "ripkit/recover.hpp"
#include "ripkit/rng.hpp"

using namespace ripkit;

namespace {

std::vector<double> sparse_signal(Rng& rng, std::uint32_t n, std::uint32_t k) {
  std::vector<double> x(n, 0.0);
  auto support = sample_subset(rng, n, k);
  for (auto j : support) {
    x[j] = rng.next_gaussian();
    if (std::abs(x[j]) < 0.3) x[j] = x[j] < 0 ? -0.3 : 0.3;
  }
  return x;
}

double pdist(const std::vector<double>& a, const std::vector<double>& b,
             double p) {
  std::vector<double> h(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) h[i] = a[i] - b[i];
  return vector_pnorm(h, p);
}

}  // namespace

TEST_CASE("projection: points inside the ball are unchanged") {
  const std::vector<double> v{0.1, -0.2, 0.05};
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    CHECK(project_p_ball(v, 1.0, p) == v);
  }
}

TEST_CASE("projection: radius zero maps everything to the origin") {
  const auto u = project_p_ball({3.0, -4.0}, 0.0, 1.5);
  CHECK(u == std::vector<double>{0.0, 0.0});
}

TEST_CASE("projection: p = 2 is radial scaling") {
  const std::vector<double> v{3.0, 4.0};
  const auto u = project_p_ball(v, 1.0, 2.0);
  CHECK(u[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(u[1] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("projection: p = 1 matches the hand-computed soft threshold") {
  const auto u = project_p_ball({3.0, 1.0}, 1.0, 1.0);
  CHECK(u[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(u[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("projection: general p lands on the sphere and beats a 2-D grid") {
  Rng rng(5, 0);
  for (double p : {1.3, 1.5, 2.7}) {
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<double> v{rng.next_gaussian() * 3.0, rng.next_gaussian() * 3.0};
      if (vector_pnorm(v, p) <= 1.0) continue;
      const auto u = project_p_ball(v, 1.0, p);
      CHECK(vector_pnorm(u, p) == doctest::Approx(1.0).epsilon(1e-9));
      const double du = std::hypot(u[0] - v[0], u[1] - v[1]);

      // Dense grid oracle over the disk boundary.
      double best = 1e300;
      for (int i = 0; i < 20000; ++i) {
        const double th = 2.0 * M_PI * i / 20000;
        std::vector<double> g{std::cos(th), std::sin(th)};
        const double norm = vector_pnorm(g, p);
        g[0] /= norm;
        g[1] /= norm;
        best = std::min(best, std::hypot(g[0] - v[0], g[1] - v[1]));
      }
      CHECK(du <= best + 1e-3);
    }
  }
}

TEST_CASE("projection is idempotent and non-expansive") {
  Rng rng(6, 0);
  for (double p : {1.0, 1.4, 2.0, 3.5}) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> v(6), w(6);
      for (auto& x : v) x = rng.next_gaussian() * 2.0;
      for (auto& x : w) x = rng.next_gaussian() * 2.0;
      const auto pv = project_p_ball(v, 1.0, p);
      const auto pw = project_p_ball(w, 1.0, p);
      const auto ppv = project_p_ball(pv, 1.0, p);
      double d_pp = 0, d_vw = 0, d_fix = 0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        d_pp += (pv[i] - pw[i]) * (pv[i] - pw[i]);
        d_vw += (v[i] - w[i]) * (v[i] - w[i]);
        d_fix += (ppv[i] - pv[i]) * (ppv[i] - pv[i]);
      }
      CHECK(std::sqrt(d_pp) <= std::sqrt(d_vw) + 1e-10);
      CHECK(std::sqrt(d_fix) <= 1e-8);
    }
  }
}

TEST_CASE("l1_minimize: identity, exact data") {
  RecoveryProblem prob;
  prob.a = SparseMatrix::from_dense({{1, 0}, {0, 1}});
  prob.y = {1.0, 0.0};
  prob.p = 1.5;
  prob.eps = 0.0;
  prob.k = 1;
  SolveOpts opts;
  opts.max_iter = 20000;
  const auto res = l1_minimize(prob, opts);
  CHECK(res.converged);
  CHECK(res.x_hat[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(std::abs(res.x_hat[1]) <= 1e-5);
}

TEST_CASE("l1_minimize: zero sketch returns zero immediately") {
  RecoveryProblem prob;
  prob.a = SparseMatrix::from_binary(gen_matrix(16, 40, 5, 2.0, 3));
  prob.y.assign(40, 0.0);
  prob.p = 2.0;
  prob.eps = 0.1;
  const auto res = l1_minimize(prob);
  CHECK(res.converged);
  CHECK(res.objective == 0.0);
  CHECK(res.iterations == 0);
}

TEST_CASE("l1_minimize: exact recovery of sparse signals") {
  const auto bin = gen_matrix(32, 128, 9, 2.0, 11);
  const auto A = SparseMatrix::from_binary(bin);
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed, 900);
    const auto x = sparse_signal(rng, 32, 2);
    RecoveryProblem prob;
    prob.a = A;
    prob.p = 2.0;
    prob.eps = 0.0;
    prob.k = 2;
    A.apply(x, prob.y);
    SolveOpts opts;
    opts.max_iter = 30000;
    opts.tol = 1e-8;
    const auto res = l1_minimize(prob, opts);
    if (res.converged && pdist(x, res.x_hat, 2.0) <= 1e-4) ++hits;
  }
  CHECK(hits >= 9);
}

TEST_CASE("l1_minimize: optimality sandwich and feasibility under noise") {
  const auto bin = gen_matrix(24, 96, 8, 1.5, 21);
  const auto A = SparseMatrix::from_binary(bin);
  Rng rng(77, 0);
  const auto x = sparse_signal(rng, 24, 3);
  std::vector<double> y;
  A.apply(x, y);
  std::vector<double> e(y.size());
  for (auto& v : e) v = rng.next_gaussian();
  const double target = 0.1;
  const double en = vector_pnorm(e, 1.5);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += e[i] * target / en;

  RecoveryProblem prob{A, y, 1.5, target, 3};
  SolveOpts opts;
  opts.max_iter = 40000;
  opts.tol = 1e-8;
  const auto res = l1_minimize(prob, opts);
  REQUIRE(res.converged);
  CHECK(res.residual_p <= target * (1.0 + 1e-6) + 1e-9);
  // x itself is feasible, so the optimum cannot exceed ||x||_1.
  double x1 = 0.0;
  for (double v : x) x1 += std::abs(v);
  CHECK(res.objective <= x1 + 1e-5 * std::max(1.0, x1));
  CHECK(res.gap <= 1e-7 * std::max(1.0, res.objective));
}

TEST_CASE("check_guarantee: exact match passes, zero estimate fails") {
  std::vector<double> x{1.0, 0.0, 0.0};
  CHECK(check_guarantee(x, x, 1, 2.0, 0.0, 1.0, 1.0).pass);
  const std::vector<double> zero(3, 0.0);
  CHECK_FALSE(check_guarantee(x, zero, 1, 2.0, 0.0, 5.0, 5.0).pass);
}

TEST_CASE("claim ledger: noiseless exact recovery has full slack") {
  const auto A = SparseMatrix::from_dense({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  std::vector<double> x{0.5, -0.25, 0.0};
  std::vector<double> y;
  A.apply(x, y);
  const auto ledger = audit_recovery_claims(x, x, A, y, 0.0, 2, 2.0);
  for (const auto& rec : ledger) {
    if (!rec.applicable) continue;
    CHECK(rec.pass);
    CHECK(rec.lhs <= 1e-12);
  }
}

TEST_CASE("claim ledger rejects infeasible estimates") {
  const auto A = SparseMatrix::from_dense({{1, 0}, {0, 1}});
  std::vector<double> x{1.0, 0.0};
  std::vector<double> y{1.0, 0.0};
  std::vector<double> bad{5.0, 5.0};
  CHECK_THROWS(audit_recovery_claims(x, bad, A, y, 0.0, 1, 2.0));
}

TEST_CASE("block-tail inequalities hold for arbitrary vectors (pure algebra)") {
  Rng rng(31, 4);
  for (int rep = 0; rep < 200; ++rep) {
    const std::uint32_t n = 24;
    const std::uint32_t k = 1 + rng.next_below(4);
    const double p = 1.0 + rng.next_double() * 2.0;
    const double alpha = 1.0 + rng.next_double() * 4.0;
    std::vector<double> h(n);
    for (auto& v : h) v = rng.next_gaussian() * rng.next_log_uniform(1e-3, 1e3);

    // S = any k indices; the inequality chain only needs the T_i blocks
    // sorted by |h| over the complement.
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    std::vector<std::uint32_t> sbar(idx.begin() + k, idx.end());
    std::sort(sbar.begin(), sbar.end(), [&](std::uint32_t a, std::uint32_t b) {
      return std::abs(h[a]) > std::abs(h[b]);
    });
    const auto block =
        static_cast<std::size_t>(std::max(1.0, std::ceil(alpha * k)));
    double tail_sum = 0.0, h_sbar_1 = 0.0, beyond_p = 0.0;
    for (std::size_t i = 0; i < sbar.size(); ++i) h_sbar_1 += std::abs(h[sbar[i]]);
    for (std::size_t start = block; start < sbar.size(); start += block) {
      double bp = 0.0;
      for (std::size_t r = start; r < std::min(start + block, sbar.size()); ++r) {
        bp += std::pow(std::abs(h[sbar[r]]), p);
        beyond_p += std::pow(std::abs(h[sbar[r]]), p);
      }
      tail_sum += std::pow(bp, 1.0 / p);
    }
    beyond_p = std::pow(beyond_p, 1.0 / p);
    const double bound =
        h_sbar_1 / std::pow(alpha * k, 1.0 - 1.0 / p);
    CHECK(tail_sum <= bound * (1.0 + 1e-12) + 1e-300);
    CHECK(beyond_p <= tail_sum * (1.0 + 1e-12) + 1e-300);
  }
}

TEST_CASE("ledger passes on converged noisy solves") {
  const auto bin = gen_matrix(32, 160, 10, 2.0, 41);
  const auto A = SparseMatrix::from_binary(bin);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed, 31);
    const auto x = sparse_signal(rng, 32, 3);
    std::vector<double> y;
    A.apply(x, y);
    std::vector<double> e(y.size());
    for (auto& v : e) v = rng.next_gaussian();
    const double en = vector_pnorm(e, 2.0);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.05 * e[i] / en;

    RecoveryProblem prob{A, y, 2.0, 0.05, 3};
    SolveOpts opts;
    opts.max_iter = 40000;
    opts.tol = 1e-8;
    const auto res = l1_minimize(prob, opts);
    REQUIRE(res.converged);
    const auto ledger =
        audit_recovery_claims(x, res.x_hat, A, y, 0.05, 3, 2.0);
    for (const auto& rec : ledger) {
      if (rec.applicable) CHECK(rec.pass);
    }
  }
}

TEST_CASE("rip_from_recovery: identity gives C2 = 1") {
  std::vector<std::vector<double>> rows(6, std::vector<double>(6, 0.0));
  for (int i = 0; i < 6; ++i) rows[i][i] = 1.0;
  const auto A = SparseMatrix::from_dense(rows);
  const auto recover = [&](const std::vector<double>& y, double eps) {
    RecoveryProblem prob{A, y, 2.0, eps, 2};
    return l1_minimize(prob).x_hat;
  };
  const auto rep = rip_from_recovery(A, recover, 2, 2.0, 30, 5);
  CHECK(rep.finite);
  CHECK(rep.c2_estimate == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("rip_from_recovery flags a zero column with a witness") {
  auto A = SparseMatrix::from_binary(gen_matrix(10, 50, 4, 2.0, 9));
  A.scale(0.5);  // keep the sampled operator norm below 1
  A.zero_column(6);
  const auto recover = [&](const std::vector<double>& y, double eps) {
    RecoveryProblem prob{A, y, 2.0, eps, 2};
    return l1_minimize(prob).x_hat;
  };
  const auto rep = rip_from_recovery(A, recover, 2, 2.0, 10, 5);
  CHECK_FALSE(rep.finite);
  REQUIRE(rep.failure_support.has_value());
  CHECK(rep.failure_support->at(0) == 6);
}

TEST_CASE("rip_from_recovery rejects operators with ||A||_p > 1") {
  const auto A = SparseMatrix::from_dense({{2.0, 0.0}, {0.0, 2.0}});
  const auto recover = [&](const std::vector<double>& y, double eps) {
    RecoveryProblem prob{A, y, 2.0, eps, 1};
    return l1_minimize(prob).x_hat;
  };
  CHECK_THROWS(rip_from_recovery(A, recover, 1, 2.0, 5, 5));
}
