// Acceptance suite: one pass/fail line per criterion.
//
// Usage: ripkit_acceptance [--only N] [--list]
// Exit code 0 iff every executed criterion passes.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "ripkit/audit.hpp"
#include "ripkit/expander.hpp"
#include "ripkit/incoherence.hpp"
#include "ripkit/matrix.hpp"
#include "ripkit/phase.hpp"
#include "ripkit/plan.hpp"
#include "ripkit/recover.hpp"
#include "ripkit/ripcheck.hpp"
#include "ripkit/rng.hpp"
#include "ripkit/stats.hpp"
#include "ripkit/tails.hpp"

using namespace ripkit;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

// --- 1. Construction exactness -------------------------------------------

Outcome criterion_construction() {
  std::uint32_t bad_norm = 0, bad_size = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng(0xacce01, t);
    const auto n = 1 + static_cast<std::uint32_t>(rng.next_below(256));
    const auto d = 1 + static_cast<std::uint32_t>(rng.next_below(64));
    const auto m = d + static_cast<std::uint32_t>(rng.next_below(2048 - d));
    const double p = 1.0 + 3.0 * rng.next_double();
    const auto a = gen_matrix(n, m, d, p, t);
    const auto s = SparseMatrix::from_binary(a);
    for (std::uint32_t j = 0; j < n; ++j) {
      if (a.supports[j].size() != d) ++bad_size;
      const double colp = std::pow(s.column_pnorm(j, p), p);
      if (std::abs(colp - 1.0) > 1e-12) ++bad_norm;
    }
  }
  return {bad_norm == 0 && bad_size == 0,
          fmt("100 configs, norm violations=%u, size violations=%u (tol 1e-12)",
              bad_norm, bad_size)};
}

// --- 2/3. Incoherence and the lower tail ----------------------------------

struct IncoherenceRun {
  std::uint32_t passes = 0;
  std::vector<std::uint64_t> passing_seeds;
  ParamPlan plan;
};

IncoherenceRun& incoherence_run() {
  static IncoherenceRun run = [] {
    IncoherenceRun r;
    r.plan = plan_params_p_ge2(128, 4, 2.0, 0.25);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto a = gen_matrix(128, r.plan.m, r.plan.d, 2.0, seed);
      if (check_incoherence(a, 4, 0.25).pass) {
        r.passes++;
        r.passing_seeds.push_back(seed);
      }
    }
    return r;
  }();
  return run;
}

Outcome criterion_incoherence() {
  const auto& run = incoherence_run();
  return {run.passes >= 99,
          fmt("plan m=%u d=%u: %u/100 seeds pass (need >= 99)", run.plan.m,
              run.plan.d, run.passes)};
}

Outcome criterion_lower_tail() {
  const auto& run = incoherence_run();
  std::uint64_t violations = 0;
  double worst = 1.0;
  for (const auto seed : run.passing_seeds) {
    const auto a = gen_matrix(128, run.plan.m, run.plan.d, 2.0, seed);
    const auto rep = lower_tail_check(a, 4, 0.25, 1000, seed ^ 0x7a11);
    violations += rep.violations;
    worst = std::min(worst, rep.worst_ratio_p);
  }
  return {violations == 0,
          fmt("%zu seeds x 1000 sparse vectors: %llu violations, worst "
              "||Ax||_p^p ratio %.4f (floor 0.75)",
              run.passing_seeds.size(),
              static_cast<unsigned long long>(violations), worst)};
}

// --- 4/5. Scalar and weighted power-sum inequalities -----------------------

Outcome criterion_scalar() {
  const auto rep = scalar_inequality_test(1000000, 0xacce04, 3.0);
  return {rep.violations == 0,
          fmt("10^6 stratified samples at C=3: %llu violations, min margin "
              "%.3g",
              static_cast<unsigned long long>(rep.violations),
              rep.worst_margin)};
}

Outcome criterion_holder() {
  const auto rep = holder_inequality_test(100000, 0xacce05);
  return {rep.violations == 0,
          fmt("10^5 samples: %llu violations",
              static_cast<unsigned long long>(rep.violations))};
}

// --- 6. Negative association ----------------------------------------------

Outcome criterion_negative_association() {
  bool pass = true;
  std::string detail;
  for (std::uint32_t t : {2u, 3u}) {
    const auto rep = check_negative_association(50, 10, 8, 2.5, t, 1000000,
                                                0xacce06 + t);
    pass = pass && rep.pass;
    detail += fmt("t=%u: dep=%.4g ind=%.4g %s; ", t, rep.dependent_moment,
                  rep.independent_moment, rep.pass ? "ok" : "VIOLATION");
  }
  const auto r1 = check_negative_association(50, 10, 8, 2.5, 1, 1000000,
                                             0xacce06);
  const double se = std::sqrt(r1.se_dependent * r1.se_dependent +
                              r1.se_independent * r1.se_independent);
  const bool gap_ok = std::abs(r1.gap) <= kZ99 * se;
  pass = pass && gap_ok;
  detail += fmt("t=1 gap=%.3g (CI %.3g) %s", r1.gap, kZ99 * se,
                gap_ok ? "ok" : "OUT OF CI");
  return {pass, detail};
}

// --- 7. Latala dominance ----------------------------------------------------

Outcome criterion_latala() {
  bool pass = true;
  std::string detail;
  // Constant family: exact values.
  for (std::uint32_t d : {2u, 5u, 11u}) {
    const double c = 0.8;
    const auto res = latala_bound(constant_dist(c), d, 4);
    const double closed = M_E * c / (std::exp(1.0 / d) - 1.0);
    const bool ok = res.ok && std::abs(res.bound - closed) <= 1e-9 * closed &&
                    res.bound >= d * c;
    pass = pass && ok;
    if (!ok) detail += fmt("const d=%u bound=%.6g closed=%.6g; ", d, res.bound, closed);
  }
  // Binomial loads: Monte-Carlo dominance at 3 parameter points.
  struct Point { std::uint32_t k, d, t; double delta, p; };
  for (const auto& pt : {Point{8, 6, 3, 0.05, 2.5}, Point{16, 10, 2, 0.02, 3.0},
                         Point{5, 4, 4, 0.04, 2.0}}) {
    const auto res = latala_bound(binomial_load_dist(pt.k, pt.delta, pt.p),
                                  pt.d, pt.t);
    if (!res.ok) {
      pass = false;
      continue;
    }
    KahanSum acc, acc_sq;
    const std::uint64_t trials = 300000;
    for (std::uint64_t tr = 0; tr < trials; ++tr) {
      Rng rng(0xacce07 + pt.k, tr);
      double sum = 0.0;
      for (std::uint32_t i = 0; i < pt.d; ++i) {
        const int x = rng.next_binomial(static_cast<int>(pt.k) - 1,
                                        pt.delta / pt.k);
        sum += std::pow(x + 1.0, pt.p - 1.0) - 1.0;
      }
      const double v = std::pow(sum, static_cast<double>(pt.t));
      acc.add(v);
      acc_sq.add(v * v);
    }
    const double mean = acc.value() / trials;
    const double var =
        std::max(0.0, acc_sq.value() / trials - mean * mean);
    const double lo_ci = mean - kZ99 * std::sqrt(var / trials);
    const double bound_t = std::pow(res.bound, static_cast<double>(pt.t));
    const bool ok = bound_t >= lo_ci;
    pass = pass && ok;
    detail += fmt("k=%u: bound^t=%.4g vs E=%.4g %s; ", pt.k, bound_t, mean,
                  ok ? "ok" : "VIOLATION");
  }
  return {pass, detail.empty() ? "constant family exact; 3 MC points dominated" : detail};
}

// --- 8. Moment bound over the pre-registered grid --------------------------

Outcome criterion_moment_grid() {
  // Frozen calibration: C = 1 (see docs/calibration.md).
  const double C = TailsCalibration{}.moment_C;
  std::uint32_t failures = 0, points = 0;
  for (std::uint32_t k : {5u, 20u, 50u}) {
    for (double delta : {0.01, 0.05}) {
      for (double p : {2.0, 2.5, 3.0}) {
        for (double ell : {1.0, 1.5, 2.0, 3.0}) {
          ++points;
          const auto row = check_single_moment_bound(k, delta, p, ell, 100000,
                                                     C, 0xacce08 + points);
          if (!row.pass) ++failures;
        }
      }
    }
  }
  return {failures == 0,
          fmt("grid of %u (k, delta, p, ell) points at frozen C=%.0f: %u "
              "CI-certain violations",
              points, C, failures)};
}

// --- 9. Expander pipeline ---------------------------------------------------

Outcome criterion_expander_pipeline() {
  const auto plan = plan_params_p_lt2(64, 8, 1.5, 0.25, 0.1);
  std::uint32_t certified = 0, audit_failures = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto a = gen_matrix(64, plan.m, plan.d, 1.5, seed);
    Rng rng(seed, 0xacce09);
    const auto support = sample_subset(rng, 64, 8);
    ExpanderOpts opts;
    opts.columns = support;
    if (!verify_expander_exact(a, 2 * plan.ell, plan.delta, opts).pass) continue;
    ++certified;

    std::vector<double> x(8);
    double norm = 0.0;
    for (auto& v : x) v = std::abs(rng.next_gaussian()) + 0.01;
    std::sort(x.rbegin(), x.rend());
    for (double v : x) norm += std::pow(v, 1.5);
    norm = std::pow(norm, 1.0 / 1.5);
    for (auto& v : x) v /= norm;

    const std::uint32_t blocks = (8 + plan.ell - 1) / plan.ell;
    for (std::uint32_t b = 1; b <= blocks; ++b) {
      const auto dec = block_decomposition(a, support, plan.ell, b);
      if (!audit_prefix_expansion(dec, a, plan.delta, plan.d).pass) ++audit_failures;
      if (!audit_weighted_mass(dec, a, x, plan.delta, plan.d, 8, 1.5).pass)
        ++audit_failures;
    }
  }
  return {certified >= 90 && audit_failures == 0,
          fmt("%u/100 seeds certified as (2l=%u, d=%u, delta=%.4f)-expanders "
              "on the support; %u audit violations (need 0)",
              certified, 2 * plan.ell, plan.d, plan.delta, audit_failures)};
}

// --- 10. Oracle equivalence -------------------------------------------------

Outcome criterion_oracle_equivalence() {
  std::uint32_t mismatches = 0;
  double worst_gap = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    Rng rng(0xacce10, rep);
    const auto m = 2 + static_cast<std::uint32_t>(rng.next_below(9));
    const auto n = 3u;
    std::vector<std::vector<double>> rows(m, std::vector<double>(n, 0.0));
    for (std::uint32_t j = 0; j < n; ++j) {
      const auto nnz = 1 + rng.next_below(m);
      for (std::uint32_t t = 0; t < nnz; ++t) {
        rows[rng.next_below(m)][j] = rng.next_gaussian();
      }
    }
    const auto a = SparseMatrix::from_dense(rows);
    const auto k = 2 + rng.next_below(2);
    std::vector<std::uint32_t> support;
    for (std::uint32_t j = 0; j < k; ++j) support.push_back(j);
    const double p = 1.0 + rng.next_double() * 2.5;

    const auto grid = brute_oracle(a, support, p, 256);
    RipOpts opts;
    opts.restarts = 64;
    opts.iters = 150;
    opts.seed = rep;
    const auto heur = rip_on_support(a, support, p, opts);

    const double band = grid.grid_band + 1e-6;
    const double gap_max =
        std::max(grid.lo_max - band - heur.lo_max, heur.lo_max - grid.hi_max);
    const double gap_min =
        std::max(heur.hi_min - grid.hi_min - band, grid.lo_min - heur.hi_min);
    worst_gap = std::max({worst_gap, gap_max, gap_min});
    if (gap_max > 1e-9 || gap_min > 1e-9) ++mismatches;
  }
  return {mismatches == 0,
          fmt("100 instances k<=3: %u outside the grid band (worst gap %.2g)",
              mismatches, worst_gap)};
}

// --- 11. Lower-bound audits -------------------------------------------------

Outcome criterion_lower_bound_audits() {
  bool pass = true;
  std::string detail;
  for (double p : {2.0, 3.0}) {
    const auto plan = plan_params_p_ge2(64, 4, p, 0.25);
    const auto bin = gen_matrix(64, plan.m, plan.d, p, 0xacce11);
    auto s = SparseMatrix::from_binary(bin);
    RipOpts opts;
    opts.restarts = 8;
    opts.iters = 40;
    const auto rip = rip_sampled(s, 4, p, 4, opts, 0xacce11);
    const double scale = 1.0 / rip.worst_min;
    const double distortion = rip.worst_max / rip.worst_min;
    s.scale(scale);
    const bool cols_ok = audit_column_pnorms(s, p, distortion).pass;
    const bool rows_ok = audit_row_order_stats(s, p, distortion, 4).pass;
    const bool frob_ok = audit_frobenius(s, p, distortion, 4).pass;
    const bool sparse_ok = check_sparsity_bound(s, 4, p, distortion).pass;
    pass = pass && cols_ok && rows_ok && frob_ok && sparse_ok;
    detail += fmt("p=%.0f D=%.3f cols=%d rows=%d frob=%d sparsity=%d; ", p,
                  distortion, cols_ok, rows_ok, frob_ok, sparse_ok);
  }
  // Planted violations must be detected.
  {
    const auto bin = gen_matrix(16, 200, 8, 2.0, 0xacce11);
    auto s = SparseMatrix::from_binary(bin);
    s.zero_column(5);
    const bool zero_detected = !audit_column_pnorms(s, 2.0, 1.5).pass;

    auto dup = bin;
    dup.supports[9] = dup.supports[2];
    const auto sd = SparseMatrix::from_binary(dup);
    RipOpts opts;
    opts.restarts = 12;
    opts.iters = 60;
    const auto est = rip_on_support(sd, {2, 9}, 2.0, opts);
    const bool dup_detected =
        est.hi_min < 0.1 || !check_incoherence(dup, 4, 0.25).pass;
    pass = pass && zero_detected && dup_detected;
    detail += fmt("planted zero col detected=%d, duplicate col detected=%d",
                  zero_detected, dup_detected);
  }
  return {pass, detail};
}

// --- 12. Recovery -----------------------------------------------------------

// Frozen recovery-suite geometry and guarantee constants; fixed by the
// calibration sweep in docs/calibration.md.
constexpr std::uint32_t kRecN = 64, kRecM = 256, kRecD = 12, kRecK = 3;
constexpr double kRecC1 = 3.0, kRecC2 = 4.0;

Outcome criterion_recovery() {
  bool pass = true;
  std::string detail;
  const auto bin = gen_matrix(kRecN, kRecM, kRecD, 2.0, 0xacce12);

  for (double p : {1.5, 2.0, 3.0}) {
    auto a = SparseMatrix::from_binary(bin);
    // Exact recovery, noiseless.
    std::uint32_t hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng rng(seed, 0x51e12);
      std::vector<double> x(kRecN, 0.0);
      const auto support = sample_subset(rng, kRecN, kRecK);
      for (auto j : support) {
        double v = rng.next_gaussian();
        if (std::abs(v) < 0.2) v = v < 0 ? -0.2 : 0.2;
        x[j] = v;
      }
      RecoveryProblem prob;
      prob.a = a;
      prob.p = p;
      prob.eps = 0.0;
      prob.k = kRecK;
      a.apply(x, prob.y);
      SolveOpts opts;
      opts.max_iter = 60000;
      opts.tol = 1e-8;
      const auto res = l1_minimize(prob, opts);
      std::vector<double> h(kRecN);
      for (std::size_t i = 0; i < kRecN; ++i) h[i] = x[i] - res.x_hat[i];
      if (res.converged && vector_pnorm(h, p) <= 1e-3) ++hits;
    }
    const bool exact_ok = hits >= 95;
    pass = pass && exact_ok;
    detail += fmt("p=%.1f exact %u/100; ", p, hits);

    // Noisy suite with the frozen guarantee constants and the claim ledger.
    std::uint32_t noisy_fail = 0, ledger_fail = 0, converged = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(seed, 0x015e12);
      std::vector<double> x(kRecN, 0.0);
      const auto support = sample_subset(rng, kRecN, kRecK);
      for (auto j : support) x[j] = rng.next_gaussian() + (rng.next_bernoulli(0.5) ? 1.0 : -1.0);
      RecoveryProblem prob;
      prob.a = a;
      prob.p = p;
      prob.eps = 0.1;
      prob.k = kRecK;
      a.apply(x, prob.y);
      std::vector<double> e(kRecM);
      for (auto& v : e) v = rng.next_gaussian();
      const double en = vector_pnorm(e, p);
      for (std::size_t i = 0; i < kRecM; ++i) prob.y[i] += 0.1 * e[i] / en;

      SolveOpts opts;
      opts.max_iter = 60000;
      opts.tol = 1e-8;
      const auto res = l1_minimize(prob, opts);
      if (!res.converged) continue;
      ++converged;
      if (!check_guarantee(x, res.x_hat, kRecK, p, 0.1, kRecC1, kRecC2).pass)
        ++noisy_fail;
      const auto ledger =
          audit_recovery_claims(x, res.x_hat, a, prob.y, 0.1, kRecK, p);
      for (const auto& rec : ledger) {
        if (rec.applicable && !rec.pass) ++ledger_fail;
      }
    }
    const bool noisy_ok = noisy_fail == 0 && ledger_fail == 0 && converged >= 18;
    pass = pass && noisy_ok;
    detail += fmt("noisy conv=%u guar_fail=%u ledger_fail=%u; ", converged,
                  noisy_fail, ledger_fail);
  }
  return {pass, detail};
}

// --- 13. Converse -----------------------------------------------------------

Outcome criterion_converse() {
  bool pass = true;
  std::string detail;
  const auto plan = plan_params_p_ge2(64, 4, 2.0, 0.25);
  std::vector<double> estimates;
  for (std::uint64_t seed : {1ull, 2ull}) {
    const auto bin = gen_matrix(64, plan.m, plan.d, 2.0, seed);
    auto s = SparseMatrix::from_binary(bin);
    // The converse argument needs ||A||_p <= 1; normalize by a sampled
    // operator-norm upper estimate first.
    double op = 0.0;
    std::vector<double> ax;
    for (std::uint32_t t = 0; t < 200; ++t) {
      Rng rng(seed, 0xacce13 + t);
      std::vector<double> x(64);
      for (auto& v : x) v = rng.next_gaussian();
      s.apply(x, ax);
      op = std::max(op, vector_pnorm(ax, 2.0) / vector_pnorm(x, 2.0));
    }
    s.scale(1.0 / (op * 1.1));
    const auto recover = [&](const std::vector<double>& y, double eps) {
      RecoveryProblem prob{s, y, 2.0, eps, 4};
      SolveOpts opts;
      opts.max_iter = 20000;
      return l1_minimize(prob, opts).x_hat;
    };
    const auto rep = rip_from_recovery(s, recover, 4, 2.0, 100, seed);
    if (!rep.finite) {
      pass = false;
      detail += "unexpected infinite C2; ";
      continue;
    }
    estimates.push_back(rep.c2_estimate);
    detail += fmt("seed %llu: C2=%.4f; ", static_cast<unsigned long long>(seed),
                  rep.c2_estimate);
  }
  if (estimates.size() == 2) {
    const double ratio = estimates[0] / estimates[1];
    const bool stable = ratio > 1.0 / 1.5 && ratio < 1.5;
    pass = pass && stable;
    detail += fmt("stability ratio %.3f; ", ratio);
  }
  // Zero-column counterexample must be flagged.
  {
    auto s = SparseMatrix::from_binary(gen_matrix(16, 300, 6, 2.0, 7));
    s.scale(0.5);
    s.zero_column(11);
    const auto recover = [&](const std::vector<double>& y, double eps) {
      RecoveryProblem prob{s, y, 2.0, eps, 2};
      return l1_minimize(prob).x_hat;
    };
    const auto rep = rip_from_recovery(s, recover, 2, 2.0, 10, 3);
    const bool flagged = !rep.finite && rep.failure_support.has_value();
    pass = pass && flagged;
    detail += fmt("zero column flagged=%d", flagged);
  }
  return {pass, detail};
}

// --- 14. Phase ordering -----------------------------------------------------

Outcome criterion_phase_ordering() {
  PhaseOpts opts;
  opts.m_lo = 8;
  opts.m_hi = 1u << 21;
  opts.grid_ratio = 1.3;
  opts.num_supports = 8;
  opts.rip_opts.restarts = 2;
  opts.rip_opts.iters = 30;
  const std::vector<std::uint32_t> ks{2, 3, 4, 5, 6};

  const auto pts3 = phase_transition(512, 3.0, 0.25, ks, 1.0, 2, 0xacce14, opts);
  const auto pts15 = phase_transition(512, 1.5, 0.25, ks, 1.0, 2, 0xacce14, opts);
  bool brackets = true;
  for (const auto& pt : pts3) brackets = brackets && pt.bracket_ok;
  for (const auto& pt : pts15) brackets = brackets && pt.bracket_ok;
  if (!brackets) return {false, "bracket exhausted in a sweep"};

  const auto fit3 = fit_exponent(pts3);
  const auto fit15 = fit_exponent(pts15);
  std::string detail = fmt("slope(p=3)=%.3f (r2=%.3f), slope(p=1.5)=%.3f "
                           "(r2=%.3f): ordering %s",
                           fit3.slope, fit3.r2, fit15.slope, fit15.r2,
                           fit3.slope > fit15.slope ? "holds" : "VIOLATED");
  detail += " [m_star:";
  for (const auto& pt : pts3) detail += fmt(" %u", pt.m_star);
  detail += " |";
  for (const auto& pt : pts15) detail += fmt(" %u", pt.m_star);
  detail += "]";
  return {fit3.slope > fit15.slope, detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> criteria{
      {1, "construction exactness", criterion_construction},
      {2, "incoherence pass rate", criterion_incoherence},
      {3, "lower tail", criterion_lower_tail},
      {4, "scalar inequality C=3", criterion_scalar},
      {5, "weighted power-sum inequality", criterion_holder},
      {6, "negative association", criterion_negative_association},
      {7, "moment-bound dominance", criterion_latala},
      {8, "single-moment grid", criterion_moment_grid},
      {9, "expander pipeline", criterion_expander_pipeline},
      {10, "oracle equivalence", criterion_oracle_equivalence},
      {11, "lower-bound audits", criterion_lower_bound_audits},
      {12, "recovery", criterion_recovery},
      {13, "recovery-implies-RIP converse", criterion_converse},
      {14, "phase ordering", criterion_phase_ordering},
  };

  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[i + 1]);
    } else if (std::strcmp(argv[i], "--list") == 0) {
      for (const auto& c : criteria) std::printf("%2d  %s\n", c.id, c.name);
      return 0;
    }
  }

  int failures = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] criterion %2d (%s): %s (%.1fs)\n",
                out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(),
                secs);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
