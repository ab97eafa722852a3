#include "ripkit/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ripkit/parallel.hpp"
#include "ripkit/rng.hpp"
#include "ripkit/stats.hpp"

namespace ripkit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ColumnNormAudit audit_column_pnorms(const SparseMatrix& a, double p, double D) {
  if (p < 1.0) throw std::invalid_argument("audit_column_pnorms: p >= 1");
  if (D < 1.0) throw std::invalid_argument("audit_column_pnorms: D >= 1");
  ColumnNormAudit audit;
  audit.pass = true;
  audit.slack_low = kInf;
  audit.slack_high = kInf;
  const double dp = std::pow(D, p);
  const double tol = 1e-9;
  double worst = kInf;
  for (std::uint32_t j = 0; j < a.cols; ++j) {
    double sum = 0.0;
    for (std::uint32_t t = a.col_ptr[j]; t < a.col_ptr[j + 1]; ++t) {
      sum += std::pow(std::abs(a.values[t]), p);
    }
    const double lo = sum - 1.0;
    const double hi = dp - sum;
    if (std::min(lo, hi) < worst) {
      worst = std::min(lo, hi);
      audit.worst_col = j;
      audit.worst_sum = sum;
    }
    audit.slack_low = std::min(audit.slack_low, lo);
    audit.slack_high = std::min(audit.slack_high, hi);
    if (lo < -tol || hi < -tol) audit.pass = false;
  }
  return audit;
}

RowOrderStatsAudit audit_row_order_stats(const SparseMatrix& a, double p,
                                         double D, std::uint32_t k) {
  if (k == 0) throw std::invalid_argument("audit_row_order_stats: k >= 1");
  RowOrderStatsAudit audit;
  audit.pass = true;
  audit.min_slack = kInf;

  // Row-major gather by sorting entry indices by row.
  std::vector<std::uint32_t> order(a.nnz());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::uint32_t>(i);
  std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
    return a.row_idx[x] < a.row_idx[y];
  });

  const double tol = 1e-12;
  std::vector<double> row_vals;
  std::size_t i = 0;
  while (i < order.size()) {
    const std::uint32_t row = a.row_idx[order[i]];
    row_vals.clear();
    while (i < order.size() && a.row_idx[order[i]] == row) {
      row_vals.push_back(std::abs(a.values[order[i]]));
      ++i;
    }
    // Only the first k+1 order statistics matter; b_{i,t} is
    // non-increasing in t so the t > k checks reduce to t = k+1.
    const std::size_t keep = std::min<std::size_t>(row_vals.size(), k + 1);
    std::partial_sort(row_vals.begin(), row_vals.begin() + keep, row_vals.end(),
                      std::greater<double>());
    for (std::size_t t = 1; t <= keep; ++t) {
      const double bound =
          t <= k ? D * std::pow(static_cast<double>(t), 1.0 / p - 1.0)
                 : D * std::pow(static_cast<double>(k), 1.0 / p - 1.0);
      const double val = row_vals[t - 1];
      const double slack = bound - val;
      if (slack < audit.min_slack) {
        audit.min_slack = slack;
        audit.worst_row = row;
        audit.worst_t = static_cast<std::uint32_t>(t);
        audit.worst_value = val;
        audit.worst_bound = bound;
      }
      if (val > bound + tol) audit.pass = false;
    }
  }
  return audit;
}

FrobeniusAudit audit_frobenius(const SparseMatrix& a, double p, double D,
                               std::uint32_t k) {
  if (k == 0) throw std::invalid_argument("audit_frobenius: k >= 1");
  if (p <= 1.0) throw std::invalid_argument("audit_frobenius: p > 1");
  FrobeniusAudit audit;
  KahanSum acc;
  for (double v : a.values) acc.add(v * v);
  audit.sum_squares = acc.value();
  const double shape =
      std::pow(static_cast<double>(k) / a.rows, 2.0 / p - 1.0);
  const double tol = 1e-9 * std::max(1.0, audit.sum_squares);
  audit.pass = true;
  if (p <= 2.0) {
    audit.lower_bound = static_cast<double>(a.cols) * shape;
    if (audit.sum_squares < audit.lower_bound - tol) audit.pass = false;
  }
  if (p >= 2.0) {
    audit.upper_bound = static_cast<double>(a.cols) * D * D * shape;
    if (audit.sum_squares > audit.upper_bound + tol) audit.pass = false;
  }
  return audit;
}

DimensionBound dimension_bound(std::uint32_t n, std::uint32_t k, double p,
                               double D, const BoundConstants& c) {
  if (p <= 1.0) throw std::invalid_argument("dimension_bound: p > 1 required");
  if (p == 2.0)
    throw std::invalid_argument(
        "dimension_bound: p = 2 rejected; the (k/m)^(2/p-1) factor is 1 and "
        "no lower bound on m can be deduced");
  if (D <= 1.0) throw std::invalid_argument("dimension_bound: D > 1 required");
  DimensionBound out;
  const double nd = n, kd = k;
  if (p < 2.0) {
    out.branch1 = c.c1 * std::pow((2.0 - p) * nd / (p * D * D), p / 2.0);
    out.branch2 = c.c2 * std::pow(kd, p) / std::pow(D, 2.0 * p / (2.0 - p));
  } else {
    out.branch1 = c.c1 * nd / (2.0 * kd);
    out.branch2 = c.c2 * std::pow(kd, p) / std::pow(D, p * p / (p - 2.0));
  }
  out.m_min = std::min(out.branch1, out.branch2);
  return out;
}

double sparsity_bound(std::uint32_t k, double p, double D) {
  return std::pow(static_cast<double>(k), p - 1.0) / std::pow(D, p);
}

SparsityAudit check_sparsity_bound(const SparseMatrix& a, std::uint32_t k,
                                   double p, double D) {
  if (k == 0) throw std::invalid_argument("check_sparsity_bound: k >= 1");
  SparsityAudit audit;
  audit.d_min = sparsity_bound(k, p, D);
  audit.m_exceeds_n_over_k =
      static_cast<double>(a.rows) > static_cast<double>(a.cols) / k;
  for (std::uint32_t j = 0; j < a.cols; ++j) {
    audit.max_column_sparsity = std::max(
        audit.max_column_sparsity, a.col_ptr[j + 1] - a.col_ptr[j]);
  }
  audit.pass = audit.m_exceeds_n_over_k ||
               static_cast<double>(audit.max_column_sparsity) >= audit.d_min;
  return audit;
}

namespace {

double scalar_lhs(double av, double bv, double p) {
  return std::abs(std::pow(std::abs(av + bv), p) - std::pow(std::abs(av), p) -
                  std::pow(std::abs(bv), p));
}

}  // namespace

PropertyReport scalar_inequality_test(std::uint64_t samples,
                                      std::uint64_t seed, double C) {
  PropertyReport rep;
  rep.samples = samples;
  rep.worst_margin = kInf;

  const std::uint64_t grain = std::max<std::uint64_t>(samples / 256, 1024);
  const std::size_t blocks = num_blocks(samples, grain);
  std::vector<PropertyReport> partial(blocks);
  for (auto& pr : partial) pr.worst_margin = kInf;

  parallel_for_blocks(samples, grain, [&](std::size_t bi, std::size_t lo,
                                          std::size_t hi) {
    PropertyReport& pr = partial[bi];
    for (std::size_t s = lo; s < hi; ++s) {
      Rng rng(seed, s);
      const double p = s % 7 == 0 ? (s % 14 == 0 ? 1.0 : 2.0)
                                  : rng.next_uniform(1.0, 2.0);
      double a = rng.next_log_uniform(1e-6, 1e6);
      if (rng.next_bernoulli(0.5)) a = -a;

      double b;
      switch (s % 5) {
        case 0:  // |b| tiny relative to |a|
          b = std::abs(a) * rng.next_log_uniform(1e-12, 1e-3);
          break;
        case 1:  // b near -a
          b = -a * (1.0 + (rng.next_bernoulli(0.5) ? 1.0 : -1.0) *
                              rng.next_log_uniform(1e-12, 0.5));
          break;
        case 2:  // |b| huge relative to |a|
          b = std::abs(a) * rng.next_log_uniform(1e3, 1e12);
          break;
        default:
          b = rng.next_log_uniform(1e-6, 1e6);
          break;
      }
      if (rng.next_bernoulli(0.5)) b = -b;

      const double lhs = scalar_lhs(a, b, p);
      const double rhs =
          C * std::abs(a) * std::pow(std::abs(b), p - 1.0);
      const double margin = rhs - lhs;
      pr.worst_margin = std::min(pr.worst_margin, margin);
      if (lhs > rhs) pr.violations++;

      if (s % 16 == 0) {
        // Telescoped n-term form on a short random vector.
        const auto n = 2 + static_cast<std::uint32_t>(rng.next_below(7));
        std::vector<double> vec(n);
        for (auto& v : vec) {
          v = rng.next_log_uniform(1e-4, 1e4);
          if (rng.next_bernoulli(0.5)) v = -v;
        }
        double total = 0.0, powers = 0.0;
        for (double v : vec) {
          total += v;
          powers += std::pow(std::abs(v), p);
        }
        double budget = 0.0;
        double tail = total;
        for (std::uint32_t i = 0; i + 1 < n; ++i) {
          tail -= vec[i];
          budget += std::abs(vec[i]) * std::pow(std::abs(tail), p - 1.0);
        }
        const double tl = std::abs(std::pow(std::abs(total), p) - powers);
        if (tl > C * budget + 1e-9 * (powers + C * budget)) pr.violations++;
      }
    }
  });

  for (const auto& pr : partial) {
    rep.violations += pr.violations;
    rep.worst_margin = std::min(rep.worst_margin, pr.worst_margin);
  }
  rep.pass = rep.violations == 0;
  return rep;
}

double pnorm_stable(const std::vector<double>& v, double q) {
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  if (vmax == 0.0) return 0.0;
  double acc = 0.0;
  for (double x : v) acc += std::pow(std::abs(x) / vmax, q);
  return vmax * std::pow(acc, 1.0 / q);
}

PropertyReport holder_inequality_test(std::uint64_t samples,
                                      std::uint64_t seed) {
  PropertyReport rep;
  rep.samples = samples;
  rep.worst_margin = kInf;

  const std::uint64_t grain = std::max<std::uint64_t>(samples / 256, 1024);
  const std::size_t blocks = num_blocks(samples, grain);
  std::vector<PropertyReport> partial(blocks);
  for (auto& pr : partial) pr.worst_margin = kInf;

  parallel_for_blocks(samples, grain, [&](std::size_t bi, std::size_t lo,
                                          std::size_t hi) {
    PropertyReport& pr = partial[bi];
    for (std::size_t s = lo; s < hi; ++s) {
      Rng rng(seed, 0x401de7 + s);
      const double p = rng.next_uniform(1.0 + 1e-6, 2.0 - 1e-6);
      const auto n = 1 + static_cast<std::uint32_t>(rng.next_below(64));
      std::vector<double> a(n), c(n);
      for (std::uint32_t i = 0; i < n; ++i) {
        a[i] = rng.next_bernoulli(0.1) ? 0.0 : rng.next_log_uniform(1e-6, 1e6);
        c[i] = rng.next_bernoulli(0.1) ? 0.0 : rng.next_log_uniform(1e-6, 1e6);
      }
      double lhs = 0.0, a1 = 0.0;
      for (std::uint32_t i = 0; i < n; ++i) {
        lhs += c[i] * std::pow(a[i], p - 1.0);
        a1 += a[i];
      }
      const double rhs =
          pnorm_stable(c, 1.0 / (2.0 - p)) * std::pow(a1, p - 1.0);
      const double fp_tol = 1e-9 * (std::abs(rhs) + std::abs(lhs));
      pr.worst_margin = std::min(pr.worst_margin, rhs - lhs);
      if (lhs > rhs + fp_tol) pr.violations++;

      // All-ones corollary.
      double powers = 0.0;
      for (std::uint32_t i = 0; i < n; ++i) powers += std::pow(a[i], p - 1.0);
      const double rhs2 =
          std::pow(static_cast<double>(n), 2.0 - p) * std::pow(a1, p - 1.0);
      if (powers > rhs2 + 1e-9 * (powers + rhs2)) pr.violations++;
    }
  });

  for (const auto& pr : partial) {
    rep.violations += pr.violations;
    rep.worst_margin = std::min(rep.worst_margin, pr.worst_margin);
  }
  rep.pass = rep.violations == 0;
  return rep;
}

IntegralSumCheck integral_sum_check(std::uint32_t k, std::uint32_t ell,
                                    double p) {
  if (ell == 0 || ell > k)
    throw std::invalid_argument("integral_sum_check: need 1 <= ell <= k");
  IntegralSumCheck out;
  const std::uint32_t nblocks = (k + ell - 1) / ell;
  KahanSum acc;
  for (std::uint32_t b = 2; b <= nblocks; ++b) {
    acc.add(std::pow(static_cast<double>(b - 1) * ell + 1.0, -1.0 / p));
  }
  out.lhs = acc.value();
  out.rhs_scale = std::pow(static_cast<double>(k), 1.0 - 1.0 / p) / ell;
  out.ratio = out.rhs_scale > 0.0 ? out.lhs / out.rhs_scale : 0.0;
  return out;
}

}  // namespace ripkit
