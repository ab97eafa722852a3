#include "ripkit/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ripkit {

void KahanSum::add(double x) {
  const double t = sum + x;
  if (std::abs(sum) >= std::abs(x)) {
    comp += (sum - t) + x;
  } else {
    comp += (x - t) + sum;
  }
  sum = t;
}

void KahanSum::merge(const KahanSum& other) {
  add(other.sum);
  comp += other.comp;
}

MeanStats summarize(const std::vector<double>& samples) {
  MeanStats out;
  out.n = samples.size();
  if (out.n == 0) return out;
  KahanSum s, sq;
  for (double x : samples) {
    s.add(x);
    sq.add(x * x);
  }
  out.mean = s.value() / static_cast<double>(out.n);
  if (out.n > 1) {
    const double ss = sq.value() - static_cast<double>(out.n) * out.mean * out.mean;
    out.variance = std::max(0.0, ss / static_cast<double>(out.n - 1));
    out.std_error = std::sqrt(out.variance / static_cast<double>(out.n));
  }
  return out;
}

MeanStats summarize_partials(const std::vector<std::size_t>& counts,
                             const std::vector<KahanSum>& sums,
                             const std::vector<KahanSum>& sq_sums) {
  MeanStats out;
  KahanSum s, sq;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out.n += counts[i];
    s.merge(sums[i]);
    sq.merge(sq_sums[i]);
  }
  if (out.n == 0) return out;
  out.mean = s.value() / static_cast<double>(out.n);
  if (out.n > 1) {
    const double ss = sq.value() - static_cast<double>(out.n) * out.mean * out.mean;
    out.variance = std::max(0.0, ss / static_cast<double>(out.n - 1));
    out.std_error = std::sqrt(out.variance / static_cast<double>(out.n));
  }
  return out;
}

namespace {

// Series expansion of P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p: bad args");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) { return 1.0 - gamma_p(a, x); }

double chi2_pvalue(double stat, double df) {
  if (stat <= 0.0) return 1.0;
  return gamma_q(df / 2.0, stat / 2.0);
}

LinearFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("ols_fit: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("ols_fit: need at least 2 points");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("ols_fit: degenerate x");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

double log_binomial_coeff(int n, int k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binomial_pmf(int n, double p, int k) {
  if (k < 0 || k > n) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  const double lp = log_binomial_coeff(n, k) + k * std::log(p) +
                    (n - k) * std::log1p(-p);
  return std::exp(lp);
}

}  // namespace ripkit
