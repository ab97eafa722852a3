#pragma once

#include <cstddef>
#include <vector>

namespace ripkit {

// Neumaier compensated accumulator; merging two accumulators in a fixed
// order keeps parallel reductions reproducible.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x);
  void merge(const KahanSum& other);
  double value() const { return sum + comp; }
};

struct MeanStats {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // sample variance
  double std_error = 0.0;
};

MeanStats summarize(const std::vector<double>& samples);
// Combines per-block (count, sum, sum of squares) partials in block order.
MeanStats summarize_partials(const std::vector<std::size_t>& counts,
                             const std::vector<KahanSum>& sums,
                             const std::vector<KahanSum>& sq_sums);

// Two-sided 99% normal quantile used by every confidence gate.
inline constexpr double kZ99 = 2.5758293035489004;

// Regularized incomplete gamma functions (series / continued fraction).
double gamma_p(double a, double x);  // P(a, x)
double gamma_q(double a, double x);  // Q(a, x) = 1 - P(a, x)

// Upper-tail p-value of a chi-squared statistic with df degrees of freedom.
double chi2_pvalue(double stat, double df);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares of y against x; throws on fewer than 2 points or
// degenerate (constant) x.
LinearFit ols_fit(const std::vector<double>& x, const std::vector<double>& y);

double binomial_pmf(int n, double p, int k);
double log_binomial_coeff(int n, int k);

}  // namespace ripkit
