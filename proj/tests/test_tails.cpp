#include <doctest.h>

#include <cmath>

#include "ripkit/stats.hpp"
#include "ripkit/tails.hpp"

using namespace ripkit;

TEST_CASE("row loads: k = 1 means no other columns, all sums zero") {
  const auto sums = sample_row_loads(50, 10, 1, 2.5, 3, 200);
  for (double s : sums) CHECK(s == 0.0);
}

TEST_CASE("row loads: d = m forces full overlap deterministically") {
  const std::uint32_t d = 7, k = 4;
  const double p = 2.5;
  const auto sums = sample_row_loads(7, d, k, p, 9, 100);
  const double expect = d * (std::pow(static_cast<double>(k), p - 1.0) - 1.0);
  for (double s : sums) CHECK(s == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("row loads: mean matches the binomial profile at p = 2") {
  // At p = 2 the sum is just sum X_i with X_i ~ Bin(k-1, d/m).
  const std::uint32_t m = 200, d = 10, k = 5;
  const auto sums = sample_row_loads(m, d, k, 2.0, 42, 20000);
  const auto stats = summarize(sums);
  const double expect = d * (k - 1.0) * d / m;  // = 2.0
  CHECK(std::abs(stats.mean - expect) <= 3.0 * stats.std_error);
}

TEST_CASE("row loads marginal passes a chi-squared goodness of fit") {
  // With d = 1 and p = 2 the sum equals the single row's X ~ Bin(k-1, 1/m).
  const std::uint32_t m = 20, k = 6;
  const auto sums = sample_row_loads(m, 1, k, 2.0, 7, 100000);
  std::vector<double> observed(k, 0.0);
  for (double s : sums) observed[static_cast<std::size_t>(s + 0.5)] += 1.0;
  double stat = 0.0;
  double df = 0.0;
  double tail_obs = 0.0, tail_exp = 0.0;
  for (std::uint32_t i = 0; i < k; ++i) {
    const double expect =
        100000.0 * binomial_pmf(static_cast<int>(k) - 1, 1.0 / m, static_cast<int>(i));
    if (expect >= 5.0) {
      stat += (observed[i] - expect) * (observed[i] - expect) / expect;
      df += 1.0;
    } else {
      tail_obs += observed[i];
      tail_exp += expect;
    }
  }
  if (tail_exp > 0.0) {
    stat += (tail_obs - tail_exp) * (tail_obs - tail_exp) / tail_exp;
    df += 1.0;
  }
  CHECK(chi2_pvalue(stat, df - 1.0) > 0.01);
}

TEST_CASE("moment bound: p = 2, ell = 1 reduces to the binomial mean") {
  const auto row = check_single_moment_bound(10, 0.05, 2.0, 1.0, 200000, 1.0, 1);
  const double mean = 9.0 * (0.05 / 10.0);
  CHECK(row.exact == doctest::Approx(mean).epsilon(1e-12));
  CHECK(std::abs(row.empirical - mean) <= 4.0 * row.std_error);
  CHECK(row.bound == doctest::Approx(1.0 * 0.05 * 4.0));  // C delta 2^2
  CHECK(row.pass);
}

TEST_CASE("moment bound: k = 1 is identically zero") {
  const auto row = check_single_moment_bound(1, 0.05, 3.0, 2.0, 1000, 1.0, 1);
  CHECK(row.empirical == 0.0);
  CHECK(row.exact == 0.0);
  CHECK(row.pass);
}

TEST_CASE("moment bound at the spec point k=20 delta=0.05 p=3 ell=2") {
  const auto row = check_single_moment_bound(20, 0.05, 3.0, 2.0, 100000, 8.0, 5);
  // Hand-computed from the Bin(19, 0.0025) pmf: E ~ 0.4785.
  CHECK(row.exact == doctest::Approx(0.4785).epsilon(2e-3));
  CHECK(row.pass);
  CHECK(std::abs(row.empirical - row.exact) <= 4.0 * row.std_error + 1e-9);
}

TEST_CASE("moment bound rejects hypothesis violations") {
  CHECK_THROWS(check_single_moment_bound(10, 0.08, 2.0, 1.0, 100, 1.0, 1));
  CHECK_THROWS(check_single_moment_bound(10, 0.05, 1.5, 1.0, 100, 1.0, 1));
  CHECK_THROWS(check_single_moment_bound(10, 0.05, 2.0, 0.5, 100, 1.0, 1));
}

TEST_CASE("negative association: t = 1 means equal expectations") {
  const auto rep = check_negative_association(50, 10, 8, 2.5, 1, 200000, 11);
  const double se = std::sqrt(rep.se_dependent * rep.se_dependent +
                              rep.se_independent * rep.se_independent);
  CHECK(std::abs(rep.gap) <= kZ99 * se);
  CHECK(rep.pass);
}

TEST_CASE("negative association: d = 1 gives identical distributions") {
  const auto rep = check_negative_association(30, 1, 6, 2.0, 3, 200000, 13);
  const double se = std::sqrt(rep.se_dependent * rep.se_dependent +
                              rep.se_independent * rep.se_independent);
  CHECK(std::abs(rep.gap) <= kZ99 * se);
  CHECK(rep.pass);
}

TEST_CASE("negative association at the spec point") {
  const auto rep = check_negative_association(50, 10, 8, 2.5, 3, 100000, 15);
  CHECK(rep.pass);
}

TEST_CASE("latala: Y == 0 gives bound 0") {
  const auto res = latala_bound(constant_dist(0.0), 5, 3);
  CHECK(res.ok);
  CHECK(res.bound == 0.0);
}

TEST_CASE("latala: constant Y matches the closed form and dominates d*c") {
  for (std::uint32_t d : {1u, 3u, 10u}) {
    for (std::uint32_t t : {1u, 2u, 5u}) {
      const double c = 0.7;
      const auto res = latala_bound(constant_dist(c), d, t);
      REQUIRE(res.ok);
      const double closed = M_E * c / (std::exp(1.0 / d) - 1.0);
      CHECK(res.bound == doctest::Approx(closed).epsilon(1e-9));
      CHECK(res.bound >= d * c);  // true moment E[(sum)^t]^(1/t) = d c
    }
  }
}

TEST_CASE("latala bound is monotone in t and d on the constant family") {
  const double c = 1.3;
  double prev = 0.0;
  for (std::uint32_t t = 1; t <= 6; ++t) {
    const auto res = latala_bound(constant_dist(c), 4, t);
    CHECK(res.bound >= prev - 1e-12);
    prev = res.bound;
  }
  prev = 0.0;
  for (std::uint32_t d = 1; d <= 6; ++d) {
    const auto res = latala_bound(constant_dist(c), d, 3);
    CHECK(res.bound >= prev - 1e-12);
    prev = res.bound;
  }
}

TEST_CASE("latala dominates the Monte-Carlo moment on binomial loads") {
  const std::uint32_t k = 8, d = 6, t = 3;
  const double delta = 0.05, p = 2.5;
  const auto dist = binomial_load_dist(k, delta, p);
  const auto res = latala_bound(dist, d, t);
  REQUIRE(res.ok);

  // Independent-sum moment by Monte Carlo.
  const std::uint64_t trials = 200000;
  KahanSum acc, acc_sq;
  for (std::uint64_t tr = 0; tr < trials; ++tr) {
    Rng rng(401, tr);
    double sum = 0.0;
    for (std::uint32_t i = 0; i < d; ++i) {
      const int x = rng.next_binomial(static_cast<int>(k) - 1, delta / k);
      sum += std::pow(x + 1.0, p - 1.0) - 1.0;
    }
    const double v = std::pow(sum, static_cast<double>(t));
    acc.add(v);
    acc_sq.add(v * v);
  }
  const double mean = acc.value() / trials;
  const double var = std::max(0.0, acc_sq.value() / trials - mean * mean);
  const double se = std::sqrt(var / trials);
  CHECK(std::pow(res.bound, static_cast<double>(t)) >= mean - kZ99 * se);
}

TEST_CASE("latala MC path agrees with the exact path on the constant family") {
  const auto sampler = [](Rng&) { return 0.9; };
  const auto mc = latala_bound_mc(sampler, 5, 4, 2000, 17);
  const auto exact = latala_bound(constant_dist(0.9), 5, 4);
  REQUIRE(mc.ok);
  CHECK(mc.bound == doctest::Approx(exact.bound).epsilon(1e-6));
}

TEST_CASE("tail probability: k = 1 empirical tail is exactly zero") {
  TailsCalibration cal;
  const auto rep = tail_probability_check(4000, 100, 1, 3.0, 0.5, 2000, 3, cal);
  CHECK(rep.empirical_tail == 0.0);
  CHECK(rep.pass);
}

TEST_CASE("tail probability at the calibrated spec point") {
  const auto rep = tail_probability_check(4000, 100, 5, 3.0, 0.5, 20000, 9);
  CHECK(rep.regime == "ok");
  CHECK(rep.pass);
  CHECK(rep.analytic_bound == doctest::Approx(std::exp(-0.1 * std::sqrt(50.0) / 3.0)));
}

TEST_CASE("tail probability rejects hypothesis violations") {
  // delta = dk/m too large for the configured constant.
  CHECK_THROWS(tail_probability_check(100, 50, 4, 2.0, 0.25, 100, 1));
}

TEST_CASE("threshold below the mean is reported as a regime, not a failure") {
  TailsCalibration cal;
  cal.tail_C_hyp = 0.0;  // mild hypotheses so the call is admitted
  // p = 3, delta = 0.45 <= eps = 0.5, mean ~ 3 delta d > eps d.
  const auto rep = tail_probability_check(2000, 90, 10, 3.0, 0.5, 5000, 21, cal);
  CHECK(rep.regime == "threshold_below_mean");
  CHECK_FALSE(rep.pass);
  CHECK(rep.empirical_tail > 0.5);
}
