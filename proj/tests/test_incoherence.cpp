#include <doctest.h>

#include "ripkit/incoherence.hpp"
#include "ripkit/plan.hpp"

using namespace ripkit;

namespace {

SparseBinaryMatrix make_matrix(std::uint32_t m, double p,
                               std::vector<std::vector<std::uint32_t>> supports) {
  SparseBinaryMatrix a;
  a.n = static_cast<std::uint32_t>(supports.size());
  a.m = m;
  a.d = static_cast<std::uint32_t>(supports[0].size());
  a.p = p;
  a.supports = std::move(supports);
  a.validate();
  return a;
}

}  // namespace

TEST_CASE("disjoint supports pass with zero overlap") {
  const auto a = make_matrix(6, 2.0, {{0, 1, 2}, {3, 4, 5}});
  const auto rep = check_incoherence(a, 2, 0.5);
  CHECK(rep.pass);
  CHECK(rep.worst_overlap == 0);
}

TEST_CASE("hand-computed overlap fails against the threshold") {
  // Third disjoint column keeps k <= n while the (0,1) pair drives the max.
  const auto a = make_matrix(9, 2.0, {{0, 1, 2}, {0, 1, 3}, {6, 7, 8}});
  const auto rep = check_incoherence(a, 3, 0.5);
  CHECK(rep.threshold == doctest::Approx(0.5));
  CHECK(rep.worst_overlap == 2);
  CHECK_FALSE(rep.pass);
  CHECK(((rep.worst_i == 0 && rep.worst_j == 1)));
}

TEST_CASE("plan-default matrices at the acceptance point pass incoherence") {
  const auto plan = plan_params_p_ge2(128, 4, 2.0, 0.25);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = gen_matrix(128, plan.m, plan.d, 2.0, seed);
    CHECK(check_incoherence(a, 4, 0.25).pass);
  }
}

TEST_CASE("incoherence pass implies the sampled lower tail holds") {
  const auto plan = plan_params_p_ge2(64, 4, 2.0, 0.25);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = gen_matrix(64, plan.m, plan.d, 2.0, seed);
    REQUIRE(check_incoherence(a, 4, 0.25).pass);
    const auto tail = lower_tail_check(a, 4, 0.25, 500, seed + 1000);
    CHECK(tail.violations == 0);
    CHECK(tail.worst_ratio_p >= 0.75);
  }
}

TEST_CASE("input validation") {
  const auto a = make_matrix(6, 2.0, {{0, 1, 2}, {3, 4, 5}});
  CHECK_THROWS(check_incoherence(a, 0, 0.25));
  CHECK_THROWS(check_incoherence(a, 3, 0.25));
  CHECK_THROWS(check_incoherence(a, 2, 0.0));
}
