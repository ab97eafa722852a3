#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ripkit/plan.hpp"
#include "ripkit/ripcheck.hpp"
#include "ripkit/stats.hpp"

namespace ripkit {

struct PhasePoint {
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  double p = 2.0;
  double eps = 0.0;
  std::uint32_t m_star = 0;  // 0 when the search bracket was exhausted
  double threshold = 1.0;
  std::uint32_t trials = 1;
  std::uint64_t seed = 0;
  bool bracket_ok = false;
  std::uint32_t d = 0;  // column sparsity used at this point
};

struct PhaseOpts {
  std::uint32_t m_lo = 8;
  std::uint32_t m_hi = 1u << 20;
  double grid_ratio = 1.30;
  std::uint32_t num_supports = 16;
  RipOpts rip_opts{/*restarts=*/2, /*iters=*/40, /*step=*/1.0, /*seed=*/0};
  // The incoherence gate drives the p >= 2 lower-tail theory and is only
  // applied there; for p < 2 the sampled RIP band alone decides.
  PlanConstants d_constants = PlanConstants::unit();
  double tau = 0.05;  // for the p < 2 d-rule
};

// For each k: column sparsity from the plan formula, then binary search
// for the smallest m on a geometric grid where the sampled RIP test (and,
// for p >= 2, the incoherence check) passes on >= threshold of trials.
std::vector<PhasePoint> phase_transition(std::uint32_t n, double p, double eps,
                                         const std::vector<std::uint32_t>& k_list,
                                         double threshold, std::uint32_t trials,
                                         std::uint64_t seed,
                                         const PhaseOpts& opts = {});

// OLS of log m_star against log k over bracket-ok points.
LinearFit fit_exponent(const std::vector<PhasePoint>& points);

void write_phase_csv(const std::vector<PhasePoint>& points, std::ostream& os);
void save_phase_csv(const std::vector<PhasePoint>& points,
                    const std::string& path);
std::vector<PhasePoint> load_phase_csv(const std::string& path);

}  // namespace ripkit
