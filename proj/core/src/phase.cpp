#include "ripkit/phase.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ripkit/incoherence.hpp"
#include "ripkit/matrix.hpp"
#include "ripkit/rng.hpp"

namespace ripkit {

namespace {

std::uint32_t d_rule(std::uint32_t n, std::uint32_t k, double p, double eps,
                     const PlanConstants& c, double tau) {
  if (p >= 2.0) return plan_params_p_ge2(n, k, p, eps, c).d;
  return plan_params_p_lt2(n, k, p, eps, tau, c).d;
}

bool instance_pass(std::uint32_t n, std::uint32_t m, std::uint32_t d, double p,
                   double eps, std::uint32_t k, std::uint64_t seed,
                   const PhaseOpts& opts) {
  const auto a = gen_matrix(n, m, d, p, seed);
  // The incoherence gate backs the p >= 2 lower-tail argument; 1-sparse
  // supports need only column normalization, so it starts at k = 2.
  if (p >= 2.0 && k >= 2) {
    if (!check_incoherence(a, k, eps, /*early_exit=*/true).pass) return false;
  }
  const auto s = SparseMatrix::from_binary(a);
  RipOpts ro = opts.rip_opts;
  ro.seed = Rng::mix(seed ^ 0x517au);
  const auto rep = rip_sampled(s, k, p, opts.num_supports, ro, seed);
  const double lo_band = std::pow(1.0 - eps, 1.0 / p);
  const double hi_band = std::pow(1.0 + eps, 1.0 / p);
  return rep.worst_min >= lo_band && rep.worst_max <= hi_band;
}

}  // namespace

std::vector<PhasePoint> phase_transition(std::uint32_t n, double p, double eps,
                                         const std::vector<std::uint32_t>& k_list,
                                         double threshold, std::uint32_t trials,
                                         std::uint64_t seed,
                                         const PhaseOpts& opts) {
  if (trials == 0) throw std::invalid_argument("phase_transition: trials >= 1");
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw std::invalid_argument("phase_transition: threshold in (0, 1]");

  std::vector<PhasePoint> points;
  for (const auto k : k_list) {
    PhasePoint pt;
    pt.n = n;
    pt.k = k;
    pt.p = p;
    pt.eps = eps;
    pt.threshold = threshold;
    pt.trials = trials;
    pt.seed = seed;
    pt.d = d_rule(n, k, p, eps, opts.d_constants, opts.tau);

    // Geometric m grid starting no lower than the degenerate floor.
    std::vector<std::uint32_t> grid;
    double mv = std::max<double>({static_cast<double>(opts.m_lo),
                                  static_cast<double>(pt.d),
                                  static_cast<double>(k)});
    while (mv <= static_cast<double>(opts.m_hi)) {
      const auto m = static_cast<std::uint32_t>(std::lround(mv));
      if (grid.empty() || m > grid.back()) grid.push_back(m);
      mv *= opts.grid_ratio;
    }
    if (grid.empty()) {
      points.push_back(pt);
      continue;
    }

    auto pass_rate_ok = [&](std::uint32_t m) {
      std::uint32_t passes = 0;
      for (std::uint32_t t = 0; t < trials; ++t) {
        const std::uint64_t inst_seed =
            Rng::mix(seed + 0x9e3779b97f4a7c15ULL * ((static_cast<std::uint64_t>(k) << 32) ^
                                                     (static_cast<std::uint64_t>(m) << 8) ^ t));
        if (instance_pass(n, m, pt.d, p, eps, k, inst_seed, opts)) ++passes;
      }
      return static_cast<double>(passes) >=
             threshold * static_cast<double>(trials) - 1e-12;
    };

    std::size_t lo = 0, hi = grid.size() - 1;
    if (!pass_rate_ok(grid[hi])) {
      points.push_back(pt);  // bracket exhausted; m_star stays 0
      continue;
    }
    if (pass_rate_ok(grid[lo])) {
      pt.m_star = grid[lo];
      pt.bracket_ok = true;
      points.push_back(pt);
      continue;
    }
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (pass_rate_ok(grid[mid])) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    pt.m_star = grid[hi];
    pt.bracket_ok = true;
    points.push_back(pt);
  }
  return points;
}

LinearFit fit_exponent(const std::vector<PhasePoint>& points) {
  std::vector<double> lx, ly;
  for (const auto& pt : points) {
    if (!pt.bracket_ok) continue;
    lx.push_back(std::log(static_cast<double>(pt.k)));
    ly.push_back(std::log(static_cast<double>(pt.m_star)));
  }
  if (lx.size() < 3)
    throw std::invalid_argument("fit_exponent: need at least 3 usable points");
  return ols_fit(lx, ly);
}

void write_phase_csv(const std::vector<PhasePoint>& points, std::ostream& os) {
  os << "n,k,p,eps,m_star,threshold,trials,seed\n";
  char buf[256];
  for (const auto& pt : points) {
    std::snprintf(buf, sizeof(buf), "%u,%u,%.17g,%.17g,%u,%.17g,%u,%llu\n",
                  pt.n, pt.k, pt.p, pt.eps, pt.m_star, pt.threshold, pt.trials,
                  static_cast<unsigned long long>(pt.seed));
    os << buf;
  }
}

void save_phase_csv(const std::vector<PhasePoint>& points,
                    const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  write_phase_csv(points, os);
}

std::vector<PhasePoint> load_phase_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("empty phase csv: " + path);
  std::vector<PhasePoint> points;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    PhasePoint pt;
    unsigned long long seed = 0;
    if (std::sscanf(line.c_str(), "%u,%u,%lf,%lf,%u,%lf,%u,%llu", &pt.n, &pt.k,
                    &pt.p, &pt.eps, &pt.m_star, &pt.threshold, &pt.trials,
                    &seed) != 8) {
      throw std::runtime_error("bad phase csv line: " + line);
    }
    pt.seed = seed;
    pt.bracket_ok = pt.m_star > 0;
    points.push_back(pt);
  }
  return points;
}

}  // namespace ripkit
