#include "ripkit/ripcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ripkit/parallel.hpp"
#include "ripkit/pmath.hpp"
#include "ripkit/rng.hpp"

namespace ripkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dense working copy of the support columns, restricted to touched rows.
struct Submatrix {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<double> data;  // column-major rows x cols
  double max_col_pnorm = 0.0;

  Submatrix(const SparseMatrix& a, const std::vector<std::uint32_t>& support,
            double p) {
    cols = static_cast<std::uint32_t>(support.size());
    std::vector<std::uint32_t> touched;
    std::vector<std::uint32_t> local(a.rows, 0);
    for (auto j : support) {
      if (j >= a.cols) throw std::invalid_argument("support column out of range");
      for (std::uint32_t t = a.col_ptr[j]; t < a.col_ptr[j + 1]; ++t) {
        const auto r = a.row_idx[t];
        if (local[r] == 0) {
          touched.push_back(r);
          local[r] = 1;
        }
      }
    }
    std::sort(touched.begin(), touched.end());
    rows = static_cast<std::uint32_t>(touched.size());
    for (std::uint32_t i = 0; i < rows; ++i) local[touched[i]] = i;
    data.assign(static_cast<std::size_t>(rows) * cols, 0.0);
    for (std::uint32_t c = 0; c < cols; ++c) {
      const auto j = support[c];
      double colp = 0.0;
      for (std::uint32_t t = a.col_ptr[j]; t < a.col_ptr[j + 1]; ++t) {
        data[static_cast<std::size_t>(c) * rows + local[a.row_idx[t]]] =
            a.values[t];
        colp += std::pow(std::abs(a.values[t]), p);
      }
      max_col_pnorm = std::max(max_col_pnorm, std::pow(colp, 1.0 / p));
    }
  }

  void apply(const std::vector<double>& x, std::vector<double>& r) const {
    r.assign(rows, 0.0);
    for (std::uint32_t c = 0; c < cols; ++c) {
      const double xc = x[c];
      if (xc == 0.0) continue;
      const double* col = data.data() + static_cast<std::size_t>(c) * rows;
      for (std::uint32_t i = 0; i < rows; ++i) r[i] += col[i] * xc;
    }
  }

  // ratio = ||Bx||_p for unit-p-norm x.
  double ratio(const std::vector<double>& x, double p,
               std::vector<double>& scratch) const {
    apply(x, scratch);
    double acc = 0.0;
    for (double v : scratch) acc += pow_abs(v, p);
    return std::pow(acc, 1.0 / p);
  }
};

void normalize_p(std::vector<double>& x, double p) {
  double acc = 0.0;
  for (double v : x) acc += pow_abs(v, p);
  acc = std::pow(acc, 1.0 / p);
  if (acc == 0.0) {
    x[0] = 1.0;
    return;
  }
  for (double& v : x) v /= acc;
}

}  // namespace

double RipEstimate::distortion() const {
  if (hi_min <= 0.0) return kInf;
  return hi_max / hi_min;
}

RipEstimate brute_oracle(const SparseMatrix& a,
                         const std::vector<std::uint32_t>& support, double p,
                         std::uint32_t grid_res) {
  if (support.empty() || support.size() > 3)
    throw std::invalid_argument("brute_oracle: support size must be 1..3");
  if (grid_res < 64) throw std::invalid_argument("brute_oracle: grid_res >= 64");

  const Submatrix sub(a, support, p);
  RipEstimate est;
  est.support = support;
  est.p = p;
  est.method = RipEstimate::Method::grid;

  const auto s = static_cast<std::uint32_t>(support.size());
  std::vector<double> scratch;

  if (s == 1) {
    std::vector<double> x{1.0};
    const double r = sub.ratio(x, p, scratch);
    est.lo_min = est.hi_min = est.lo_max = est.hi_max = r;
    return est;
  }

  const double lipschitz = sub.max_col_pnorm;  // ||A(x-y)||_p <= L ||x-y||_1
  double gmin = kInf, gmax = 0.0;
  double cover = 0.0;  // max l1 distance between neighboring grid points

  auto l1_dist = [](const std::vector<double>& u, const std::vector<double>& v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += std::abs(u[i] - v[i]);
    return acc;
  };

  if (s == 2) {
    // Antipodal symmetry: theta over [0, pi).
    std::vector<double> prev, first;
    for (std::uint32_t i = 0; i < grid_res; ++i) {
      const double th = M_PI * i / grid_res;
      std::vector<double> x{std::cos(th), std::sin(th)};
      normalize_p(x, p);
      const double r = sub.ratio(x, p, scratch);
      gmin = std::min(gmin, r);
      gmax = std::max(gmax, r);
      if (i == 0) {
        first = x;
      } else {
        cover = std::max(cover, l1_dist(prev, x));
      }
      prev = x;
    }
    // Wrap to the antipode of the first point.
    for (double& v : first) v = -v;
    cover = std::max(cover, l1_dist(prev, first));
  } else {
    const std::uint32_t res_phi = grid_res / 2 + 1;
    std::vector<std::vector<double>> ring_prev;
    std::vector<std::vector<double>> ring(grid_res);
    for (std::uint32_t jp = 0; jp < res_phi; ++jp) {
      const double phi = M_PI * jp / (res_phi - 1);
      for (std::uint32_t it = 0; it < grid_res; ++it) {
        const double th = 2.0 * M_PI * it / grid_res;
        std::vector<double> x{std::sin(phi) * std::cos(th),
                              std::sin(phi) * std::sin(th), std::cos(phi)};
        normalize_p(x, p);
        const double r = sub.ratio(x, p, scratch);
        gmin = std::min(gmin, r);
        gmax = std::max(gmax, r);
        if (it > 0) cover = std::max(cover, l1_dist(ring[it - 1], x));
        if (jp > 0) cover = std::max(cover, l1_dist(ring_prev[it], x) +
                                                (it > 0 ? l1_dist(ring[it - 1], x)
                                                        : 0.0));
        ring[it] = std::move(x);
      }
      cover = std::max(cover, l1_dist(ring[grid_res - 1], ring[0]));
      ring_prev = ring;
    }
  }

  // Safety factor 2 covers chord-vs-arc slack in the covering estimate.
  est.grid_band = 2.0 * lipschitz * cover;
  est.hi_min = gmin;
  est.lo_min = std::max(0.0, gmin - est.grid_band);
  est.lo_max = gmax;
  est.hi_max = gmax + est.grid_band;
  return est;
}

std::pair<double, std::vector<double>> sign_vector_argmax(
    const SparseMatrix& a, const std::vector<std::uint32_t>& support,
    double p) {
  const Submatrix sub(a, support, p);
  const auto k = static_cast<std::uint32_t>(support.size());
  std::vector<double> scratch;
  double best = 0.0;
  std::vector<double> best_x(k, 0.0);

  auto consider = [&](const std::vector<double>& signs) {
    double nrm = 0.0;
    for (double v : signs) nrm += std::pow(std::abs(v), p);
    if (nrm == 0.0) return;
    nrm = std::pow(nrm, 1.0 / p);
    std::vector<double> x(signs);
    for (double& v : x) v /= nrm;
    const double r = sub.ratio(x, p, scratch);
    if (r > best) {
      best = r;
      best_x = x;
    }
  };

  double total = 1.0;
  for (std::uint32_t i = 0; i < k && total <= 1e6; ++i) total *= 3.0;
  if (total <= 1e6) {
    std::vector<int> trits(k, -1);
    std::vector<double> x(k);
    for (;;) {
      for (std::uint32_t i = 0; i < k; ++i) x[i] = trits[i];
      consider(x);
      std::uint32_t carry = 0;
      while (carry < k && ++trits[carry] > 1) trits[carry++] = -1;
      if (carry == k) break;
    }
    return {best, best_x};
  }

  // Row-sign-matched family: per touched row, signs of the t largest
  // |entries|, t = 1..k.
  for (std::uint32_t i = 0; i < sub.rows; ++i) {
    std::vector<std::pair<double, std::uint32_t>> row;
    for (std::uint32_t c = 0; c < k; ++c) {
      const double v = sub.data[static_cast<std::size_t>(c) * sub.rows + i];
      if (v != 0.0) row.emplace_back(std::abs(v), c);
    }
    std::sort(row.rbegin(), row.rend());
    std::vector<double> x(k, 0.0);
    for (std::size_t t = 0; t < row.size(); ++t) {
      const auto c = row[t].second;
      const double v = sub.data[static_cast<std::size_t>(c) * sub.rows + i];
      x[c] = v >= 0.0 ? 1.0 : -1.0;
      consider(x);
    }
  }
  // Seeded random sign patterns; fixed internal stream for determinism.
  Rng rng(0x51e7u, k);
  std::vector<double> x(k);
  for (std::uint32_t t = 0; t < 4096; ++t) {
    for (auto& v : x) {
      const auto u = rng.next_below(3);
      v = u == 0 ? -1.0 : (u == 1 ? 0.0 : 1.0);
    }
    consider(x);
  }
  return {best, best_x};
}

double sign_vector_bound(const SparseMatrix& a,
                         const std::vector<std::uint32_t>& support, double p) {
  return sign_vector_argmax(a, support, p).first;
}

namespace {

struct Extremizer {
  const Submatrix& sub;
  double p;
  std::vector<double> r, grad, trial;

  explicit Extremizer(const Submatrix& s, double p_) : sub(s), p(p_) {}

  double value(const std::vector<double>& x) {
    sub.apply(x, r);
    double acc = 0.0;
    for (double v : r) acc += pow_abs(v, p);
    return acc;  // ||Bx||_p^p on the unit sphere
  }

  // grad of ||Bx||_p^p; subgradient 0 at kinks (p < 2, r_i = 0).
  void gradient(std::vector<double>& g) {
    g.assign(sub.cols, 0.0);
    for (std::uint32_t i = 0; i < sub.rows; ++i) {
      const double ri = r[i];
      if (ri == 0.0) continue;
      const double w = p * pow_abs(ri, p - 1.0) * (ri > 0 ? 1.0 : -1.0);
      for (std::uint32_t c = 0; c < sub.cols; ++c) {
        g[c] += w * sub.data[static_cast<std::size_t>(c) * sub.rows + i];
      }
    }
  }

  // Line-searched sphere step; sign=+1 ascends, -1 descends. Returns the
  // achieved value and whether the iteration stalled.
  std::pair<double, bool> run(std::vector<double>& x, double sign,
                              std::uint32_t iters, double step0) {
    normalize_p(x, p);
    double fx = value(x);
    bool converged = false;
    for (std::uint32_t it = 0; it < iters; ++it) {
      gradient(grad);
      double step = step0;
      bool improved = false;
      for (int bt = 0; bt < 40; ++bt) {
        trial = x;
        for (std::uint32_t c = 0; c < sub.cols; ++c)
          trial[c] += sign * step * grad[c];
        normalize_p(trial, p);
        const double ft = value(trial);
        if ((sign > 0 && ft > fx) || (sign < 0 && ft < fx)) {
          const double delta = std::abs(ft - fx);
          x = trial;
          fx = ft;
          improved = true;
          if (delta <= 1e-10 * std::max(1.0, std::abs(fx))) {
            converged = true;
          }
          break;
        }
        step *= 0.5;
      }
      if (!improved || converged) {
        converged = true;
        break;
      }
    }
    return {fx, converged};
  }
};

}  // namespace

RipEstimate rip_on_support(const SparseMatrix& a,
                           const std::vector<std::uint32_t>& support, double p,
                           const RipOpts& opts) {
  if (support.empty()) throw std::invalid_argument("rip_on_support: empty support");
  const Submatrix sub(a, support, p);
  const auto k = static_cast<std::uint32_t>(support.size());

  RipEstimate est;
  est.support = support;
  est.p = p;
  est.method = RipEstimate::Method::heuristic;
  est.lo_min = 0.0;
  est.hi_max = kInf;

  Extremizer ext(sub, p);

  // Start menu: coordinate vectors, +- pair combinations, the best sign
  // vector, then seeded random directions.
  std::vector<std::vector<double>> starts;
  for (std::uint32_t c = 0; c < k; ++c) {
    std::vector<double> e(k, 0.0);
    e[c] = 1.0;
    starts.push_back(e);
  }
  for (std::uint32_t c1 = 0; c1 < k && starts.size() < 64; ++c1) {
    for (std::uint32_t c2 = c1 + 1; c2 < k && starts.size() < 64; ++c2) {
      std::vector<double> u(k, 0.0), v(k, 0.0);
      u[c1] = u[c2] = 1.0;
      v[c1] = 1.0;
      v[c2] = -1.0;
      starts.push_back(u);
      starts.push_back(v);
    }
  }
  auto [sign_max, sign_x] = sign_vector_argmax(a, support, p);
  if (!sign_x.empty()) starts.push_back(sign_x);

  const std::uint32_t wanted = std::max<std::uint32_t>(opts.restarts, 1);
  Rng rng(opts.seed, 0x9a0b);
  while (starts.size() < wanted + k) {
    std::vector<double> x(k);
    for (auto& v : x) v = rng.next_gaussian();
    starts.push_back(std::move(x));
  }

  double best_max = 0.0, best_min = kInf;
  bool all_conv = true;
  for (auto& start : starts) {
    std::vector<double> xa = start;
    auto [fmax, ca] = ext.run(xa, +1.0, opts.iters, opts.step);
    std::vector<double> xd = start;
    auto [fmin, cd] = ext.run(xd, -1.0, opts.iters, opts.step);
    best_max = std::max(best_max, fmax);
    best_min = std::min(best_min, fmin);
    all_conv = all_conv && ca && cd;
  }

  est.lo_max = std::max(std::pow(best_max, 1.0 / p), sign_max);
  est.hi_min = std::pow(best_min, 1.0 / p);
  est.converged = all_conv;
  return est;
}

RipSampledReport rip_sampled(const SparseMatrix& a, std::uint32_t k, double p,
                             std::uint32_t num_supports, const RipOpts& opts,
                             std::uint64_t seed) {
  if (k == 0 || k > a.cols)
    throw std::invalid_argument("rip_sampled: need 1 <= k <= cols");
  RipSampledReport rep;
  rep.num_supports = num_supports;
  rep.worst_min = kInf;

  std::vector<RipEstimate> results(num_supports);
  parallel_for_blocks(num_supports, 4, [&](std::size_t, std::size_t lo,
                                           std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      Rng rng(seed, 0xc0de0000u + i);
      auto support = sample_subset(rng, a.cols, k);
      RipOpts per = opts;
      per.seed = Rng::mix(seed + i);
      results[i] = rip_on_support(a, support, p, per);
    }
  });

  for (const auto& est : results) {
    if (est.hi_min < rep.worst_min) {
      rep.worst_min = est.hi_min;
      rep.worst_min_support = est.support;
    }
    if (est.lo_max > rep.worst_max) {
      rep.worst_max = est.lo_max;
      rep.worst_max_support = est.support;
    }
    rep.all_converged = rep.all_converged && est.converged;
  }
  return rep;
}

}  // namespace ripkit
