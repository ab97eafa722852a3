#include "ripkit/tails.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "ripkit/parallel.hpp"
#include "ripkit/stats.hpp"

namespace ripkit {

namespace {

// Unsorted uniform d-subset of [0, m) into a reusable buffer.
void subset_into(Rng& rng, std::uint32_t m, std::uint32_t d,
                 std::vector<std::uint32_t>& out,
                 std::unordered_map<std::uint32_t, std::uint32_t>& displaced) {
  out.clear();
  displaced.clear();
  auto slot = [&](std::uint32_t idx) {
    auto it = displaced.find(idx);
    return it == displaced.end() ? idx : it->second;
  };
  for (std::uint32_t i = 0; i < d; ++i) {
    const auto j = i + static_cast<std::uint32_t>(rng.next_below(m - i));
    const auto vi = slot(i);
    const auto vj = slot(j);
    out.push_back(vj);
    displaced[j] = vi;
  }
}

// One draw of the dependent row-load sum: the reference support is fixed
// to rows [0, d) (the process law is exchangeable over row labels).
struct LoadSampler {
  std::uint32_t m, d, k;
  std::vector<double> load;  // load[c] = (c+1)^(p-1) - 1
  std::vector<std::uint32_t> counts;   // X_i for i in [0, d)
  std::vector<std::uint32_t> touched;
  std::vector<std::uint32_t> subset;
  std::unordered_map<std::uint32_t, std::uint32_t> scratch;

  LoadSampler(std::uint32_t m_, std::uint32_t d_, std::uint32_t k_, double p_)
      : m(m_), d(d_), k(k_), counts(d_, 0) {
    load.resize(k);
    for (std::uint32_t c = 0; c < k; ++c) {
      load[c] = std::pow(c + 1.0, p_ - 1.0) - 1.0;
    }
  }

  double draw(Rng& rng) {
    for (auto i : touched) counts[i] = 0;
    touched.clear();
    for (std::uint32_t col = 0; col + 1 < k; ++col) {
      subset_into(rng, m, d, subset, scratch);
      for (auto r : subset) {
        if (r < d) {
          if (counts[r]++ == 0) touched.push_back(r);
        }
      }
    }
    double sum = 0.0;
    for (auto i : touched) sum += load[counts[i]];
    return sum;
  }
};

MeanStats mc_mean(std::uint64_t trials, std::uint64_t seed,
                  const std::function<double(Rng&, std::uint64_t)>& fn) {
  const std::uint64_t grain = std::max<std::uint64_t>(trials / 256, 1024);
  const std::size_t blocks = num_blocks(trials, grain);
  std::vector<std::size_t> counts(blocks, 0);
  std::vector<KahanSum> sums(blocks), sqs(blocks);
  parallel_for_blocks(trials, grain, [&](std::size_t b, std::size_t lo,
                                         std::size_t hi) {
    for (std::size_t t = lo; t < hi; ++t) {
      Rng rng(seed, t);
      const double v = fn(rng, t);
      sums[b].add(v);
      sqs[b].add(v * v);
      counts[b]++;
    }
  });
  return summarize_partials(counts, sums, sqs);
}

}  // namespace

std::vector<double> sample_row_loads(std::uint32_t m, std::uint32_t d,
                                     std::uint32_t k, double p,
                                     std::uint64_t seed, std::uint64_t trials) {
  if (d == 0 || d > m) throw std::invalid_argument("sample_row_loads: need 1 <= d <= m");
  if (k == 0) throw std::invalid_argument("sample_row_loads: need k >= 1");
  std::vector<double> out(trials, 0.0);
  const std::uint64_t grain = std::max<std::uint64_t>(trials / 256, 256);
  parallel_for_blocks(trials, grain, [&](std::size_t, std::size_t lo,
                                         std::size_t hi) {
    LoadSampler sampler(m, d, k, p);
    for (std::size_t t = lo; t < hi; ++t) {
      Rng rng(seed, t);
      out[t] = sampler.draw(rng);
    }
  });
  return out;
}

MomentRow check_single_moment_bound(std::uint32_t k, double delta, double p,
                                    double ell, std::uint64_t trials, double C,
                                    std::uint64_t seed) {
  if (!(delta > 0.0 && delta < 1.0 / (2.0 * M_E * M_E)))
    throw std::invalid_argument(
        "check_single_moment_bound: lemma needs delta in (0, 1/(2e^2))");
  if (p < 2.0)
    throw std::invalid_argument("check_single_moment_bound: lemma needs p >= 2");
  if (ell < 1.0)
    throw std::invalid_argument("check_single_moment_bound: lemma needs ell >= 1");
  if (k == 0) throw std::invalid_argument("check_single_moment_bound: k >= 1");

  const double q = delta / k;
  MomentRow row;
  row.order = ell;
  const double e_exp = ell * (p - 1.0) + 1.0;
  row.bound = C * delta * std::pow(e_exp, e_exp);

  const auto stats = mc_mean(trials, seed, [&](Rng& rng, std::uint64_t) {
    const int x = rng.next_binomial(static_cast<int>(k) - 1, q);
    return std::pow(std::pow(x + 1.0, p - 1.0) - 1.0, ell);
  });
  row.empirical = stats.mean;
  row.std_error = stats.std_error;

  KahanSum exact;
  for (std::uint32_t i = 0; i < k; ++i) {
    const double pm = binomial_pmf(static_cast<int>(k) - 1, q, static_cast<int>(i));
    exact.add(pm * std::pow(std::pow(i + 1.0, p - 1.0) - 1.0, ell));
  }
  row.exact = exact.value();

  row.pass = row.empirical - kZ99 * row.std_error <= row.bound;
  return row;
}

NegativeAssociationReport check_negative_association(
    std::uint32_t m, std::uint32_t d, std::uint32_t k, double p,
    std::uint32_t t, std::uint64_t trials, std::uint64_t seed) {
  if (t < 1) throw std::invalid_argument("check_negative_association: t >= 1");
  if (d == 0 || d > m)
    throw std::invalid_argument("check_negative_association: need 1 <= d <= m");
  if (k == 0) throw std::invalid_argument("check_negative_association: k >= 1");

  const double q = static_cast<double>(d) / m;  // delta/k with delta = dk/m
  const auto tp = static_cast<double>(t);

  const std::uint64_t grain = std::max<std::uint64_t>(trials / 256, 256);
  const std::size_t blocks = num_blocks(trials, grain);
  std::vector<std::size_t> cnt(blocks, 0);
  std::vector<KahanSum> dep_s(blocks), dep_sq(blocks), ind_s(blocks), ind_sq(blocks);

  parallel_for_blocks(trials, grain, [&](std::size_t b, std::size_t lo,
                                         std::size_t hi) {
    LoadSampler sampler(m, d, k, p);
    for (std::size_t tr = lo; tr < hi; ++tr) {
      Rng rng(seed, tr);
      const double dep = std::pow(sampler.draw(rng), tp);
      double ind_sum = 0.0;
      for (std::uint32_t i = 0; i < d; ++i) {
        const int x = rng.next_binomial(static_cast<int>(k) - 1, q);
        ind_sum += std::pow(x + 1.0, p - 1.0) - 1.0;
      }
      const double ind = std::pow(ind_sum, tp);
      dep_s[b].add(dep);
      dep_sq[b].add(dep * dep);
      ind_s[b].add(ind);
      ind_sq[b].add(ind * ind);
      cnt[b]++;
    }
  });

  const auto dep_stats = summarize_partials(cnt, dep_s, dep_sq);
  const auto ind_stats = summarize_partials(cnt, ind_s, ind_sq);

  NegativeAssociationReport rep;
  rep.dependent_moment = dep_stats.mean;
  rep.independent_moment = ind_stats.mean;
  rep.se_dependent = dep_stats.std_error;
  rep.se_independent = ind_stats.std_error;
  rep.gap = ind_stats.mean - dep_stats.mean;
  const double se = std::sqrt(dep_stats.std_error * dep_stats.std_error +
                              ind_stats.std_error * ind_stats.std_error);
  rep.pass = rep.dependent_moment <= rep.independent_moment + kZ99 * se;
  return rep;
}

DiscreteDist constant_dist(double c) {
  if (c < 0.0) throw std::invalid_argument("constant_dist: need c >= 0");
  return {{c}, {1.0}};
}

DiscreteDist binomial_load_dist(std::uint32_t k, double delta, double p) {
  if (k == 0) throw std::invalid_argument("binomial_load_dist: k >= 1");
  DiscreteDist dist;
  const double q = delta / k;
  for (std::uint32_t i = 0; i < k; ++i) {
    dist.values.push_back(std::pow(i + 1.0, p - 1.0) - 1.0);
    dist.probs.push_back(binomial_pmf(static_cast<int>(k) - 1, q,
                                      static_cast<int>(i)));
  }
  return dist;
}

namespace {

LatalaResult latala_infimum(const std::function<double(double)>& expectation,
                            double vmax, std::uint32_t d, std::uint32_t t) {
  LatalaResult res;
  const double target = std::exp(static_cast<double>(t) / d);
  if (vmax <= 0.0) {
    res.ok = true;  // Y == 0: condition holds for every u, infimum 0
    return res;
  }
  double u_hi = vmax;
  std::uint32_t doublings = 0;
  while (expectation(u_hi) > target) {
    u_hi *= 2.0;
    if (++doublings > 120) return res;  // no u in bracket: report failure
  }
  double u_lo = u_hi;
  while (u_lo > 1e-300 && expectation(u_lo * 0.5) <= target) u_lo *= 0.5;
  u_lo *= 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (u_lo + u_hi);
    if (expectation(mid) <= target) {
      u_hi = mid;
    } else {
      u_lo = mid;
    }
  }
  res.ok = true;
  res.u_star = u_hi;
  res.bound = M_E * u_hi;
  return res;
}

}  // namespace

LatalaResult latala_bound(const DiscreteDist& y, std::uint32_t d,
                          std::uint32_t t) {
  if (d == 0 || t == 0) throw std::invalid_argument("latala_bound: d, t >= 1");
  double vmax = 0.0;
  for (std::size_t i = 0; i < y.values.size(); ++i) {
    if (y.values[i] < -1e-15) throw std::invalid_argument("latala_bound: Y must be >= 0");
    if (y.probs[i] > 0.0) vmax = std::max(vmax, y.values[i]);
  }
  auto expectation = [&](double u) {
    KahanSum acc;
    for (std::size_t i = 0; i < y.values.size(); ++i) {
      acc.add(y.probs[i] *
              std::pow(1.0 + std::max(0.0, y.values[i]) / u, static_cast<double>(t)));
    }
    return acc.value();
  };
  return latala_infimum(expectation, vmax, d, t);
}

LatalaResult latala_bound_mc(const std::function<double(Rng&)>& sampler,
                             std::uint32_t d, std::uint32_t t,
                             std::uint64_t trials, std::uint64_t seed) {
  if (d == 0 || t == 0) throw std::invalid_argument("latala_bound_mc: d, t >= 1");
  // Common random sample: the empirical expectation stays monotone in u.
  std::vector<double> ys(trials);
  double vmax = 0.0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    Rng rng(seed, i);
    ys[i] = sampler(rng);
    if (ys[i] < 0.0) throw std::invalid_argument("latala_bound_mc: Y must be >= 0");
    vmax = std::max(vmax, ys[i]);
  }
  auto expectation = [&](double u) {
    KahanSum acc;
    for (double v : ys) acc.add(std::pow(1.0 + v / u, static_cast<double>(t)));
    return acc.value() / static_cast<double>(trials);
  };
  return latala_infimum(expectation, vmax, d, t);
}

TailReport tail_probability_check(std::uint32_t m, std::uint32_t d,
                                  std::uint32_t k, double p, double eps,
                                  std::uint64_t trials, std::uint64_t seed,
                                  const TailsCalibration& cal) {
  if (d == 0 || d > m)
    throw std::invalid_argument("tail_probability_check: need 1 <= d <= m");
  if (k == 0) throw std::invalid_argument("tail_probability_check: k >= 1");
  const double delta = static_cast<double>(d) * k / m;
  const double hyp = std::pow(p, cal.tail_C_hyp * p);
  if (delta > eps / hyp) {
    throw std::invalid_argument(
        "tail_probability_check: hypothesis delta <= eps / p^(Cp) violated");
  }
  if (static_cast<double>(d) < hyp / eps) {
    throw std::invalid_argument(
        "tail_probability_check: hypothesis d >= p^(Cp) / eps violated");
  }

  const double threshold = eps * d;
  const std::uint64_t grain = std::max<std::uint64_t>(trials / 256, 256);
  const std::size_t blocks = num_blocks(trials, grain);
  std::vector<std::size_t> cnt(blocks, 0);
  std::vector<KahanSum> hits(blocks), means(blocks);
  parallel_for_blocks(trials, grain, [&](std::size_t b, std::size_t lo,
                                         std::size_t hi) {
    LoadSampler sampler(m, d, k, p);
    for (std::size_t tr = lo; tr < hi; ++tr) {
      Rng rng(seed, tr);
      const double s = sampler.draw(rng);
      hits[b].add(s > threshold ? 1.0 : 0.0);
      means[b].add(s);
      cnt[b]++;
    }
  });

  TailReport rep;
  rep.trials = trials;
  double hit_total = 0.0, mean_total = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    hit_total += hits[b].value();
    mean_total += means[b].value();
  }
  rep.empirical_tail = hit_total / static_cast<double>(trials);
  rep.tail_std_error = std::sqrt(std::max(
      rep.empirical_tail * (1.0 - rep.empirical_tail), 1.0 / trials) /
      static_cast<double>(trials));
  rep.analytic_bound =
      std::exp(-cal.tail_c_exp * std::pow(threshold, 1.0 / (p - 1.0)) / p);
  const double emp_mean = mean_total / static_cast<double>(trials);
  if (threshold <= emp_mean) rep.regime = "threshold_below_mean";
  rep.pass = rep.regime == "ok" &&
             rep.empirical_tail - kZ99 * rep.tail_std_error <= rep.analytic_bound;
  return rep;
}

TailsCalibration load_calibration(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  const auto j = nlohmann::json::parse(ss.str());
  TailsCalibration cal;
  cal.moment_C = j.value("moment_C", cal.moment_C);
  cal.tail_c_exp = j.value("tail_c_exp", cal.tail_c_exp);
  cal.tail_C_hyp = j.value("tail_C_hyp", cal.tail_C_hyp);
  return cal;
}

}  // namespace ripkit
