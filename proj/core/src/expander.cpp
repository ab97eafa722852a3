#include "ripkit/expander.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "ripkit/parallel.hpp"
#include "ripkit/rng.hpp"

namespace ripkit {

namespace {

// Distinct-row counter with version stamps; avoids clearing an m-sized
// array per subset.
struct NeighborCounter {
  std::vector<std::uint32_t> stamp;
  std::uint32_t version = 0;

  explicit NeighborCounter(std::uint32_t m) : stamp(m, 0) {}

  std::uint32_t count(const SparseBinaryMatrix& a,
                      const std::vector<std::uint32_t>& cols) {
    ++version;
    std::uint32_t total = 0;
    for (auto j : cols) {
      for (auto r : a.supports[j]) {
        if (stamp[r] != version) {
          stamp[r] = version;
          ++total;
        }
      }
    }
    return total;
  }

  // Incremental variant for greedy growth: how many new rows col adds.
  std::uint32_t gain(const SparseBinaryMatrix& a, std::uint32_t col) const {
    std::uint32_t g = 0;
    for (auto r : a.supports[col]) {
      if (stamp[r] != version) ++g;
    }
    return g;
  }

  void begin_set() { ++version; }

  std::uint32_t add(const SparseBinaryMatrix& a, std::uint32_t col) {
    std::uint32_t g = 0;
    for (auto r : a.supports[col]) {
      if (stamp[r] != version) {
        stamp[r] = version;
        ++g;
      }
    }
    return g;
  }
};

double choose_in_budget(std::uint64_t n, std::uint32_t s) {
  // Exact while below ~2^63; the caller only needs comparison to a budget.
  double c = 1.0;
  for (std::uint32_t i = 0; i < s; ++i) {
    c *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (c > 1e18) return c;
  }
  return c;
}

// Lexicographic combination unranking over [0, pool).
std::vector<std::uint32_t> unrank_combination(std::uint32_t pool,
                                              std::uint32_t s,
                                              std::uint64_t rank) {
  std::vector<std::uint32_t> comb(s);
  std::uint32_t x = 0;
  for (std::uint32_t i = 0; i < s; ++i) {
    for (;;) {
      const double block = choose_in_budget(pool - x - 1, s - i - 1);
      if (static_cast<double>(rank) < block) break;
      rank -= static_cast<std::uint64_t>(block);
      ++x;
    }
    comb[i] = x++;
  }
  return comb;
}

bool next_combination(std::vector<std::uint32_t>& comb, std::uint32_t pool) {
  const auto s = static_cast<std::uint32_t>(comb.size());
  for (std::uint32_t i = s; i-- > 0;) {
    if (comb[i] < pool - (s - i)) {
      ++comb[i];
      for (std::uint32_t j = i + 1; j < s; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

ExpansionReport verify_expander_exact(const SparseBinaryMatrix& a,
                                      std::uint32_t ell, double delta,
                                      const ExpanderOpts& opts) {
  a.validate();
  if (ell == 0) throw std::invalid_argument("verify_expander_exact: ell >= 1");
  std::vector<std::uint32_t> pool = opts.columns;
  if (pool.empty()) {
    pool.resize(a.n);
    for (std::uint32_t j = 0; j < a.n; ++j) pool[j] = j;
  } else {
    for (auto j : pool) {
      if (j >= a.n)
        throw std::invalid_argument("verify_expander_exact: column out of range");
    }
  }
  const auto psize = static_cast<std::uint32_t>(pool.size());
  const std::uint32_t max_s = std::min(ell, psize);

  std::uint64_t total_subsets = 0;
  for (std::uint32_t s = 1; s <= max_s; ++s) {
    const double c = choose_in_budget(psize, s);
    if (c + total_subsets > static_cast<double>(opts.budget)) {
      throw BudgetExceededError(
          "verify_expander_exact: subset budget exceeded; raise --budget or "
          "use falsify mode (heuristic)");
    }
    total_subsets += static_cast<std::uint64_t>(c);
  }

  ExpansionReport rep;
  rep.ell = ell;
  rep.delta = delta;
  rep.mode = ExpansionReport::Mode::exact;
  rep.worst_ratio = std::numeric_limits<double>::infinity();

  const double dv = static_cast<double>(a.d);

  for (std::uint32_t s = 1; s <= max_s; ++s) {
    const auto count_s =
        static_cast<std::uint64_t>(choose_in_budget(psize, s));
    const std::uint64_t grain = std::max<std::uint64_t>(count_s / 64, 1024);
    const std::size_t blocks = num_blocks(count_s, grain);
    std::vector<ExpansionReport> partial(blocks);

    parallel_for_blocks(count_s, grain, [&](std::size_t bi, std::size_t lo,
                                            std::size_t hi) {
      NeighborCounter counter(a.m);
      auto comb = unrank_combination(psize, s, lo);
      std::vector<std::uint32_t> cols(s);
      ExpansionReport& best = partial[bi];
      best.worst_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = lo; r < hi; ++r) {
        for (std::uint32_t i = 0; i < s; ++i) cols[i] = pool[comb[i]];
        const std::uint32_t nb = counter.count(a, cols);
        const double ratio = static_cast<double>(nb) / (dv * s);
        if (ratio < best.worst_ratio) {
          best.worst_ratio = ratio;
          best.worst_set = cols;
          best.worst_neighborhood = nb;
        }
        if (r + 1 < hi) next_combination(comb, psize);
      }
    });

    for (const auto& part : partial) {
      if (part.worst_ratio < rep.worst_ratio) {
        rep.worst_ratio = part.worst_ratio;
        rep.worst_set = part.worst_set;
        rep.worst_neighborhood = part.worst_neighborhood;
      }
    }
    rep.subsets_checked += count_s;
  }

  rep.pass = rep.worst_ratio >= (1.0 - delta);
  return rep;
}

std::optional<std::vector<std::uint32_t>> falsify_expander_heuristic(
    const SparseBinaryMatrix& a, std::uint32_t ell, double delta,
    std::uint64_t budget, std::uint64_t seed) {
  a.validate();
  if (ell == 0 || a.n == 0) return std::nullopt;
  const std::uint32_t ell_eff = std::min<std::uint32_t>(ell, a.n);
  Rng rng(seed, 0xfa15);
  NeighborCounter counter(a.m);
  std::uint64_t evals = 0;
  const double dv = static_cast<double>(a.d);

  auto violates = [&](const std::vector<std::uint32_t>& cols) {
    const std::uint32_t nb = counter.count(a, cols);
    return static_cast<double>(nb) < (1.0 - delta) * dv * cols.size();
  };

  // Row-occupancy scan: columns co-occurring in many rows are natural
  // violation seeds (identical columns are the extreme case).
  std::vector<std::uint32_t> seeds;
  {
    std::vector<std::vector<std::uint32_t>> row_cols(a.m);
    for (std::uint32_t j = 0; j < a.n; ++j) {
      for (auto r : a.supports[j]) row_cols[r].push_back(j);
    }
    std::unordered_map<std::uint64_t, std::uint32_t> pair_ov;
    for (const auto& cols : row_cols) {
      if (cols.size() < 2) continue;
      for (std::size_t x = 0; x < cols.size() && evals < budget; ++x) {
        for (std::size_t y = x + 1; y < cols.size(); ++y) {
          pair_ov[(static_cast<std::uint64_t>(cols[x]) << 32) | cols[y]]++;
          ++evals;
        }
      }
      if (evals >= budget) break;
    }
    std::vector<std::pair<std::uint32_t, std::uint64_t>> ranked;
    ranked.reserve(pair_ov.size());
    for (const auto& [key, ov] : pair_ov) ranked.emplace_back(ov, key);
    std::sort(ranked.rbegin(), ranked.rend());
    for (std::size_t i = 0; i < ranked.size() && i < 16; ++i) {
      seeds.push_back(static_cast<std::uint32_t>(ranked[i].second >> 32));
      seeds.push_back(static_cast<std::uint32_t>(ranked[i].second));
    }
  }

  auto try_greedy = [&](std::uint32_t start) -> std::optional<std::vector<std::uint32_t>> {
    std::vector<std::uint32_t> set{start};
    std::unordered_set<std::uint32_t> member{start};
    counter.begin_set();
    std::uint32_t nb = counter.add(a, start);
    if (static_cast<double>(nb) < (1.0 - delta) * dv) return set;
    while (set.size() < ell_eff && evals < budget) {
      // Candidate pool: random columns; pick the one adding fewest rows.
      std::uint32_t best_col = a.n;
      std::uint32_t best_gain = a.d + 1;
      const std::uint32_t tries = std::min<std::uint32_t>(a.n, 48);
      for (std::uint32_t t = 0; t < tries; ++t) {
        const auto c = static_cast<std::uint32_t>(rng.next_below(a.n));
        if (member.count(c)) continue;
        const std::uint32_t g = counter.gain(a, c);
        ++evals;
        if (g < best_gain) {
          best_gain = g;
          best_col = c;
        }
      }
      if (best_col == a.n) break;
      nb += counter.add(a, best_col);
      set.push_back(best_col);
      member.insert(best_col);
      if (static_cast<double>(nb) < (1.0 - delta) * dv * set.size()) return set;
    }
    return std::nullopt;
  };

  for (auto s : seeds) {
    if (evals >= budget) break;
    if (auto w = try_greedy(s)) {
      if (violates(*w)) return w;  // postcondition replay
    }
  }
  while (evals < budget) {
    const auto start = static_cast<std::uint32_t>(rng.next_below(a.n));
    evals += a.d;
    if (auto w = try_greedy(start)) {
      if (violates(*w)) return w;
    }
  }
  return std::nullopt;
}

BlockDecomposition block_decomposition(const SparseBinaryMatrix& a,
                                       const std::vector<std::uint32_t>& support,
                                       std::uint32_t ell, std::uint32_t b) {
  a.validate();
  const auto k = static_cast<std::uint32_t>(support.size());
  if (k == 0) throw std::invalid_argument("block_decomposition: empty support");
  if (ell == 0) throw std::invalid_argument("block_decomposition: ell >= 1");
  const std::uint32_t num_blocks = (k + ell - 1) / ell;
  if (b < 1 || b > num_blocks)
    throw std::invalid_argument("block_decomposition: invalid block index");
  for (auto j : support) {
    if (j >= a.n)
      throw std::invalid_argument("block_decomposition: column out of range");
  }

  BlockDecomposition dec;
  dec.b = b;
  dec.ell = ell;
  dec.k = k;
  dec.d = a.d;
  const std::uint32_t lo = (b - 1) * ell;
  const std::uint32_t hi = std::min(b * ell, k);

  // Smallest block position per row; rows not hit by the block are absent.
  std::unordered_map<std::uint32_t, std::uint32_t> first_pos;
  first_pos.reserve(static_cast<std::size_t>(hi - lo) * a.d * 2);
  for (std::uint32_t pos = lo; pos < hi; ++pos) {
    for (auto r : a.supports[support[pos]]) {
      auto [it, inserted] = first_pos.try_emplace(r, pos);
      if (!inserted && pos < it->second) it->second = pos;
    }
  }

  for (std::uint32_t pos = lo; pos < hi; ++pos) {
    const std::uint32_t col = support[pos];
    for (auto r : a.supports[col]) {
      if (first_pos.at(r) == pos) {
        dec.primary.push_back({r, col, pos});
      } else {
        dec.secondary.push_back({r, col, pos});
      }
    }
  }
  for (std::uint32_t pos = hi; pos < k; ++pos) {
    const std::uint32_t col = support[pos];
    for (auto r : a.supports[col]) {
      if (first_pos.count(r)) dec.tertiary.push_back({r, col, pos});
    }
  }
  return dec;
}

PrefixExpansionAudit audit_prefix_expansion(const BlockDecomposition& dec,
                                            const SparseBinaryMatrix& a,
                                            double delta, std::uint32_t d) {
  (void)a;
  PrefixExpansionAudit audit;
  const std::uint32_t lo = (dec.b - 1) * dec.ell;
  const std::uint32_t t_max = dec.k - lo;

  // Cumulative count of D_b u D_b' entries by position prefix.
  std::vector<std::uint64_t> by_t(t_max + 1, 0);
  for (const auto& nz : dec.secondary) by_t[nz.pos - lo + 1]++;
  for (const auto& nz : dec.tertiary) by_t[nz.pos - lo + 1]++;
  for (std::uint32_t t = 1; t <= t_max; ++t) by_t[t] += by_t[t - 1];

  audit.pass = true;
  audit.secondary_count = dec.secondary.size();
  audit.secondary_bound = delta * d * dec.ell;
  if (static_cast<double>(audit.secondary_count) > audit.secondary_bound) {
    audit.pass = false;
  }
  for (std::uint32_t t = 1; t <= t_max; ++t) {
    const double bound = t == 1 ? 0.0 : 3.0 * delta * d * t;
    const std::uint64_t count = by_t[t];
    if (static_cast<double>(count) > bound) {
      audit.pass = false;
      audit.worst_t = t;
      audit.worst_count = count;
      audit.worst_bound = bound;
      return audit;
    }
    // Track the tightest margin for reporting even on pass.
    if (audit.worst_t == 0 ||
        bound - static_cast<double>(count) <
            audit.worst_bound - static_cast<double>(audit.worst_count)) {
      audit.worst_t = t;
      audit.worst_count = count;
      audit.worst_bound = bound;
    }
  }
  return audit;
}

WeightedMassAudit audit_weighted_mass(const BlockDecomposition& dec,
                                      const SparseBinaryMatrix& a,
                                      const std::vector<double>& x,
                                      double delta, std::uint32_t d,
                                      std::uint32_t k, double p) {
  if (x.size() != dec.k)
    throw std::invalid_argument("audit_weighted_mass: x size != support size");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs(x[i]) > std::abs(x[i - 1]) + 1e-12)
      throw std::invalid_argument("audit_weighted_mass: |x| must be non-increasing");
  }
  double norm = 0.0;
  for (double v : x) norm += std::pow(std::abs(v), p);
  if (std::abs(norm - 1.0) > 1e-6)
    throw std::invalid_argument("audit_weighted_mass: ||x||_p must be 1");

  WeightedMassAudit audit;
  const double entry = a.entry_value();
  double lhs = 0.0;
  for (const auto& nz : dec.secondary) lhs += entry * std::abs(x[nz.pos]);
  for (const auto& nz : dec.tertiary) lhs += entry * std::abs(x[nz.pos]);
  audit.lhs = lhs;
  audit.bound = 3.0 * delta * std::pow(static_cast<double>(d) * k, 1.0 - 1.0 / p);
  audit.pass = audit.lhs <= audit.bound * (1.0 + 1e-12);
  return audit;
}

}  // namespace ripkit
