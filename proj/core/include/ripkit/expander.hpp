#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ripkit/matrix.hpp"

namespace ripkit {

struct ExpansionReport {
  std::uint32_t ell = 0;
  double delta = 0.0;
  bool pass = false;
  std::vector<std::uint32_t> worst_set;  // attains the minimum checked ratio
  std::uint32_t worst_neighborhood = 0;
  double worst_ratio = 1.0;  // |N(S)| / (d |S|)
  std::uint64_t subsets_checked = 0;
  enum class Mode { exact, heuristic } mode = Mode::exact;
};

// Thrown when exhaustive verification would exceed the subset budget.
struct BudgetExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExpanderOpts {
  std::uint64_t budget = 10'000'000;  // subset enumeration cap
  // When non-empty, only subsets of these columns are checked (the
  // "relevant columns" mode used by the decomposition auditors).
  std::vector<std::uint32_t> columns;
};

// Exhaustively checks |N(S)| >= (1 - delta) d |S| for every subset of
// size 1..ell. A size-ell pass does not imply smaller sizes, so all sizes
// are enumerated. Throws BudgetExceededError when the enumeration budget
// is exceeded; use falsify_expander_heuristic at that scale.
ExpansionReport verify_expander_exact(const SparseBinaryMatrix& a,
                                      std::uint32_t ell, double delta,
                                      const ExpanderOpts& opts = {});

// Greedy growth plus local search for a violating subset. A returned
// witness always violates expansion (the postcondition is replayed before
// returning); absence of a witness is NOT certification.
std::optional<std::vector<std::uint32_t>> falsify_expander_heuristic(
    const SparseBinaryMatrix& a, std::uint32_t ell, double delta,
    std::uint64_t budget, std::uint64_t seed);

struct Nonzero {
  std::uint32_t row = 0;
  std::uint32_t col = 0;  // matrix column id
  std::uint32_t pos = 0;  // 0-based position within the ordered support
};

// Primary/secondary/tertiary classification of nonzeros for one block of
// an ordered k-column support. The support order is the caller's (for the
// analysis it is decreasing |x| magnitude). Blocks are consecutive
// position ranges of size ell.
struct BlockDecomposition {
  std::uint32_t b = 1;    // 1-based block index
  std::uint32_t ell = 1;  // block size
  std::uint32_t k = 0;    // support size
  std::uint32_t d = 0;
  std::vector<Nonzero> primary;    // L_b: per row, the smallest-position entry
  std::vector<Nonzero> secondary;  // D_b: remaining block entries
  std::vector<Nonzero> tertiary;   // D_b': later-block entries in L_b rows
};

BlockDecomposition block_decomposition(const SparseBinaryMatrix& a,
                                       const std::vector<std::uint32_t>& support,
                                       std::uint32_t ell, std::uint32_t b);

struct PrefixExpansionAudit {
  bool pass = false;
  std::uint32_t worst_t = 0;
  std::uint64_t worst_count = 0;
  double worst_bound = 0.0;
  std::uint64_t secondary_count = 0;
  double secondary_bound = 0.0;  // delta * d * ell
};

// Checks |{(i,j) in D_b u D_b' : pos(j) <= (b-1) ell + t}| <= 3 delta d t
// for t >= 2, exact zero for t = 1, and |D_b| <= delta d ell. These are
// consequences of (2 ell, d, delta)-expansion of the support columns.
PrefixExpansionAudit audit_prefix_expansion(const BlockDecomposition& dec,
                                            const SparseBinaryMatrix& a,
                                            double delta, std::uint32_t d);

struct WeightedMassAudit {
  bool pass = false;
  double lhs = 0.0;
  double bound = 0.0;  // 3 delta (dk)^{1-1/p}
};

// x holds the support-ordered coefficient magnitudes: |x| non-increasing
// and ||x||_p = 1 are preconditions (rejected otherwise).
WeightedMassAudit audit_weighted_mass(const BlockDecomposition& dec,
                                      const SparseBinaryMatrix& a,
                                      const std::vector<double>& x,
                                      double delta, std::uint32_t d,
                                      std::uint32_t k, double p);

}  // namespace ripkit
