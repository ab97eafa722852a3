#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ripkit {

// Random sparse binary measurement matrix. Only the integer column
// supports are stored; every nonzero has the implied value d^{-1/p},
// applied lazily at evaluation time. This keeps a matrix pure integer
// data, bit-reproducible from (n, m, d, p, seed) on any platform.
struct SparseBinaryMatrix {
  std::uint32_t n = 0;  // columns
  std::uint32_t m = 0;  // rows
  std::uint32_t d = 0;  // per-column support size
  double p = 2.0;       // norm exponent the scaling is tied to
  std::uint64_t seed = 0;
  std::vector<std::vector<std::uint32_t>> supports;  // sorted, size d each

  double entry_value() const;  // d^{-1/p}

  // Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

// Each column's support is a uniform d-subset of [0, m), columns mutually
// independent; column j draws from a counter stream keyed by (seed, j), so
// generation order (or parallelism) cannot change the result.
SparseBinaryMatrix gen_matrix(std::uint32_t n, std::uint32_t m,
                              std::uint32_t d, double p, std::uint64_t seed);

// General sparse matrix in compressed-sparse-column form; the evaluation
// type used by RIP estimation, audits, and the recovery solver. Unlike
// SparseBinaryMatrix it can hold arbitrary values, zero columns, etc.
struct SparseMatrix {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::uint32_t> col_ptr;  // size cols + 1
  std::vector<std::uint32_t> row_idx;
  std::vector<double> values;

  static SparseMatrix from_binary(const SparseBinaryMatrix& a);
  static SparseMatrix from_dense(const std::vector<std::vector<double>>& rows);

  std::size_t nnz() const { return row_idx.size(); }

  // y = A x (y resized and zeroed).
  void apply(const std::vector<double>& x, std::vector<double>& y) const;
  // z = A^T w.
  void apply_adjoint(const std::vector<double>& w, std::vector<double>& z) const;

  // Restriction to a column subset, for on-support work.
  SparseMatrix select_columns(const std::vector<std::uint32_t>& cols_keep) const;

  void scale(double c);
  void zero_column(std::uint32_t j);

  double column_pnorm(std::uint32_t j, double p) const;

  // ||A x||_p for x supported on `support` (x aligned with support).
  double apply_pnorm_on_support(const std::vector<std::uint32_t>& support,
                                const std::vector<double>& x, double p) const;
};

// File formats (External Interfaces):
// versioned JSON {version, n, m, d, p, seed, supports} and a
// (row, col, value) CSV export.
std::string matrix_to_json(const SparseBinaryMatrix& a);
SparseBinaryMatrix matrix_from_json(const std::string& text);
void save_matrix(const SparseBinaryMatrix& a, const std::string& path);
SparseBinaryMatrix load_matrix(const std::string& path);

void write_matrix_csv(const SparseBinaryMatrix& a, std::ostream& os);
void save_matrix_csv(const SparseBinaryMatrix& a, const std::string& path);
// Reads a (row, col, value) CSV back into CSC form; row/col counts are
// taken from the maxima unless overridden.
SparseMatrix load_matrix_csv(const std::string& path, std::uint32_t rows = 0,
                             std::uint32_t cols = 0);

double vector_pnorm(const std::vector<double>& v, double p);

}  // namespace ripkit
