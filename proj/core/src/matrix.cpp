#include "ripkit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ripkit/parallel.hpp"
#include "ripkit/pmath.hpp"
#include "ripkit/rng.hpp"
#include "ripkit/version.hpp"

namespace ripkit {

double SparseBinaryMatrix::entry_value() const {
  return std::pow(static_cast<double>(d), -1.0 / p);
}

void SparseBinaryMatrix::validate() const {
  if (n == 0) throw std::invalid_argument("matrix: n must be positive");
  if (d == 0 || d > m) throw std::invalid_argument("matrix: need 1 <= d <= m");
  if (p < 1.0) throw std::invalid_argument("matrix: p must be >= 1");
  if (supports.size() != n)
    throw std::invalid_argument("matrix: supports size != n");
  for (const auto& s : supports) {
    if (s.size() != d)
      throw std::invalid_argument("matrix: support size != d");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= m) throw std::invalid_argument("matrix: row index out of range");
      if (i > 0 && s[i] <= s[i - 1])
        throw std::invalid_argument("matrix: support not sorted/distinct");
    }
  }
}

SparseBinaryMatrix gen_matrix(std::uint32_t n, std::uint32_t m,
                              std::uint32_t d, double p, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("gen_matrix: n must be >= 1");
  if (d == 0 || d > m) throw std::invalid_argument("gen_matrix: need 1 <= d <= m");
  if (p < 1.0) throw std::invalid_argument("gen_matrix: p must be >= 1");
  SparseBinaryMatrix a;
  a.n = n;
  a.m = m;
  a.d = d;
  a.p = p;
  a.seed = seed;
  a.supports.resize(n);
  parallel_for_blocks(n, 64, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j) {
      Rng rng(seed, j);
      a.supports[j] = sample_subset(rng, m, d);
    }
  });
  return a;
}

SparseMatrix SparseMatrix::from_binary(const SparseBinaryMatrix& a) {
  SparseMatrix s;
  s.rows = a.m;
  s.cols = a.n;
  s.col_ptr.resize(a.n + 1, 0);
  const double v = a.entry_value();
  s.row_idx.reserve(static_cast<std::size_t>(a.n) * a.d);
  s.values.reserve(static_cast<std::size_t>(a.n) * a.d);
  for (std::uint32_t j = 0; j < a.n; ++j) {
    for (auto r : a.supports[j]) {
      s.row_idx.push_back(r);
      s.values.push_back(v);
    }
    s.col_ptr[j + 1] = static_cast<std::uint32_t>(s.row_idx.size());
  }
  return s;
}

SparseMatrix SparseMatrix::from_dense(
    const std::vector<std::vector<double>>& rows) {
  SparseMatrix s;
  s.rows = static_cast<std::uint32_t>(rows.size());
  s.cols = rows.empty() ? 0 : static_cast<std::uint32_t>(rows[0].size());
  s.col_ptr.assign(s.cols + 1, 0);
  for (std::uint32_t j = 0; j < s.cols; ++j) {
    for (std::uint32_t i = 0; i < s.rows; ++i) {
      if (rows[i].size() != s.cols)
        throw std::invalid_argument("from_dense: ragged rows");
      if (rows[i][j] != 0.0) {
        s.row_idx.push_back(i);
        s.values.push_back(rows[i][j]);
      }
    }
    s.col_ptr[j + 1] = static_cast<std::uint32_t>(s.row_idx.size());
  }
  return s;
}

void SparseMatrix::apply(const std::vector<double>& x,
                         std::vector<double>& y) const {
  if (x.size() != cols) throw std::invalid_argument("apply: size mismatch");
  y.assign(rows, 0.0);
  for (std::uint32_t j = 0; j < cols; ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    for (std::uint32_t t = col_ptr[j]; t < col_ptr[j + 1]; ++t) {
      y[row_idx[t]] += values[t] * xj;
    }
  }
}

void SparseMatrix::apply_adjoint(const std::vector<double>& w,
                                 std::vector<double>& z) const {
  if (w.size() != rows) throw std::invalid_argument("apply_adjoint: size mismatch");
  z.assign(cols, 0.0);
  for (std::uint32_t j = 0; j < cols; ++j) {
    double acc = 0.0;
    for (std::uint32_t t = col_ptr[j]; t < col_ptr[j + 1]; ++t) {
      acc += values[t] * w[row_idx[t]];
    }
    z[j] = acc;
  }
}

SparseMatrix SparseMatrix::select_columns(
    const std::vector<std::uint32_t>& cols_keep) const {
  SparseMatrix s;
  s.rows = rows;
  s.cols = static_cast<std::uint32_t>(cols_keep.size());
  s.col_ptr.assign(s.cols + 1, 0);
  for (std::size_t c = 0; c < cols_keep.size(); ++c) {
    const std::uint32_t j = cols_keep[c];
    if (j >= cols) throw std::invalid_argument("select_columns: out of range");
    for (std::uint32_t t = col_ptr[j]; t < col_ptr[j + 1]; ++t) {
      s.row_idx.push_back(row_idx[t]);
      s.values.push_back(values[t]);
    }
    s.col_ptr[c + 1] = static_cast<std::uint32_t>(s.row_idx.size());
  }
  return s;
}

void SparseMatrix::scale(double c) {
  for (auto& v : values) v *= c;
}

void SparseMatrix::zero_column(std::uint32_t j) {
  if (j >= cols) throw std::invalid_argument("zero_column: out of range");
  const std::uint32_t lo = col_ptr[j], hi = col_ptr[j + 1];
  row_idx.erase(row_idx.begin() + lo, row_idx.begin() + hi);
  values.erase(values.begin() + lo, values.begin() + hi);
  const std::uint32_t w = hi - lo;
  for (std::uint32_t c = j + 1; c <= cols; ++c) col_ptr[c] -= w;
}

double SparseMatrix::column_pnorm(std::uint32_t j, double p) const {
  double acc = 0.0;
  for (std::uint32_t t = col_ptr[j]; t < col_ptr[j + 1]; ++t) {
    acc += pow_abs(values[t], p);
  }
  return std::pow(acc, 1.0 / p);
}

double SparseMatrix::apply_pnorm_on_support(
    const std::vector<std::uint32_t>& support, const std::vector<double>& x,
    double p) const {
  if (support.size() != x.size())
    throw std::invalid_argument("apply_pnorm_on_support: size mismatch");
  // Gather touched rows once; the dense temporary spans only those rows.
  thread_local std::vector<double> acc;
  thread_local std::vector<std::uint32_t> touched;
  if (acc.size() < rows) acc.assign(rows, 0.0);
  touched.clear();
  for (std::size_t c = 0; c < support.size(); ++c) {
    const std::uint32_t j = support[c];
    const double xj = x[c];
    for (std::uint32_t t = col_ptr[j]; t < col_ptr[j + 1]; ++t) {
      const std::uint32_t r = row_idx[t];
      if (acc[r] == 0.0) touched.push_back(r);
      acc[r] += values[t] * xj;
    }
  }
  double total = 0.0;
  for (auto r : touched) {
    total += pow_abs(acc[r], p);
    acc[r] = 0.0;
  }
  return std::pow(total, 1.0 / p);
}

double vector_pnorm(const std::vector<double>& v, double p) {
  double acc = 0.0;
  for (double x : v) acc += pow_abs(x, p);
  return std::pow(acc, 1.0 / p);
}

std::string matrix_to_json(const SparseBinaryMatrix& a) {
  nlohmann::json j;
  j["version"] = kSchemaVersion;
  j["n"] = a.n;
  j["m"] = a.m;
  j["d"] = a.d;
  j["p"] = a.p;
  j["seed"] = a.seed;
  j["supports"] = a.supports;
  return j.dump();
}

SparseBinaryMatrix matrix_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (!j.contains("version") || j["version"].get<int>() != kSchemaVersion)
    throw std::invalid_argument("matrix json: unsupported version");
  SparseBinaryMatrix a;
  a.n = j.at("n").get<std::uint32_t>();
  a.m = j.at("m").get<std::uint32_t>();
  a.d = j.at("d").get<std::uint32_t>();
  a.p = j.at("p").get<double>();
  a.seed = j.at("seed").get<std::uint64_t>();
  a.supports = j.at("supports").get<std::vector<std::vector<std::uint32_t>>>();
  a.validate();
  return a;
}

void save_matrix(const SparseBinaryMatrix& a, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  os << matrix_to_json(a) << "\n";
}

SparseBinaryMatrix load_matrix(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return matrix_from_json(ss.str());
}

void write_matrix_csv(const SparseBinaryMatrix& a, std::ostream& os) {
  os << "row,col,value\n";
  char buf[64];
  const double v = a.entry_value();
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  for (std::uint32_t j = 0; j < a.n; ++j) {
    for (auto r : a.supports[j]) {
      os << r << "," << j << "," << buf << "\n";
    }
  }
}

void save_matrix_csv(const SparseBinaryMatrix& a, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  write_matrix_csv(a, os);
}

SparseMatrix load_matrix_csv(const std::string& path, std::uint32_t rows,
                             std::uint32_t cols) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty csv: " + path);
  struct Entry {
    std::uint32_t r, c;
    double v;
  };
  std::vector<Entry> entries;
  std::uint32_t max_r = 0, max_c = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    Entry e{};
    char* end = nullptr;
    e.r = static_cast<std::uint32_t>(std::strtoul(line.c_str(), &end, 10));
    if (*end != ',') throw std::runtime_error("bad csv line: " + line);
    e.c = static_cast<std::uint32_t>(std::strtoul(end + 1, &end, 10));
    if (*end != ',') throw std::runtime_error("bad csv line: " + line);
    e.v = std::strtod(end + 1, &end);
    entries.push_back(e);
    max_r = std::max(max_r, e.r);
    max_c = std::max(max_c, e.c);
  }
  SparseMatrix s;
  s.rows = rows ? rows : (entries.empty() ? 0 : max_r + 1);
  s.cols = cols ? cols : (entries.empty() ? 0 : max_c + 1);
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) {
                     return a.c != b.c ? a.c < b.c : a.r < b.r;
                   });
  s.col_ptr.assign(s.cols + 1, 0);
  for (const auto& e : entries) {
    if (e.r >= s.rows || e.c >= s.cols)
      throw std::runtime_error("csv entry out of bounds");
    s.col_ptr[e.c + 1]++;
  }
  for (std::uint32_t c = 0; c < s.cols; ++c) s.col_ptr[c + 1] += s.col_ptr[c];
  s.row_idx.resize(entries.size());
  s.values.resize(entries.size());
  std::vector<std::uint32_t> cursor(s.col_ptr.begin(), s.col_ptr.end() - 1);
  for (const auto& e : entries) {
    const auto t = cursor[e.c]++;
    s.row_idx[t] = e.r;
    s.values[t] = e.v;
  }
  return s;
}

}  // namespace ripkit
