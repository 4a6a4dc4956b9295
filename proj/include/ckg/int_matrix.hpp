#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ckg/error.hpp"

namespace ckg {

using Integer = boost::multiprecision::cpp_int;

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = rows.size();
    cols_ = rows.size() ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
      if (r.size() != cols_) throw PreconditionError("ragged-matrix", "rows differ in length");
      for (long long x : r) data_.emplace_back(x);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntMatrix transposed() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Columns listed in `keep`, in that order.
  IntMatrix select_columns(const std::vector<std::size_t>& keep) const {
    IntMatrix out(rows_, keep.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < keep.size(); ++k) out(i, k) = (*this)(i, keep[k]);
    return out;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[target] += k * row[src]
  void add_row_multiple(std::size_t target, std::size_t src, const Integer& k) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(target, j) += k * (*this)(src, j);
  }
  /// col[target] += k * col[src]
  void add_col_multiple(std::size_t target, std::size_t src, const Integer& k) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, target) += k * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }

  std::vector<Integer> apply(const std::vector<Integer>& x) const {
    if (x.size() != cols_) throw PreconditionError("dimension-mismatch", "vector length");
    std::vector<Integer> y(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw PreconditionError("dimension-mismatch", "matrix product");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Integer determinant(IntMatrix m) {
  if (m.rows() != m.cols()) throw PreconditionError("not-square", "determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

/// Smith normal form with certificate: u * a * v == d.
struct SnfResult {
  IntMatrix d;
  IntMatrix u;
  IntMatrix v;

  std::size_t rank() const {
    std::size_t r = 0;
    while (r < std::min(d.rows(), d.cols()) && d(r, r) != 0) ++r;
    return r;
  }
  std::vector<Integer> diagonal() const {
    std::vector<Integer> out;
    for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) out.push_back(d(i, i));
    return out;
  }
};

/// Checks every property of an SNF certificate: u a v = d, d diagonal with a
/// non-negative divisor chain, |det u| = |det v| = 1.
inline bool verify_snf(const IntMatrix& a, const SnfResult& r) {
  if (r.u.rows() != a.rows() || r.u.cols() != a.rows()) return false;
  if (r.v.rows() != a.cols() || r.v.cols() != a.cols()) return false;
  if (!(r.u * a * r.v == r.d)) return false;
  for (std::size_t i = 0; i < r.d.rows(); ++i)
    for (std::size_t j = 0; j < r.d.cols(); ++j)
      if (i != j && r.d(i, j) != 0) return false;
  const auto diag = r.diagonal();
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (diag[i] < 0) return false;
    if (i + 1 < diag.size()) {
      if (diag[i] == 0 && diag[i + 1] != 0) return false;
      if (diag[i] != 0 && diag[i + 1] % diag[i] != 0) return false;
    }
  }
  return abs(determinant(r.u)) == 1 && abs(determinant(r.v)) == 1;
}

/// Smith normal form by elimination with a minimal-|.| pivot, accumulating the
/// row transform into u and the column transform into v.
inline SnfResult smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  SnfResult r{a, IntMatrix::identity(m), IntMatrix::identity(n)};
  IntMatrix& d = r.d;

  auto row_op = [&](std::size_t target, std::size_t src, const Integer& k) {
    d.add_row_multiple(target, src, k);
    r.u.add_row_multiple(target, src, k);
  };
  auto col_op = [&](std::size_t target, std::size_t src, const Integer& k) {
    d.add_col_multiple(target, src, k);
    r.v.add_col_multiple(target, src, k);
  };
  auto swap_r = [&](std::size_t x, std::size_t y) {
    d.swap_rows(x, y);
    r.u.swap_rows(x, y);
  };
  auto swap_c = [&](std::size_t x, std::size_t y) {
    d.swap_cols(x, y);
    r.v.swap_cols(x, y);
  };

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    {
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (d(i, j) != 0 && (pi == m || abs(d(i, j)) < abs(d(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == m) break;  // remaining block is zero
      swap_r(t, pi);
      swap_c(t, pj);
    }
    while (true) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        Integer q = d(i, t) / d(t, t);
        row_op(i, t, -q);
        if (d(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        Integer q = d(t, j) / d(t, t);
        col_op(j, t, -q);
        if (d(t, j) != 0) dirty = true;
      }
      if (dirty) {
        // A remainder smaller than the pivot survived; promote it.
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < m; ++i)
          if (d(i, t) != 0 && abs(d(i, t)) < abs(d(bi, bj))) { bi = i; bj = t; }
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(t, j) != 0 && abs(d(t, j)) < abs(d(bi, bj))) { bi = t; bj = j; }
        swap_r(t, bi);
        swap_c(t, bj);
        continue;
      }
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == m) break;
      row_op(t, bad, 1);  // pulls a non-multiple into row t
    }
    if (d(t, t) < 0) {
      d.negate_row(t);
      r.u.negate_row(t);
    }
  }
#ifndef NDEBUG
  if (!verify_snf(a, r)) throw InternalError("Smith normal form certificate failed");
#endif
  return r;
}

// Matrix text: one row per line, integers separated by spaces.

inline IntMatrix parse_matrix(std::istream& in) {
  std::vector<std::vector<Integer>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<Integer> row;
    for (std::string tok; ls >> tok;) {
      try {
        row.emplace_back(tok);
      } catch (const std::exception&) {
        throw ParseError("not an integer: '" + tok + "'");
      }
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) throw ParseError("ragged matrix rows");
    rows.push_back(std::move(row));
  }
  IntMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

inline std::string format_matrix(const IntMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += m(i, j).str();
    }
    out += '\n';
  }
  return out;
}

}  // namespace ckg
