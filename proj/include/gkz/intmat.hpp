#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "gkz/errors.hpp"

namespace gkz {

using IntVec = std::vector<long>;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols, 0) {}
  explicit IntMatrix(const std::vector<std::vector<long>>& rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows.empty() ? 0 : static_cast<int>(rows[0].size());
    for (auto& r : rows) {
      if (static_cast<int>(r.size()) != cols_) throw ParseError("ragged integer matrix");
      a_.insert(a_.end(), r.begin(), r.end());
    }
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  long& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
  long operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }

  IntVec column(int j) const {
    IntVec v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  IntVec row(int i) const { return IntVec(a_.begin() + std::size_t(i) * cols_, a_.begin() + std::size_t(i + 1) * cols_); }
  IntMatrix columns(const std::vector<int>& idx) const {
    IntMatrix m(rows_, static_cast<int>(idx.size()));
    for (int i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) m(i, int(j)) = (*this)(i, idx[j]);
    return m;
  }
  IntVec apply(const IntVec& v) const {
    IntVec r(rows_, 0);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }
  std::vector<std::vector<long>> to_rows() const {
    std::vector<std::vector<long>> r;
    for (int i = 0; i < rows_; ++i) r.push_back(row(i));
    return r;
  }
  bool operator==(const IntMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<long> a_;
};

using ZMat = std::vector<std::vector<mpz_class>>;
using QMat = std::vector<std::vector<mpq_class>>;
using QVec = std::vector<mpq_class>;

inline QMat to_qmat(const IntMatrix& a) {
  QMat m(a.rows(), QVec(a.cols()));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m[i][j] = a(i, j);
  return m;
}

// Row echelon form over Q in place; returns pivot columns.
inline std::vector<int> q_row_reduce(QMat& m) {
  std::vector<int> pivots;
  std::size_t r = 0;
  std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    mpq_class inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      mpq_class f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

inline int q_rank(QMat m) { return static_cast<int>(q_row_reduce(m).size()); }

inline mpq_class q_det(QMat m) {
  std::size_t n = m.size();
  mpq_class det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      mpq_class f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

inline std::optional<QMat> q_inverse(const QMat& m) {
  std::size_t n = m.size();
  QMat aug(n, QVec(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = 1;
  }
  auto piv = q_row_reduce(aug);
  if (piv.size() < n || piv[n - 1] != static_cast<int>(n - 1)) return std::nullopt;
  QMat inv(n, QVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

inline QVec q_apply(const QMat& m, const QVec& v) {
  QVec r(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) r[i] += m[i][j] * v[j];
  return r;
}

namespace detail {

// Hermite normal form of the rows of m (row operations only), zero rows dropped.
inline ZMat row_hnf(ZMat m) {
  if (m.empty()) return m;
  std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      while (m[i][c] != 0) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), m[r][c].get_mpz_t(), m[i][c].get_mpz_t());
        for (std::size_t j = c; j < cols; ++j) m[r][j] -= q * m[i][j];
        std::swap(m[r], m[i]);
      }
    }
    if (m[r][c] == 0) continue;
    if (m[r][c] < 0)
      for (auto& x : m[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), m[i][c].get_mpz_t(), m[r][c].get_mpz_t());
      if (q != 0)
        for (std::size_t j = c; j < cols; ++j) m[i][j] -= q * m[r][j];
    }
    ++r;
  }
  m.resize(r);
  return m;
}

}  // namespace detail

namespace detail {

// Column operations on [A; I]: echelonizes the top block, the identity block records the transform.
// Returns the pivot count.
inline int column_echelon(const IntMatrix& a, ZMat& m) {
  int d = a.rows(), n = a.cols();
  m.assign(std::size_t(d + n), std::vector<mpz_class>(std::size_t(n)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = a(i, j);
  for (int j = 0; j < n; ++j) m[d + j][j] = 1;
  auto col_sub = [&](int dst, int src, const mpz_class& q) {
    for (int i = 0; i < d + n; ++i) m[i][dst] -= q * m[i][src];
  };
  auto col_swap = [&](int x, int y) {
    for (int i = 0; i < d + n; ++i) std::swap(m[i][x], m[i][y]);
  };
  int pc = 0;
  for (int r = 0; r < d && pc < n; ++r) {
    for (int j = pc + 1; j < n; ++j) {
      while (m[r][j] != 0) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), m[r][pc].get_mpz_t(), m[r][j].get_mpz_t());
        col_sub(pc, j, q);
        col_swap(pc, j);
      }
    }
    if (m[r][pc] != 0) ++pc;
  }
  return pc;
}

}  // namespace detail

// Some integer x with A x = b; nullopt when b is outside the column lattice. A must have full row rank.
inline std::optional<IntVec> integer_solution(const IntMatrix& a, const IntVec& b) {
  int d = a.rows(), n = a.cols();
  ZMat m;
  if (detail::column_echelon(a, m) != d) throw ParameterError("matrix does not have full row rank");
  std::vector<mpz_class> y(static_cast<std::size_t>(d));
  for (int r = 0; r < d; ++r) {
    mpz_class rhs = b[std::size_t(r)];
    for (int c = 0; c < r; ++c) rhs -= m[r][c] * y[c];
    if (!mpz_divisible_p(rhs.get_mpz_t(), m[r][r].get_mpz_t())) return std::nullopt;
    y[r] = rhs / m[r][r];
  }
  IntVec x(std::size_t(n), 0);
  for (int i = 0; i < n; ++i) {
    mpz_class v = 0;
    for (int c = 0; c < d; ++c) v += m[d + i][c] * y[c];
    if (!v.fits_slong_p()) throw ResourceError("solution entry too large");
    x[i] = v.get_si();
  }
  return x;
}

// Basis of ker(A) in Z^N, returned in row Hermite normal form.
inline std::vector<IntVec> kernel_lattice(const IntMatrix& a) {
  int d = a.rows(), n = a.cols();
  ZMat m;
  int pc = detail::column_echelon(a, m);
  ZMat basis;
  for (int j = pc; j < n; ++j) {
    std::vector<mpz_class> v(n);
    for (int i = 0; i < n; ++i) v[i] = m[d + i][j];
    basis.push_back(v);
  }
  basis = detail::row_hnf(basis);
  std::vector<IntVec> out;
  for (auto& v : basis) {
    IntVec w(n);
    for (int i = 0; i < n; ++i) {
      if (!v[i].fits_slong_p()) throw ResourceError("kernel entry too large");
      w[i] = v[i].get_si();
    }
    out.push_back(w);
  }
  return out;
}

// Invariant factors of an integer matrix (nonzero ones, in divisibility order).
inline std::vector<mpz_class> smith_invariants(ZMat m) {
  std::vector<mpz_class> out;
  if (m.empty()) return out;
  std::size_t rows = m.size(), cols = m[0].size();
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // smallest nonzero entry as pivot
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (m[i][j] != 0 && (pi == rows || abs(m[i][j]) < abs(m[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi == rows) break;
    std::swap(m[t], m[pi]);
    for (auto& row : m) std::swap(row[t], row[pj]);
    bool clean = true;
    for (std::size_t i = t + 1; i < rows; ++i) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), m[i][t].get_mpz_t(), m[t][t].get_mpz_t());
      for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
      if (m[i][t] != 0) clean = false;
    }
    for (std::size_t j = t + 1; j < cols; ++j) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), m[t][j].get_mpz_t(), m[t][t].get_mpz_t());
      for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
      if (m[t][j] != 0) clean = false;
    }
    if (!clean) continue;
    bool divides = true;
    for (std::size_t i = t + 1; i < rows && divides; ++i)
      for (std::size_t j = t + 1; j < cols; ++j)
        if (m[i][j] % m[t][t] != 0) {
          for (std::size_t k = t; k < cols; ++k) m[t][k] += m[i][k];
          divides = false;
          break;
        }
    if (!divides) continue;
    out.push_back(abs(m[t][t]));
    ++t;
  }
  return out;
}

inline ZMat to_zmat(const std::vector<IntVec>& rows) {
  ZMat m;
  for (auto& r : rows) {
    std::vector<mpz_class> v;
    for (long x : r) v.emplace_back(x);
    m.push_back(v);
  }
  return m;
}

}  // namespace gkz
