#pragma once

#include <vector>

#include "gkz/format.hpp"

namespace gkz {

// Dense matrix over Q(b)(z).
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  explicit RatMatrix(const std::vector<std::vector<RatFun>>& rows) : rows_(rows.size()), cols_(rows.empty() ? 0 : rows[0].size()) {
    for (auto& r : rows) {
      if (r.size() != cols_) throw ParameterError("ragged matrix");
      a_.insert(a_.end(), r.begin(), r.end());
    }
  }
  static RatMatrix identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = RatFun(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  RatFun& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const RatFun& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  bool is_zero() const {
    for (auto& x : a_)
      if (!x.is_zero()) return false;
    return true;
  }
  bool operator==(const RatMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
  bool operator!=(const RatMatrix& o) const { return !(*this == o); }

  friend RatMatrix operator+(const RatMatrix& x, const RatMatrix& y) { return zip(x, y, false); }
  friend RatMatrix operator-(const RatMatrix& x, const RatMatrix& y) { return zip(x, y, true); }
  friend RatMatrix operator*(const RatMatrix& x, const RatMatrix& y) {
    if (x.cols_ != y.rows_) throw ParameterError("matrix shape mismatch");
    RatMatrix r(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t j = 0; j < y.cols_; ++j) {
        RatFun s;
        for (std::size_t k = 0; k < x.cols_; ++k)
          if (!x(i, k).is_zero() && !y(k, j).is_zero()) s += x(i, k) * y(k, j);
        r(i, j) = s;
      }
    return r;
  }
  RatMatrix scaled(const RatFun& c) const {
    RatMatrix r = *this;
    for (auto& x : r.a_) x = c * x;
    return r;
  }
  RatMatrix transpose() const {
    RatMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }
  RatMatrix derivative(std::size_t slot) const { return map([&](const RatFun& f) { return f.derivative(slot); }); }
  RatMatrix substitute(std::size_t slot, const mpq_class& v) const {
    return map([&](const RatFun& f) { return f.substitute(slot, v); });
  }
  RatMatrix substitute(std::size_t slot, const RatFun& v) const {
    return map([&](const RatFun& f) { return f.substitute(slot, v); });
  }
  template <class F>
  RatMatrix map(F f) const {
    RatMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = f(a_[i]);
    return r;
  }

  // Gauss-Jordan elimination; pivots prefer the entry with the fewest terms. Throws NotABasisError when singular.
  RatMatrix inverse() const {
    if (rows_ != cols_) throw ParameterError("inverse of a non-square matrix");
    std::size_t n = rows_;
    RatMatrix m = *this, inv = identity(n);
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = n;
      for (std::size_t r = c; r < n; ++r)
        if (!m(r, c).is_zero() && (piv == n || weight(m(r, c)) < weight(m(piv, c)))) piv = r;
      if (piv == n) throw NotABasisError("matrix is singular");
      if (piv != c)
        for (std::size_t j = 0; j < n; ++j) {
          std::swap(m(piv, j), m(c, j));
          std::swap(inv(piv, j), inv(c, j));
        }
      RatFun p = m(c, c).inverse();
      for (std::size_t j = 0; j < n; ++j) {
        if (!m(c, j).is_zero()) m(c, j) = m(c, j) * p;
        if (!inv(c, j).is_zero()) inv(c, j) = inv(c, j) * p;
      }
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c || m(r, c).is_zero()) continue;
        RatFun f = m(r, c);
        for (std::size_t j = 0; j < n; ++j) {
          if (!m(c, j).is_zero()) m(r, j) -= f * m(c, j);
          if (!inv(c, j).is_zero()) inv(r, j) -= f * inv(c, j);
        }
      }
    }
    return inv;
  }

 private:
  static std::size_t weight(const RatFun& f) { return f.num().size() + f.den().size(); }
  static RatMatrix zip(const RatMatrix& x, const RatMatrix& y, bool subtract) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_) throw ParameterError("matrix shape mismatch");
    RatMatrix r = x;
    for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = subtract ? x.a_[i] - y.a_[i] : x.a_[i] + y.a_[i];
    return r;
  }

  std::size_t rows_ = 0, cols_ = 0;
  std::vector<RatFun> a_;
};

inline std::vector<std::vector<std::string>> matrix_to_strings(const RatMatrix& m, const SymbolTable& t) {
  std::vector<std::vector<std::string>> out(m.rows(), std::vector<std::string>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = ratfun_to_string(m(i, j), t);
  return out;
}

inline RatMatrix parse_matrix(const std::vector<std::vector<std::string>>& rows, const SymbolTable& t) {
  std::vector<std::vector<RatFun>> v;
  for (auto& r : rows) {
    v.emplace_back();
    for (auto& s : r) v.back().push_back(parse_ratfun(s, t));
  }
  return RatMatrix(v);
}

}  // namespace gkz
