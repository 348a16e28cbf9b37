#pragma once

#include <string>
#include <vector>

#include "gkz/intmat.hpp"

namespace gkz {

// Integer matrix A of a Cayley configuration: the first k rows are indicator rows of the polynomial groups,
// the remaining n rows carry the exponent vectors. d = k + n rows, N columns.
class CayleyConfig {
 public:
  CayleyConfig() = default;
  explicit CayleyConfig(IntMatrix a, int k = -1) : a_(std::move(a)) {
    if (a_.rows() == 0 || a_.cols() == 0) throw ParameterError("empty matrix");
    if (a_.rows() > a_.cols()) throw ParameterError("matrix has more rows than columns");
    k_ = k < 0 ? infer_k(a_) : k;
    if (k_ < 1 || k_ > a_.rows()) throw ParameterError("matrix is not of Cayley type");
    block_.assign(a_.cols(), -1);
    for (int j = 0; j < a_.cols(); ++j) {
      for (int l = 0; l < k_; ++l) {
        long v = a_(l, j);
        if (v != 0 && v != 1) throw ParameterError("indicator rows must be 0/1");
        if (v == 1) {
          if (block_[j] >= 0) throw ParameterError("column in two polynomial groups");
          block_[j] = l;
        }
      }
      if (block_[j] < 0) throw ParameterError("column in no polynomial group");
    }
    if (q_rank(to_qmat(a_)) != a_.rows()) throw ParameterError("matrix does not have full row rank");
    ZMat z;
    for (auto& r : a_.to_rows()) {
      std::vector<mpz_class> v;
      for (long x : r) v.emplace_back(x);
      z.push_back(v);
    }
    for (auto& f : smith_invariants(z))
      if (f != 1) throw ParameterError("columns do not generate the full integer lattice");
  }

  const IntMatrix& matrix() const { return a_; }
  int d() const { return a_.rows(); }
  int N() const { return a_.cols(); }
  int k() const { return k_; }
  int n() const { return a_.rows() - k_; }
  // 0-based polynomial group of column j.
  int block(int j) const { return block_[j]; }
  IntVec column(int j) const { return a_.column(j); }
  long entry(int i, int j) const { return a_(i, j); }

 private:
  static int infer_k(const IntMatrix& a) {
    std::vector<int> count(a.cols(), 0);
    int k = 0;
    for (int l = 0; l < a.rows(); ++l) {
      bool ok = true, nonempty = false;
      for (int j = 0; j < a.cols(); ++j) {
        long v = a(l, j);
        if (v != 0 && v != 1) ok = false;
        if (v == 1 && count[j] > 0) ok = false;
        if (v == 1) nonempty = true;
      }
      if (!ok || !nonempty) break;
      for (int j = 0; j < a.cols(); ++j) count[j] += int(a(l, j));
      ++k;
      bool covered = true;
      for (int c : count) covered = covered && c == 1;
      if (covered) return k;
    }
    throw ParameterError("matrix is not of Cayley type");
  }

  IntMatrix a_;
  int k_ = 0;
  std::vector<int> block_;
};

}  // namespace gkz
