#pragma once

#include <string>
#include <vector>

#include "gkz/poly.hpp"

namespace gkz {

// Term order on monomials in n variables x_1..x_n stored in slots 0..n-1.
// Variables are ranked by `vars` (largest first). An optional eliminated block is compared first by its degree.
class TermOrder {
 public:
  enum class Kind { grevlex, lex };

  TermOrder() = default;
  TermOrder(Kind kind, std::vector<int> vars, std::uint32_t elim_mask = 0)
      : kind_(kind), vars_(std::move(vars)), elim_(elim_mask) {}

  // x_1 > x_2 > ... > x_n
  static TermOrder grevlex(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return TermOrder(Kind::grevlex, v);
  }
  static TermOrder lex(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return TermOrder(Kind::lex, v);
  }
  // Default grevlex with variable `last` moved to the smallest position.
  static TermOrder grevlex_last(int n, int last) {
    std::vector<int> v;
    for (int i = 0; i < n; ++i)
      if (i != last) v.push_back(i);
    v.push_back(last);
    return TermOrder(Kind::grevlex, v);
  }
  static TermOrder parse(const std::string& name, int n) {
    if (name == "grevlex") return grevlex(n);
    if (name == "lex") return lex(n);
    throw ParseError("unknown term order '" + name + "'");
  }

  Kind kind() const { return kind_; }
  const std::vector<int>& vars() const { return vars_; }
  std::string name() const { return kind_ == Kind::grevlex ? "grevlex" : "lex"; }

  int cmp(const Monomial& a, const Monomial& b) const {
    if (elim_) {
      unsigned ea = 0, eb = 0;
      for (std::size_t i = 0; i < kMaxSlots; ++i)
        if ((elim_ >> i) & 1u) {
          ea += a[i];
          eb += b[i];
        }
      if (ea != eb) return ea < eb ? -1 : 1;
    }
    if (kind_ == Kind::lex) {
      for (int v : vars_)
        if (a[v] != b[v]) return a[v] < b[v] ? -1 : 1;
      return 0;
    }
    if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
    for (auto it = vars_.rbegin(); it != vars_.rend(); ++it)
      if (a[*it] != b[*it]) return a[*it] > b[*it] ? -1 : 1;
    return 0;
  }
  bool greater(const Monomial& a, const Monomial& b) const { return cmp(a, b) > 0; }

 private:
  Kind kind_ = Kind::grevlex;
  std::vector<int> vars_;
  std::uint32_t elim_ = 0;
};

}  // namespace gkz
