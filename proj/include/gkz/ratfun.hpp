#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "gkz/gcd.hpp"

namespace gkz {

// Names for polynomial slots. The GKZ layout puts b1..bd in slots 0..d-1 and z1..zN after them.
class SymbolTable {
 public:
  SymbolTable() = default;
  explicit SymbolTable(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() > kMaxSlots) throw ResourceError("too many symbols");
    for (std::size_t i = 0; i < names_.size(); ++i) index_[names_[i]] = i;
  }

  static SymbolTable gkz(int d, int n) {
    std::vector<std::string> v;
    for (int i = 1; i <= d; ++i) v.push_back("b" + std::to_string(i));
    for (int j = 1; j <= n; ++j) v.push_back("z" + std::to_string(j));
    return SymbolTable(v);
  }
  static SymbolTable indexed(const std::string& stem, int count) {
    std::vector<std::string> v;
    for (int i = 1; i <= count; ++i) v.push_back(stem + std::to_string(i));
    return SymbolTable(v);
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t slot) const { return names_.at(slot); }
  bool has(const std::string& n) const { return index_.count(n) > 0; }
  std::size_t slot(const std::string& n) const {
    auto it = index_.find(n);
    if (it == index_.end()) throw ParseError("unknown symbol '" + n + "'");
    return it->second;
  }

  SymbolTable with(const std::string& extra) const {
    auto v = names_;
    v.push_back(extra);
    return SymbolTable(v);
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Element of Q(symbols) kept as a reduced fraction with monic denominator.
class RatFun {
 public:
  RatFun() : den_(1) {}
  RatFun(long c) : num_(c), den_(1) {}
  RatFun(const mpq_class& c) : num_(c), den_(1) {}
  RatFun(MultiPoly n) : num_(std::move(n)), den_(1) {}
  RatFun(MultiPoly n, MultiPoly d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

  // Trusted constructor: caller guarantees gcd(n,d)=1 and monic d.
  static RatFun reduced(MultiPoly n, MultiPoly d) {
    RatFun r;
    r.num_ = std::move(n);
    r.den_ = std::move(d);
    return r;
  }

  const MultiPoly& num() const { return num_; }
  const MultiPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_one(); }
  bool is_constant() const { return num_.is_constant() && den_.is_one(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  std::uint32_t support() const { return num_.support() | den_.support(); }

  RatFun operator-() const { return reduced(-num_, den_); }

  friend RatFun operator+(const RatFun& a, const RatFun& b) { return add(a, b, false); }
  friend RatFun operator-(const RatFun& a, const RatFun& b) { return add(a, b, true); }
  RatFun& operator+=(const RatFun& b) { return *this = add(*this, b, false); }
  RatFun& operator-=(const RatFun& b) { return *this = add(*this, b, true); }

  friend RatFun operator*(const RatFun& a, const RatFun& b) {
    if (a.is_zero() || b.is_zero()) return RatFun();
    if (a.den_.is_one() && b.den_.is_one()) return reduced(a.num_ * b.num_, a.den_);
    MultiPoly g1 = poly_gcd(a.num_, b.den_), g2 = poly_gcd(b.num_, a.den_);
    MultiPoly n1 = g1.is_one() ? a.num_ : *a.num_.divide_exact(g1);
    MultiPoly d2 = g1.is_one() ? b.den_ : *b.den_.divide_exact(g1);
    MultiPoly n2 = g2.is_one() ? b.num_ : *b.num_.divide_exact(g2);
    MultiPoly d1 = g2.is_one() ? a.den_ : *a.den_.divide_exact(g2);
    return monic_den(n1 * n2, d1 * d2);
  }
  RatFun& operator*=(const RatFun& b) { return *this = *this * b; }

  RatFun inverse() const {
    if (is_zero()) throw ParameterError("division by zero rational function");
    return monic_den(den_, num_);
  }
  friend RatFun operator/(const RatFun& a, const RatFun& b) { return a * b.inverse(); }
  RatFun& operator/=(const RatFun& b) { return *this = *this / b; }

  RatFun pow(int n) const {
    if (n < 0) return inverse().pow(-n);
    return reduced(num_.pow(static_cast<unsigned>(n)), den_.pow(static_cast<unsigned>(n)));
  }

  RatFun derivative(std::size_t slot) const {
    if (den_.is_one()) return RatFun(num_.derivative(slot));
    MultiPoly dd = den_.derivative(slot);
    if (dd.is_zero()) return RatFun(num_.derivative(slot), den_);
    return RatFun(num_.derivative(slot) * den_ - num_ * dd, den_ * den_);
  }

  RatFun substitute(std::size_t slot, const mpq_class& v) const {
    MultiPoly d = den_.substitute(slot, v);
    if (d.is_zero()) throw ParameterError("substitution makes a denominator vanish");
    return RatFun(num_.substitute(slot, v), d);
  }
  RatFun substitute(std::size_t slot, const RatFun& v) const {
    // numerator and denominator are homogenized by the largest power of v's denominator
    unsigned e = std::max(num_.degree(slot), den_.degree(slot));
    if (e == 0) return *this;
    auto homog = [&](const MultiPoly& p) {
      std::vector<MultiPoly> cs = p.coefficients_in(slot);
      MultiPoly out;
      MultiPoly vn_pow(1);
      std::vector<MultiPoly> vd_pows{MultiPoly(1)};
      for (unsigned i = 0; i < e; ++i) vd_pows.push_back(vd_pows.back() * v.den());
      for (std::size_t i = 0; i < cs.size(); ++i) {
        if (!cs[i].is_zero()) out += cs[i] * vn_pow * vd_pows[e - i];
        vn_pow = vn_pow * v.num();
      }
      return out;
    };
    MultiPoly d = homog(den_);
    if (d.is_zero()) throw ParameterError("substitution makes a denominator vanish");
    return RatFun(homog(num_), d);
  }

  mpq_class evaluate(const std::vector<mpq_class>& values) const {
    mpq_class d = den_.evaluate(values);
    if (d == 0) throw ParameterError("evaluation at a pole");
    return num_.evaluate(values) / d;
  }

  bool operator==(const RatFun& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RatFun& o) const { return !(*this == o); }

 private:
  static RatFun monic_den(MultiPoly n, MultiPoly d) {
    if (d.is_zero()) throw ParseError("zero denominator");
    mpq_class c = d.lc();
    if (c != 1) {
      n = n.scaled(1 / c);
      d = d.scaled(1 / c);
    }
    return reduced(std::move(n), std::move(d));
  }

  void normalize() {
    if (den_.is_zero()) throw ParseError("zero denominator");
    if (num_.is_zero()) {
      den_ = MultiPoly(1);
      return;
    }
    if (!den_.is_constant()) {
      MultiPoly g = poly_gcd(num_, den_);
      if (!g.is_one()) {
        num_ = *num_.divide_exact(g);
        den_ = *den_.divide_exact(g);
      }
    }
    *this = monic_den(std::move(num_), std::move(den_));
  }

  static RatFun add(const RatFun& a, const RatFun& b, bool subtract) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return subtract ? -b : b;
    if (a.den_.is_one() && b.den_.is_one()) return reduced(subtract ? a.num_ - b.num_ : a.num_ + b.num_, a.den_);
    if (a.den_ == b.den_) {
      MultiPoly n = subtract ? a.num_ - b.num_ : a.num_ + b.num_;
      return RatFun(std::move(n), a.den_);
    }
    MultiPoly g = poly_gcd(a.den_, b.den_);
    MultiPoly da = g.is_one() ? a.den_ : *a.den_.divide_exact(g);
    MultiPoly db = g.is_one() ? b.den_ : *b.den_.divide_exact(g);
    MultiPoly n = subtract ? a.num_ * db - b.num_ * da : a.num_ * db + b.num_ * da;
    if (n.is_zero()) return RatFun();
    MultiPoly d = da * b.den_;
    if (!g.is_constant()) {
      MultiPoly h = poly_gcd(n, g);
      if (!h.is_one()) {
        n = *n.divide_exact(h);
        d = *d.divide_exact(h);
      }
    }
    return monic_den(std::move(n), std::move(d));
  }

  MultiPoly num_;
  MultiPoly den_;
};

inline RatFun rat_normalize(const MultiPoly& n, const MultiPoly& d) { return RatFun(n, d); }

}  // namespace gkz
