#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gkz/errors.hpp"

namespace gkz {

inline constexpr std::size_t kMaxSlots = 32;

// Exponent vector over a fixed set of slots. Slot meaning is assigned by a SymbolTable.
class Monomial {
 public:
  Monomial() { e_.fill(0); }

  static Monomial var(std::size_t slot, unsigned power = 1) {
    Monomial m;
    m.set(slot, power);
    return m;
  }

  unsigned operator[](std::size_t i) const { return e_[i]; }
  unsigned degree() const { return deg_; }
  bool is_one() const { return deg_ == 0; }

  void set(std::size_t i, unsigned v) {
    if (i >= kMaxSlots) throw ResourceError("monomial slot out of range");
    if (v > 255) throw ResourceError("exponent overflow");
    deg_ = static_cast<std::uint16_t>(deg_ - e_[i] + v);
    e_[i] = static_cast<std::uint8_t>(v);
  }

  Monomial operator*(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < kMaxSlots; ++i) {
      unsigned v = unsigned(e_[i]) + o.e_[i];
      if (v > 255) throw ResourceError("exponent overflow");
      r.e_[i] = static_cast<std::uint8_t>(v);
    }
    r.deg_ = static_cast<std::uint16_t>(deg_ + o.deg_);
    return r;
  }

  bool divides(const Monomial& o) const {
    if (deg_ > o.deg_) return false;
    for (std::size_t i = 0; i < kMaxSlots; ++i)
      if (e_[i] > o.e_[i]) return false;
    return true;
  }

  // Requires o.divides(*this).
  Monomial operator/(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < kMaxSlots; ++i) r.e_[i] = static_cast<std::uint8_t>(e_[i] - o.e_[i]);
    r.deg_ = static_cast<std::uint16_t>(deg_ - o.deg_);
    return r;
  }

  static Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial r;
    unsigned d = 0;
    for (std::size_t i = 0; i < kMaxSlots; ++i) {
      r.e_[i] = std::max(a.e_[i], b.e_[i]);
      d += r.e_[i];
    }
    r.deg_ = static_cast<std::uint16_t>(d);
    return r;
  }

  static Monomial gcd(const Monomial& a, const Monomial& b) {
    Monomial r;
    unsigned d = 0;
    for (std::size_t i = 0; i < kMaxSlots; ++i) {
      r.e_[i] = std::min(a.e_[i], b.e_[i]);
      d += r.e_[i];
    }
    r.deg_ = static_cast<std::uint16_t>(d);
    return r;
  }

  std::uint32_t support() const {
    std::uint32_t s = 0;
    for (std::size_t i = 0; i < kMaxSlots; ++i)
      if (e_[i]) s |= (1u << i);
    return s;
  }

  bool operator==(const Monomial& o) const { return deg_ == o.deg_ && e_ == o.e_; }
  bool operator!=(const Monomial& o) const { return !(*this == o); }

  std::size_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto c : e_) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }

  const std::array<std::uint8_t, kMaxSlots>& exps() const { return e_; }

 private:
  std::array<std::uint8_t, kMaxSlots> e_;
  std::uint16_t deg_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

// Canonical order: graded reverse lexicographic with slot 0 the smallest variable.
// Returns negative, zero or positive.
inline int canonical_cmp(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
  for (std::size_t i = 0; i < kMaxSlots; ++i) {
    if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
  }
  return 0;
}

struct Term {
  Monomial m;
  mpq_class c;
};

// Sparse polynomial over Q, terms sorted strictly descending in the canonical order.
class MultiPoly {
 public:
  MultiPoly() = default;
  explicit MultiPoly(const mpq_class& c) {
    if (c != 0) terms_.push_back({Monomial(), c});
  }
  explicit MultiPoly(long c) : MultiPoly(mpq_class(c)) {}

  static MultiPoly var(std::size_t slot) { return term(Monomial::var(slot), 1); }
  static MultiPoly term(const Monomial& m, const mpq_class& c) {
    MultiPoly p;
    if (c != 0) p.terms_.push_back({m, c});
    return p;
  }
  // Builds from arbitrary unsorted terms, combining duplicates.
  static MultiPoly from_terms(std::vector<Term> ts) {
    MultiPoly p;
    std::sort(ts.begin(), ts.end(), [](const Term& a, const Term& b) { return canonical_cmp(a.m, b.m) > 0; });
    for (auto& t : ts) {
      if (!p.terms_.empty() && p.terms_.back().m == t.m) {
        p.terms_.back().c += t.c;
      } else {
        if (!p.terms_.empty() && p.terms_.back().c == 0) p.terms_.pop_back();
        p.terms_.push_back(std::move(t));
      }
    }
    if (!p.terms_.empty() && p.terms_.back().c == 0) p.terms_.pop_back();
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].m.is_one()); }
  bool is_one() const { return terms_.size() == 1 && terms_[0].m.is_one() && terms_[0].c == 1; }
  mpq_class constant_value() const { return is_zero() ? mpq_class(0) : terms_.back().m.is_one() ? terms_.back().c : mpq_class(0); }
  const Term& lt() const { return terms_.front(); }
  const mpq_class& lc() const { return terms_.front().c; }
  const Monomial& lm() const { return terms_.front().m; }

  unsigned total_degree() const {
    unsigned d = 0;
    for (auto& t : terms_) d = std::max(d, t.m.degree());
    return d;
  }
  unsigned degree(std::size_t slot) const {
    unsigned d = 0;
    for (auto& t : terms_) d = std::max(d, t.m[slot]);
    return d;
  }
  std::uint32_t support() const {
    std::uint32_t s = 0;
    for (auto& t : terms_) s |= t.m.support();
    return s;
  }
  // Smallest monomial dividing every term.
  Monomial monomial_content() const {
    if (terms_.empty()) return Monomial();
    Monomial g = terms_[0].m;
    for (auto& t : terms_) g = Monomial::gcd(g, t.m);
    return g;
  }

  MultiPoly operator-() const {
    MultiPoly r = *this;
    for (auto& t : r.terms_) t.c = -t.c;
    return r;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) { return merge(a, b, false); }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return merge(a, b, true); }
  MultiPoly& operator+=(const MultiPoly& b) { return *this = merge(*this, b, false); }
  MultiPoly& operator-=(const MultiPoly& b) { return *this = merge(*this, b, true); }

  MultiPoly mul_term(const Monomial& m, const mpq_class& c) const {
    MultiPoly r;
    if (c == 0) return r;
    r.terms_.reserve(terms_.size());
    for (auto& t : terms_) r.terms_.push_back({t.m * m, t.c * c});
    return r;
  }
  MultiPoly scaled(const mpq_class& c) const { return mul_term(Monomial(), c); }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    if (a.is_zero() || b.is_zero()) return MultiPoly();
    if (a.size() == 1) return b.mul_term(a.terms_[0].m, a.terms_[0].c);
    if (b.size() == 1) return a.mul_term(b.terms_[0].m, b.terms_[0].c);
    std::unordered_map<Monomial, mpq_class, MonomialHash> acc;
    acc.reserve(a.size() * b.size());
    mpq_class tmp;
    for (auto& x : a.terms_)
      for (auto& y : b.terms_) {
        mpq_mul(tmp.get_mpq_t(), x.c.get_mpq_t(), y.c.get_mpq_t());
        auto [it, fresh] = acc.try_emplace(x.m * y.m, tmp);
        if (!fresh) it->second += tmp;
      }
    MultiPoly r;
    r.terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (c != 0) r.terms_.push_back({m, c});
    std::sort(r.terms_.begin(), r.terms_.end(), [](const Term& x, const Term& y) { return canonical_cmp(x.m, y.m) > 0; });
    return r;
  }
  MultiPoly& operator*=(const MultiPoly& b) { return *this = *this * b; }

  MultiPoly pow(unsigned n) const {
    MultiPoly r(1), base = *this;
    while (n) {
      if (n & 1) r = r * base;
      n >>= 1;
      if (n) base = base * base;
    }
    return r;
  }

  MultiPoly derivative(std::size_t slot) const {
    std::vector<Term> ts;
    for (auto& t : terms_) {
      unsigned e = t.m[slot];
      if (!e) continue;
      Monomial m = t.m;
      m.set(slot, e - 1);
      ts.push_back({m, t.c * e});
    }
    return from_terms(std::move(ts));
  }

  MultiPoly substitute(std::size_t slot, const mpq_class& v) const {
    std::vector<Term> ts;
    ts.reserve(terms_.size());
    for (auto& t : terms_) {
      unsigned e = t.m[slot];
      if (!e) {
        ts.push_back(t);
        continue;
      }
      mpq_class c = t.c;
      mpq_class p;
      mpz_pow_ui(mpq_numref(p.get_mpq_t()), mpq_numref(v.get_mpq_t()), e);
      mpz_pow_ui(mpq_denref(p.get_mpq_t()), mpq_denref(v.get_mpq_t()), e);
      c *= p;
      Monomial m = t.m;
      m.set(slot, 0);
      ts.push_back({m, c});
    }
    return from_terms(std::move(ts));
  }

  MultiPoly substitute(std::size_t slot, const MultiPoly& v) const {
    std::vector<MultiPoly> powers{MultiPoly(1)};
    MultiPoly r;
    std::vector<Term> keep;
    for (auto& t : terms_) {
      unsigned e = t.m[slot];
      if (!e) {
        keep.push_back(t);
        continue;
      }
      while (powers.size() <= e) powers.push_back(powers.back() * v);
      Monomial m = t.m;
      m.set(slot, 0);
      r += powers[e].mul_term(m, t.c);
    }
    return r + from_terms(std::move(keep));
  }

  // Evaluates all slots; values[i] is used for slot i.
  mpq_class evaluate(const std::vector<mpq_class>& values) const {
    mpq_class s = 0;
    for (auto& t : terms_) {
      mpq_class x = t.c;
      for (std::size_t i = 0; i < kMaxSlots; ++i) {
        unsigned e = t.m[i];
        if (!e) continue;
        if (i >= values.size()) throw ParameterError("evaluation point misses a slot");
        for (unsigned k = 0; k < e; ++k) x *= values[i];
      }
      s += x;
    }
    return s;
  }

  // Coefficients with respect to one slot, indexed by degree. Coefficients are free of the slot.
  std::vector<MultiPoly> coefficients_in(std::size_t slot) const {
    std::vector<std::vector<Term>> buckets(degree(slot) + 1);
    for (auto& t : terms_) {
      Monomial m = t.m;
      unsigned e = m[slot];
      m.set(slot, 0);
      buckets[e].push_back({m, t.c});
    }
    std::vector<MultiPoly> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) {
      MultiPoly p;
      p.terms_ = std::move(b);
      std::sort(p.terms_.begin(), p.terms_.end(), [](const Term& x, const Term& y) { return canonical_cmp(x.m, y.m) > 0; });
      out.push_back(std::move(p));
    }
    return out;
  }

  // Splits by the exponents on the slots in mask; returns the coefficient polynomials (free of those slots).
  std::vector<MultiPoly> coefficients_on(std::uint32_t mask) const {
    std::unordered_map<Monomial, std::vector<Term>, MonomialHash> groups;
    std::vector<Monomial> order;
    for (auto& t : terms_) {
      Monomial key, rest = t.m;
      for (std::size_t i = 0; i < kMaxSlots; ++i)
        if ((mask >> i) & 1u) {
          key.set(i, t.m[i]);
          rest.set(i, 0);
        }
      auto [it, fresh] = groups.try_emplace(key);
      if (fresh) order.push_back(key);
      it->second.push_back({rest, t.c});
    }
    std::vector<MultiPoly> out;
    for (auto& k : order) out.push_back(from_terms(std::move(groups[k])));
    return out;
  }

  // Exact quotient if b divides *this, otherwise nullopt.
  std::optional<MultiPoly> divide_exact(const MultiPoly& b) const {
    if (b.is_zero()) throw ParameterError("division by zero polynomial");
    if (is_zero()) return MultiPoly();
    if (b.size() == 1) {
      const auto& bt = b.terms_[0];
      MultiPoly q;
      q.terms_.reserve(terms_.size());
      for (auto& t : terms_) {
        if (!bt.m.divides(t.m)) return std::nullopt;
        q.terms_.push_back({t.m / bt.m, t.c / bt.c});
      }
      return q;
    }
    for (std::size_t i = 0; i < kMaxSlots; ++i)
      if (b.degree(i) > degree(i)) return std::nullopt;
    if (b.total_degree() > total_degree()) return std::nullopt;
    std::vector<Term> q;
    MultiPoly r = *this;
    const Term& blt = b.terms_[0];
    while (!r.is_zero()) {
      const Term& rlt = r.terms_[0];
      if (!blt.m.divides(rlt.m)) return std::nullopt;
      Term t{rlt.m / blt.m, rlt.c / blt.c};
      r = sub_mul_term(r, b, t.m, t.c);
      q.push_back(std::move(t));
    }
    MultiPoly qp;
    qp.terms_ = std::move(q);
    return qp;
  }

  // Positive rational c such that *this / c has coprime integer coefficients and positive leading coefficient.
  mpq_class content() const {
    if (is_zero()) return 1;
    mpz_class num = 0, den = 1;
    for (auto& t : terms_) {
      mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.c.get_num_mpz_t());
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.c.get_den_mpz_t());
    }
    mpq_class c(num, den);
    c.canonicalize();
    if (lc() < 0) c = -c;
    return c;
  }
  MultiPoly primitive() const {
    if (is_zero()) return *this;
    mpq_class c = content();
    if (c == 1) return *this;
    return scaled(1 / c);
  }
  MultiPoly monic() const {
    if (is_zero()) return *this;
    return scaled(1 / lc());
  }

  bool operator==(const MultiPoly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
      if (terms_[i].m != o.terms_[i].m || terms_[i].c != o.terms_[i].c) return false;
    return true;
  }
  bool operator!=(const MultiPoly& o) const { return !(*this == o); }

  std::size_t hash() const {
    std::size_t h = 0;
    for (auto& t : terms_) h = h * 31 + t.m.hash() + std::hash<std::string>{}(t.c.get_str());
    return h;
  }

  // r - c*m*b, merging in one pass.
  static MultiPoly sub_mul_term(const MultiPoly& r, const MultiPoly& b, const Monomial& m, const mpq_class& c) {
    MultiPoly out;
    out.terms_.reserve(r.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    mpq_class tmp;
    while (i < r.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size()) {
        out.terms_.push_back(r.terms_[i++]);
        continue;
      }
      Monomial bm = b.terms_[j].m * m;
      int cmp = i == r.terms_.size() ? -1 : canonical_cmp(r.terms_[i].m, bm);
      if (cmp > 0) {
        out.terms_.push_back(r.terms_[i++]);
      } else if (cmp < 0) {
        mpq_mul(tmp.get_mpq_t(), b.terms_[j].c.get_mpq_t(), c.get_mpq_t());
        out.terms_.push_back({bm, -tmp});
        ++j;
      } else {
        mpq_mul(tmp.get_mpq_t(), b.terms_[j].c.get_mpq_t(), c.get_mpq_t());
        mpq_class v = r.terms_[i].c - tmp;
        if (v != 0) out.terms_.push_back({bm, v});
        ++i;
        ++j;
      }
    }
    return out;
  }

 private:
  static MultiPoly merge(const MultiPoly& a, const MultiPoly& b, bool subtract) {
    MultiPoly out;
    out.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() && j < b.terms_.size()) {
      int cmp = canonical_cmp(a.terms_[i].m, b.terms_[j].m);
      if (cmp > 0) {
        out.terms_.push_back(a.terms_[i++]);
      } else if (cmp < 0) {
        out.terms_.push_back(b.terms_[j++]);
        if (subtract) out.terms_.back().c = -out.terms_.back().c;
      } else {
        mpq_class v = subtract ? mpq_class(a.terms_[i].c - b.terms_[j].c) : mpq_class(a.terms_[i].c + b.terms_[j].c);
        if (v != 0) out.terms_.push_back({a.terms_[i].m, v});
        ++i;
        ++j;
      }
    }
    while (i < a.terms_.size()) out.terms_.push_back(a.terms_[i++]);
    while (j < b.terms_.size()) {
      out.terms_.push_back(b.terms_[j++]);
      if (subtract) out.terms_.back().c = -out.terms_.back().c;
    }
    return out;
  }

  std::vector<Term> terms_;
};

inline MultiPoly operator*(const mpq_class& c, const MultiPoly& p) { return p.scaled(c); }

}  // namespace gkz
