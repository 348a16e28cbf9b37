#pragma once

#include <string>
#include <vector>

#include "gkz/cayley.hpp"
#include "gkz/format.hpp"
#include "gkz/order.hpp"

namespace gkz {

// Slot layout shared by coefficients: b1..bd in slots 0..d-1, z1..zN in slots d..d+N-1.
// Derivative exponents live in a separate Monomial with slot j-1 for dz_j.
struct WeylRing {
  int d = 0;
  int N = 0;
  std::size_t beta(int i) const { return static_cast<std::size_t>(i); }   // 0-based
  std::size_t z(int j) const { return static_cast<std::size_t>(d + j); }  // 0-based
  SymbolTable symbols() const { return SymbolTable::gkz(d, N); }
  TermOrder default_order() const { return TermOrder::grevlex(N); }
  bool operator==(const WeylRing& o) const { return d == o.d && N == o.N; }
};

inline mpz_class binomial(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// Normally ordered operator sum c_a(z) dz^a, terms kept descending in the default grevlex order.
class WeylOperator {
 public:
  using TermT = std::pair<Monomial, RatFun>;

  WeylOperator() = default;
  explicit WeylOperator(WeylRing ring) : ring_(ring) {}
  WeylOperator(WeylRing ring, const RatFun& c) : ring_(ring) {
    if (!c.is_zero()) terms_.push_back({Monomial(), c});
  }
  static WeylOperator d(WeylRing ring, int j, unsigned power = 1) {
    WeylOperator op(ring);
    op.terms_.push_back({Monomial::var(std::size_t(j), power), RatFun(1)});
    return op;
  }
  static WeylOperator monomial(WeylRing ring, const Monomial& m, const RatFun& c) {
    WeylOperator op(ring);
    if (!c.is_zero()) op.terms_.push_back({m, c});
    return op;
  }

  const WeylRing& ring() const { return ring_; }
  const std::vector<TermT>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned order() const {
    unsigned o = 0;
    for (auto& t : terms_) o = std::max(o, t.first.degree());
    return o;
  }
  RatFun coefficient(const Monomial& m) const {
    for (auto& t : terms_)
      if (t.first == m) return t.second;
    return RatFun();
  }

  WeylOperator operator-() const {
    WeylOperator r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }
  friend WeylOperator operator+(const WeylOperator& a, const WeylOperator& b) { return merge(a, b, false); }
  friend WeylOperator operator-(const WeylOperator& a, const WeylOperator& b) { return merge(a, b, true); }
  WeylOperator& operator+=(const WeylOperator& b) { return *this = merge(*this, b, false); }
  WeylOperator& operator-=(const WeylOperator& b) { return *this = merge(*this, b, true); }

  // Left multiplication by a function of (b, z).
  WeylOperator scaled(const RatFun& c) const {
    WeylOperator r(ring_);
    if (c.is_zero()) return r;
    for (auto& t : terms_) {
      RatFun v = c * t.second;
      if (!v.is_zero()) r.terms_.push_back({t.first, v});
    }
    return r;
  }

  friend WeylOperator operator*(const WeylOperator& a, const WeylOperator& b) { return weyl_mul(a, b); }

  static WeylOperator weyl_mul(const WeylOperator& p, const WeylOperator& q) {
    WeylRing ring = p.is_zero() ? q.ring_ : p.ring_;
    std::vector<TermT> acc;
    for (auto& [alpha, a] : p.terms_) {
      for (auto& [beta, b] : q.terms_) {
        // dz^alpha * b = sum_mu binom(alpha,mu) (dz^mu b) dz^(alpha-mu)
        std::vector<std::pair<Monomial, RatFun>> stack{{Monomial(), b}};
        for (int j = 0; j < ring.N; ++j) {
          unsigned aj = alpha[std::size_t(j)];
          if (!aj) continue;
          std::vector<std::pair<Monomial, RatFun>> next;
          for (auto& [mu, f] : stack) {
            RatFun g = f;
            for (unsigned m = 0; m <= aj; ++m) {
              if (m > 0) g = g.derivative(ring.z(j));
              if (g.is_zero()) break;
              Monomial mu2 = mu;
              mu2.set(std::size_t(j), m);
              next.push_back({mu2, g * RatFun(mpq_class(binomial(aj, m)))});
            }
          }
          stack = std::move(next);
        }
        for (auto& [mu, f] : stack) acc.push_back({(alpha / mu) * beta, a * f});
      }
    }
    return collect(ring, std::move(acc));
  }

  WeylOperator pow(unsigned e) const {
    WeylOperator r(ring_, RatFun(1));
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
  }

  // Substitutes a rational number for one coefficient slot.
  WeylOperator substitute(std::size_t slot, const mpq_class& v) const {
    WeylOperator r(ring_);
    for (auto& t : terms_) {
      RatFun c = t.second.substitute(slot, v);
      if (!c.is_zero()) r.terms_.push_back({t.first, c});
    }
    return r;
  }

  bool operator==(const WeylOperator& o) const { return terms_ == o.terms_; }
  bool operator!=(const WeylOperator& o) const { return !(*this == o); }

  static WeylOperator collect(WeylRing ring, std::vector<TermT> acc) {
    TermOrder ord = ring.default_order();
    std::sort(acc.begin(), acc.end(), [&](const TermT& x, const TermT& y) { return ord.greater(x.first, y.first); });
    WeylOperator r(ring);
    for (auto& t : acc) {
      if (!r.terms_.empty() && r.terms_.back().first == t.first) {
        r.terms_.back().second += t.second;
      } else {
        if (!r.terms_.empty() && r.terms_.back().second.is_zero()) r.terms_.pop_back();
        r.terms_.push_back(std::move(t));
      }
    }
    if (!r.terms_.empty() && r.terms_.back().second.is_zero()) r.terms_.pop_back();
    return r;
  }

 private:
  static WeylOperator merge(const WeylOperator& a, const WeylOperator& b, bool subtract) {
    WeylRing ring = a.is_zero() ? b.ring_ : a.ring_;
    TermOrder ord = ring.default_order();
    WeylOperator r(ring);
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      int c = i == a.terms_.size() ? -1 : j == b.terms_.size() ? 1 : ord.cmp(a.terms_[i].first, b.terms_[j].first);
      if (c > 0) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (c < 0) {
        r.terms_.push_back(b.terms_[j++]);
        if (subtract) r.terms_.back().second = -r.terms_.back().second;
      } else {
        RatFun v = subtract ? a.terms_[i].second - b.terms_[j].second : a.terms_[i].second + b.terms_[j].second;
        if (!v.is_zero()) r.terms_.push_back({a.terms_[i].first, v});
        ++i;
        ++j;
      }
    }
    return r;
  }

  WeylRing ring_;
  std::vector<TermT> terms_;
};

inline WeylOperator theta(WeylRing ring, int j) {
  return WeylOperator::monomial(ring, Monomial::var(std::size_t(j)), RatFun(MultiPoly::var(ring.z(j))));
}

inline WeylRing ring_of(const CayleyConfig& a) { return WeylRing{a.d(), a.N()}; }

// E_i - b_i for i = 1..d.
inline std::vector<WeylOperator> euler_operators(const CayleyConfig& a) {
  WeylRing ring = ring_of(a);
  std::vector<WeylOperator> out;
  for (int i = 0; i < a.d(); ++i) {
    WeylOperator e(ring, RatFun(-MultiPoly::var(ring.beta(i))));
    for (int j = 0; j < a.N(); ++j)
      if (a.entry(i, j)) e += theta(ring, j).scaled(RatFun(a.entry(i, j)));
    out.push_back(e);
  }
  return out;
}

// prod_{u_j>0} dz_j^{u_j} - prod_{u_j<0} dz_j^{-u_j}
inline WeylOperator box_operator(WeylRing ring, const IntVec& u) {
  Monomial plus, minus;
  bool nonzero = false;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u[j] > 0) plus.set(j, unsigned(u[j]));
    if (u[j] < 0) minus.set(j, unsigned(-u[j]));
    nonzero = nonzero || u[j] != 0;
  }
  if (!nonzero) throw ParameterError("box operator of the zero vector");
  return WeylOperator::monomial(ring, plus, RatFun(1)) - WeylOperator::monomial(ring, minus, RatFun(1));
}

inline std::string dmonomial_to_string(const Monomial& m, int N) {
  std::string s;
  for (int j = 0; j < N; ++j) {
    unsigned e = m[std::size_t(j)];
    if (!e) continue;
    if (!s.empty()) s += '*';
    s += "dz" + std::to_string(j + 1);
    if (e > 1) s += '^' + std::to_string(e);
  }
  return s.empty() ? "1" : s;
}

inline std::string operator_to_string(const WeylOperator& op) {
  if (op.is_zero()) return "0";
  SymbolTable t = op.ring().symbols();
  std::string s;
  for (auto& [m, c] : op.terms()) {
    std::string cs = ratfun_to_string(c, t);
    std::string ms = m.is_one() ? "" : dmonomial_to_string(m, op.ring().N);
    std::string piece;
    if (ms.empty()) {
      piece = c.is_polynomial() && c.num().size() > 1 ? "(" + cs + ")" : cs;
    } else if (c.is_one()) {
      piece = ms;
    } else if (c.is_polynomial() && c.num().size() == 1) {
      piece = cs + "*" + ms;
    } else {
      piece = "(" + cs + ")*" + ms;
    }
    if (!s.empty()) s += piece[0] == '-' ? "" : "+";
    s += piece;
  }
  return s;
}

inline WeylOperator parse_operator(const std::string& src, WeylRing ring) {
  SymbolTable t = ring.symbols();
  ExprParser<WeylOperator> p(
      src,
      [&](const std::string& name) {
        if (name.size() > 2 && name.compare(0, 2, "dz") == 0) {
          int j = std::stoi(name.substr(2));
          if (j < 1 || j > ring.N) throw ParseError("unknown derivative '" + name + "'");
          return WeylOperator::d(ring, j - 1);
        }
        return WeylOperator(ring, RatFun(MultiPoly::var(t.slot(name))));
      },
      [&](const mpq_class& q) { return WeylOperator(ring, RatFun(q)); },
      [&](const WeylOperator& a, const WeylOperator& b) {
        if (b.is_zero() || b.order() > 0) throw ParseError("division by an operator");
        return a.scaled(b.terms()[0].second.inverse());
      },
      [&](const WeylOperator& a, int e) {
        if (e < 0) {
          if (a.order() > 0 || a.is_zero()) throw ParseError("negative power of an operator");
          return WeylOperator(ring, a.terms()[0].second.pow(e));
        }
        return a.pow(unsigned(e));
      });
  return p.parse();
}

}  // namespace gkz
