#pragma once

#include <cctype>
#include <functional>
#include <sstream>
#include <string>

#include "gkz/ratfun.hpp"

namespace gkz {

inline std::string monomial_to_string(const Monomial& m, const SymbolTable& t) {
  std::string s;
  for (std::size_t i = 0; i < kMaxSlots; ++i) {
    unsigned e = m[i];
    if (!e) continue;
    if (!s.empty()) s += '*';
    s += t.name(i);
    if (e > 1) s += '^' + std::to_string(e);
  }
  return s;
}

inline std::string terms_to_string(const std::vector<Term>& terms, const SymbolTable& t) {
  if (terms.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto& term : terms) {
    mpq_class c = term.c;
    bool neg = c < 0;
    if (neg) c = -c;
    if (neg) s += '-';
    else if (!first) s += '+';
    std::string ms = monomial_to_string(term.m, t);
    if (ms.empty()) {
      s += c.get_str();
    } else {
      if (c != 1) s += c.get_str() + '*';
      s += ms;
    }
    first = false;
  }
  return s;
}

inline std::string poly_to_string(const MultiPoly& p, const SymbolTable& t) { return terms_to_string(p.terms(), t); }

inline std::string ratfun_to_string(const RatFun& f, const SymbolTable& t) {
  if (f.is_polynomial()) return poly_to_string(f.num(), t);
  return "(" + poly_to_string(f.num(), t) + ")/(" + poly_to_string(f.den(), t) + ")";
}

// Recursive-descent parser for the expression grammar:
//   expr  := ['+'|'-'] term {('+'|'-') term}
//   term  := power {['*'|'/'] power}      (juxtaposition multiplies)
//   power := '-' power | atom ['^' ['-'] integer]
//   atom  := number | identifier | '(' expr ')'
// V supplies arithmetic; the callbacks turn literals and identifiers into values.
template <class V>
class ExprParser {
 public:
  using Ident = std::function<V(const std::string&)>;
  using Num = std::function<V(const mpq_class&)>;
  using Div = std::function<V(const V&, const V&)>;
  using Pow = std::function<V(const V&, int)>;

  ExprParser(std::string src, Ident ident, Num num, Div div, Pow pow)
      : s_(std::move(src)), ident_(std::move(ident)), num_(std::move(num)), div_(std::move(div)), pow_(std::move(pow)) {}

  V parse() {
    V v = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected character");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    throw ParseError(why + " at position " + std::to_string(i_) + " in '" + s_ + "'");
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }
  bool starts_atom() {
    skip();
    if (i_ >= s_.size()) return false;
    char c = s_[i_];
    return std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '_' || c == '.';
  }

  V expr() {
    bool neg = false;
    if (peek('+')) ++i_;
    else if (peek('-')) {
      ++i_;
      neg = true;
    }
    V v = term();
    if (neg) v = num_(mpq_class(-1)) * v;
    while (true) {
      if (peek('+')) {
        ++i_;
        v = v + term();
      } else if (peek('-')) {
        ++i_;
        v = v - term();
      } else {
        break;
      }
    }
    return v;
  }

  V term() {
    V v = power();
    while (true) {
      if (peek('*')) {
        ++i_;
        v = v * power();
      } else if (peek('/')) {
        ++i_;
        v = div_(v, power());
      } else if (starts_atom()) {
        v = v * power();
      } else {
        break;
      }
    }
    return v;
  }

  V power() {
    if (peek('-')) {
      ++i_;
      return num_(mpq_class(-1)) * power();
    }
    V v = atom();
    if (peek('^')) {
      ++i_;
      skip();
      bool neg = false;
      if (peek('-')) {
        ++i_;
        neg = true;
      }
      skip();
      std::size_t start = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (start == i_) fail("expected integer exponent");
      int e = std::stoi(s_.substr(start, i_ - start));
      v = pow_(v, neg ? -e : e);
    }
    return v;
  }

  V atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of input");
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      V v = expr();
      if (!peek(')')) fail("expected ')'");
      ++i_;
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      std::string intpart = s_.substr(start, i_ - start);
      std::string frac;
      if (i_ < s_.size() && s_[i_] == '.') {
        ++i_;
        std::size_t fs = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        frac = s_.substr(fs, i_ - fs);
      }
      if (intpart.empty() && frac.empty()) fail("malformed number");
      mpz_class n(intpart.empty() ? std::string("0") : intpart);
      mpz_class d = 1;
      for (char f : frac) {
        n = n * 10 + (f - '0');
        d *= 10;
      }
      mpq_class q(n, d);
      q.canonicalize();
      return num_(q);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i_;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
      return ident_(s_.substr(start, i_ - start));
    }
    fail("unexpected character");
  }

  std::string s_;
  std::size_t i_ = 0;
  Ident ident_;
  Num num_;
  Div div_;
  Pow pow_;
};

inline RatFun parse_ratfun(const std::string& src, const SymbolTable& t) {
  ExprParser<RatFun> p(
      src, [&](const std::string& n) { return RatFun(MultiPoly::var(t.slot(n))); },
      [](const mpq_class& q) { return RatFun(q); }, [](const RatFun& a, const RatFun& b) {
        if (b.is_zero()) throw ParseError("division by zero");
        return a / b;
      },
      [](const RatFun& a, int e) { return a.pow(e); });
  return p.parse();
}

inline MultiPoly parse_poly(const std::string& src, const SymbolTable& t) {
  RatFun f = parse_ratfun(src, t);
  if (!f.is_polynomial()) throw ParseError("expected a polynomial: '" + src + "'");
  return f.num();
}

inline mpq_class parse_rational(const std::string& src) {
  RatFun f = parse_ratfun(src, SymbolTable());
  if (!f.is_constant()) throw ParseError("expected a rational number: '" + src + "'");
  return f.num().constant_value();
}

}  // namespace gkz
