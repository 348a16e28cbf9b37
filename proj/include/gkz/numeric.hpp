#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <gmpxx.h>

#include <string>

namespace gkz {

using Real = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultDigits = 50;

// Digits used by every Real created afterwards.
inline void set_precision(unsigned digits) { Real::default_precision(digits); }

namespace detail {
inline const bool precision_set = (set_precision(kDefaultDigits), true);
}

inline Real to_real(const mpq_class& q) { return Real(q.get_num().get_str()) / Real(q.get_den().get_str()); }

inline Real real_pi() { return boost::math::constants::pi<Real>(); }

// Complex over Real; std::complex is only specified for the built-in floating types.
struct Complex {
  Real re, im;
  Complex() : re(0), im(0) {}
  Complex(Real r) : re(std::move(r)), im(0) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator/(const Complex& a, const Complex& b) {
    Real n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  Complex& operator+=(const Complex& b) { return *this = *this + b; }
  Complex& operator*=(const Complex& b) { return *this = *this * b; }
};

inline Real abs(const Complex& z) { return boost::multiprecision::hypot(z.re, z.im); }
inline Complex cexp(const Complex& z) {
  Real r = boost::multiprecision::exp(z.re);
  return {r * boost::multiprecision::cos(z.im), r * boost::multiprecision::sin(z.im)};
}
// Principal branch, argument in (-pi, pi].
inline Complex clog(const Complex& z) { return {boost::multiprecision::log(abs(z)), boost::multiprecision::atan2(z.im, z.re)}; }

inline std::string real_to_string(const Real& x, int digits = 20) { return x.str(digits, std::ios_base::scientific); }

}  // namespace gkz
