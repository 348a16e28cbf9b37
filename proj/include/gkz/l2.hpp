#pragma once

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "gkz/series.hpp"

namespace gkz {

// (i/2)^n int prod |h_l|^{-2 gamma_l} prod |x_i|^{2 c_i} dx/x ^ dxbar/xbar, with h_l = sum_j z_j x^{a(j)} over the
// columns of group l. Integrals are reported in the d tau_1 ... d tau_2n normalization.
struct L2IntegralSpec {
  CayleyConfig config;
  QVec delta;  // (gamma_1..gamma_k, c_1..c_n)
  std::vector<Complex> z;
  Triangulation t;
  int K = 12;
};

struct L2Value {
  Real value;
  Real imaginary;  // vanishes for real parameters; kept as a consistency check
  Real last_shell;
};

// Gamma(1-gamma)^2 sin(pi gamma) sum_s pi^{2n} / sin(pi A_s^{-1} delta) |z_s|^{-2 A_s^{-1} delta} psi_s(z) psi_s(zbar).
inline L2Value l2_series_value(const L2IntegralSpec& s) {
  const CayleyConfig& a = s.config;
  if (int(s.delta.size()) != a.d()) throw ParameterError("parameter has the wrong length");
  if (int(s.z.size()) != a.N()) throw ParameterError("point has the wrong length");
  if (!is_unimodular(a, s.t)) throw ParameterError("triangulation is not unimodular");
  Real pi = real_pi(), pre = 1;
  for (int l = 0; l < a.k(); ++l) {
    const mpq_class& g = s.delta[std::size_t(l)];
    if (g.get_den() == 1) throw ParameterError("gamma_l must not be an integer");
    Real gr = to_real(g);
    Real gm = boost::math::tgamma(Real(1) - gr);
    pre *= gm * gm * boost::multiprecision::sin(pi * gr);
  }
  std::vector<Complex> zbar;
  for (auto& x : s.z) zbar.push_back(Complex(x.re, -x.im));
  Complex total;
  Real tail = 0;
  for (auto& sigma : s.t.simplices) {
    auto sd = simplex_data(a, sigma);
    auto u = apply_inverse(sd, s.delta);
    Real factor = pre * boost::multiprecision::pow(pi, 2 * a.n());
    for (std::size_t r = 0; r < u.size(); ++r) {
      if (u[r].get_den() == 1) throw ParameterError("resonant parameter: a sine factor vanishes");
      factor /= boost::multiprecision::sin(pi * to_real(u[r]));
      factor *= boost::multiprecision::pow(abs(s.z[std::size_t(sigma[r])]), -2 * to_real(u[r]));
    }
    auto series = psi_series(a, s.delta, sigma, s.K);
    SeriesValue p = evaluate(series, s.z), q = evaluate(series, zbar);
    total += Complex(factor) * p.value * q.value;
    tail += boost::multiprecision::abs(factor) * (p.last_shell * abs(q.value) + q.last_shell * abs(p.value));
  }
  return {total.re, total.im, tail};
}

struct QuadratureResult {
  double value = 0, error = 0;
};

// Univariate polynomial sum_e coefficients[e] x^e.
using CPoly = std::vector<std::complex<double>>;

inline std::complex<double> cpoly_eval(const CPoly& p, std::complex<double> x) {
  std::complex<double> r = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + *it;
  return r;
}

inline std::vector<std::complex<double>> cpoly_roots(CPoly p) {
  while (!p.empty() && p.back() == 0.0) p.pop_back();
  if (p.empty()) throw ParameterError("zero polynomial");
  std::vector<std::complex<double>> r;
  while (p.size() > 1 && p.front() == 0.0) {
    r.push_back(0);
    p.erase(p.begin());
  }
  if (p.size() == 2) r.push_back(-p[0] / p[1]);
  if (p.size() == 3) {
    auto s = std::sqrt(p[1] * p[1] - 4.0 * p[0] * p[2]);
    r.push_back((-p[1] + s) / (2.0 * p[2]));
    r.push_back((-p[1] - s) / (2.0 * p[2]));
  }
  if (p.size() > 3) throw ParameterError("quadrature supports polynomials of degree at most 2");
  return r;
}

// int_C prod |h_l(x)|^{-2 gamma_l} |x|^{2c-2} d tau_1 d tau_2 in polar coordinates about 0. The radial range is
// split at the moduli of the roots and the angular range at their arguments, so every singularity sits on a cell
// corner; the piece beyond the largest radius is mapped to a finite interval by r = 1/s.
inline QuadratureResult quadrature_oracle(const std::vector<CPoly>& h, const std::vector<double>& gamma, double c,
                                          double tolerance = 1e-10) {
  if (h.size() != gamma.size()) throw ParameterError("one exponent per polynomial is required");
  std::vector<double> radii{0}, angles;
  double at_zero = 2 * c - 2, at_infinity = 2 * c - 2;
  for (std::size_t l = 0; l < h.size(); ++l) {
    std::size_t deg = h[l].size();
    while (deg > 0 && h[l][deg - 1] == 0.0) --deg;
    if (deg == 0) throw ParameterError("zero polynomial");
    at_infinity -= 2 * gamma[l] * double(deg - 1);
    for (auto& z : cpoly_roots(h[l])) {
      if (std::abs(z) == 0) {
        at_zero -= 2 * gamma[l];
        continue;
      }
      if (-2 * gamma[l] <= -2) throw DivergenceError("integrand is not integrable at a zero of h");
      radii.push_back(std::abs(z));
      angles.push_back(std::arg(z));
    }
  }
  if (at_zero <= -2) throw DivergenceError("integrand is not integrable at the origin");
  if (at_infinity >= -2) throw DivergenceError("integrand is not integrable at infinity");
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  angles.push_back(-M_PI);
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
  angles.push_back(M_PI);

  auto f = [&](std::complex<double> x) {
    double v = std::pow(std::abs(x), 2 * c - 2);
    for (std::size_t l = 0; l < h.size(); ++l) v *= std::pow(std::abs(cpoly_eval(h[l], x)), -2 * gamma[l]);
    return std::isfinite(v) ? v : 0.0;
  };
  boost::math::quadrature::tanh_sinh<double> inner_rule, outer_rule;
  double err_total = 0;
  auto ring = [&](double r) {
    if (!(r > 0) || !std::isfinite(r)) return 0.0;
    double s = 0;
    for (std::size_t k = 0; k + 1 < angles.size(); ++k) {
      if (angles[k + 1] <= angles[k]) continue;
      double e = 0;
      s += inner_rule.integrate([&](double th) { return f(std::polar(r, th)); }, angles[k], angles[k + 1], tolerance,
                                &e);
    }
    return std::isfinite(s * r) ? s * r : 0.0;
  };
  QuadratureResult out;
  for (std::size_t k = 0; k + 1 < radii.size(); ++k) {
    double e = 0;
    out.value += outer_rule.integrate(ring, radii[k], radii[k + 1], tolerance, &e);
    err_total += e;
  }
  double rmax = radii.back() > 0 ? radii.back() : 1;
  if (radii.back() == 0) {
    double e = 0;
    out.value += outer_rule.integrate(ring, 0.0, 1.0, tolerance, &e);
    err_total += e;
  }
  double e = 0;
  out.value += outer_rule.integrate([&](double s) {
    double v = ring(1 / s) / (s * s);
    return std::isfinite(v) ? v : 0.0;
  }, 0.0, 1 / rmax, tolerance, &e);
  err_total += e;
  out.error = err_total;
  return out;
}

// Assembles sum_{i,j} p_i C^{ji} conj(q_j) with C the inverse of the homology intersection matrix, and converts
// from dt ^ dtbar to d tau_1 d tau_2 by dividing by -2i.
inline std::complex<double> tpr_expansion(const std::vector<std::complex<double>>& periods_omega,
                                          const std::vector<std::complex<double>>& periods_eta,
                                          const std::vector<std::vector<std::complex<double>>>& h) {
  Eigen::Index r = Eigen::Index(h.size());
  if (Eigen::Index(periods_omega.size()) != r || Eigen::Index(periods_eta.size()) != r)
    throw ParameterError("period vectors have the wrong length");
  Eigen::MatrixXcd m(r, r);
  Eigen::VectorXcd p(r), q(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (Eigen::Index(h[std::size_t(i)].size()) != r) throw ParameterError("homology intersection matrix is not square");
    for (Eigen::Index j = 0; j < r; ++j) m(i, j) = h[std::size_t(i)][std::size_t(j)];
    p(i) = periods_omega[std::size_t(i)];
    q(i) = periods_eta[std::size_t(i)];
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  if (!lu.isInvertible()) throw ParameterError("homology intersection matrix is singular");
  // sum_{i,j} p_i C^{ji} conj(q_j) = conj(q)^T C p
  std::complex<double> s = q.conjugate().transpose() * lu.solve(p);
  return s / std::complex<double>(0, -2);
}

// int_C |t|^{2(alpha-1)} |1-t|^{2(beta-1)} d tau_1 d tau_2 through the regularized interval (0,1).
inline std::complex<double> beta_tpr(double alpha, double beta) {
  auto e = [](double x) { return std::exp(std::complex<double>(0, 2 * M_PI * x)); };
  auto integral = [](double x) { return std::abs(x - std::round(x)) < 1e-12; };
  if (integral(alpha) || integral(beta) || integral(alpha + beta))
    throw ParameterError("local system is trivial around a singular point");
  std::complex<double> hom = (1.0 - e(alpha + beta)) / ((1.0 - e(alpha)) * (1.0 - e(beta)));
  std::complex<double> b = std::tgamma(alpha) * std::tgamma(beta) / std::tgamma(alpha + beta);
  return tpr_expansion({b}, {b}, {{hom}});
}

inline double beta_closed_form(double alpha, double beta) {
  double b = std::tgamma(alpha) * std::tgamma(beta) / std::tgamma(alpha + beta);
  return std::sin(M_PI * alpha) * std::sin(M_PI * beta) / std::sin(M_PI * (alpha + beta)) * b * b;
}

}  // namespace gkz
