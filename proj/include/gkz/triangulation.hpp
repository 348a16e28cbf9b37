#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "gkz/cayley.hpp"

namespace gkz {

// Exact feasibility of L x >= rhs with free x, by phase-one simplex with Bland's rule.
inline std::optional<QVec> lp_feasible_point(const QMat& L, const QVec& rhs) {
  std::size_t m = L.size();
  if (m == 0) return QVec();
  std::size_t n = L[0].size();
  // columns: x+ (n), x- (n), surplus (m), artificial (m), rhs
  std::size_t cols = 2 * n + 2 * m;
  QMat t(m, QVec(cols + 1, 0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    mpq_class sign = rhs[i] < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) {
      t[i][j] = sign * L[i][j];
      t[i][n + j] = -sign * L[i][j];
    }
    t[i][2 * n + i] = -sign;
    t[i][2 * n + m + i] = 1;
    t[i][cols] = sign * rhs[i];
    basis[i] = 2 * n + m + i;
  }
  // reduced costs of the phase-one objective (minimize the sum of artificials)
  QVec cost(cols + 1, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= cols; ++j)
      if (j < 2 * n + m || j == cols) cost[j] -= t[i][j];
  for (std::size_t iter = 0; iter < 100000; ++iter) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j)
      if (cost[j] < 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;
    std::size_t leave = m;
    mpq_class best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      mpq_class ratio = t[i][cols] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded direction cannot occur in phase one
    mpq_class p = t[leave][enter];
    for (auto& x : t[leave]) x /= p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      mpq_class f = t[i][enter];
      for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[leave][j];
    }
    mpq_class f = cost[enter];
    for (std::size_t j = 0; j <= cols; ++j) cost[j] -= f * t[leave][j];
    basis[leave] = enter;
  }
  if (cost[cols] != 0) return std::nullopt;
  QVec x(n, 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) x[basis[i]] += t[i][cols];
    else if (basis[i] < 2 * n) x[basis[i] - n] -= t[i][cols];
  }
  for (std::size_t i = 0; i < m; ++i) {
    mpq_class s = 0;
    for (std::size_t j = 0; j < n; ++j) s += L[i][j] * x[j];
    if (s < rhs[i]) return std::nullopt;
  }
  return x;
}

// Simplices as sorted 0-based column sets, kept sorted.
struct Triangulation {
  std::vector<std::vector<int>> simplices;
  bool operator==(const Triangulation& o) const { return simplices == o.simplices; }
  bool contains(const std::vector<int>& s) const { return std::find(simplices.begin(), simplices.end(), s) != simplices.end(); }
};

inline QMat column_submatrix(const CayleyConfig& a, const std::vector<int>& s) {
  QMat m(a.d(), QVec(s.size()));
  for (int i = 0; i < a.d(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) m[i][j] = a.entry(i, s[j]);
  return m;
}

inline mpq_class simplex_det(const CayleyConfig& a, const std::vector<int>& s) { return q_det(column_submatrix(a, s)); }

// All d-subsets of columns with nonzero determinant.
inline std::vector<std::vector<int>> all_simplices(const CayleyConfig& a) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (int(cur.size()) == a.d()) {
      if (simplex_det(a, cur) != 0) out.push_back(cur);
      return;
    }
    for (int j = start; j < a.N(); ++j) {
      cur.push_back(j);
      rec(j + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

// n . a(j) - omega_j for all j, where n = omega_s A_s^{-1}.
inline QVec simplex_slacks(const CayleyConfig& a, const std::vector<int>& s, const QVec& omega) {
  auto inv = q_inverse(column_submatrix(a, s)).value();
  int d = a.d();
  QVec n(d, 0);
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) n[c] += omega[std::size_t(s[r])] * inv[r][c];
  QVec out(a.N());
  for (int j = 0; j < a.N(); ++j) {
    mpq_class v = 0;
    for (int i = 0; i < d; ++i) v += n[i] * a.entry(i, j);
    out[j] = v - omega[j];
  }
  return out;
}

// T(omega). Throws DegenerateError for a non-generic weight.
inline Triangulation regular_triangulation(const CayleyConfig& a, const QVec& omega) {
  if (int(omega.size()) != a.N()) throw ParameterError("weight vector has the wrong length");
  Triangulation t;
  for (auto& s : all_simplices(a)) {
    QVec sl = simplex_slacks(a, s, omega);
    bool below = true, tie = false;
    for (int j = 0; j < a.N(); ++j) {
      if (std::find(s.begin(), s.end(), j) != s.end()) continue;
      if (sl[j] > 0) below = false;
      if (sl[j] == 0) tie = true;
    }
    if (!below) continue;
    if (tie) throw DegenerateError("weight vector is not generic: a cell of T(omega) is not a simplex");
    t.simplices.push_back(s);
  }
  return t;
}

inline bool is_unimodular(const CayleyConfig& a, const Triangulation& t) {
  for (auto& s : t.simplices) {
    mpq_class d = simplex_det(a, s);
    if (d != 1 && d != -1) return false;
  }
  return true;
}

inline mpz_class normalized_volume(const CayleyConfig& a, const Triangulation& t) {
  mpz_class v = 0;
  for (auto& s : t.simplices) v += mpq_class(abs(simplex_det(a, s))).get_num();
  return v;
}

inline bool in_cone_CT(const CayleyConfig& a, const QVec& omega, const Triangulation& t) {
  try {
    return regular_triangulation(a, omega) == t;
  } catch (const DegenerateError&) {
    return false;
  }
}

// An integer point of C_T, from the strict inequalities n_s . a(j) < omega_j for every s in T and j outside s.
inline std::optional<QVec> cone_point(const CayleyConfig& a, const Triangulation& t) {
  QMat L;
  int N = a.N(), d = a.d();
  for (auto& s : t.simplices) {
    auto inv = q_inverse(column_submatrix(a, s));
    if (!inv) return std::nullopt;
    for (int j = 0; j < N; ++j) {
      if (std::find(s.begin(), s.end(), j) != s.end()) continue;
      // omega_j - sum_r omega_{s_r} (A_s^{-1} a(j))_r >= 1
      QVec row(N, 0);
      row[j] += 1;
      for (int r = 0; r < d; ++r) {
        mpq_class c = 0;
        for (int i = 0; i < d; ++i) c += (*inv)[r][i] * a.entry(i, j);
        row[std::size_t(s[r])] -= c;
      }
      L.push_back(row);
    }
  }
  // no inequalities when every column lies in one simplex; any weight works
  auto x = L.empty() ? std::optional<QVec>(QVec(std::size_t(N), 0)) : lp_feasible_point(L, QVec(L.size(), 1));
  if (!x) return std::nullopt;
  mpz_class l = 1;
  for (auto& v : *x) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den().get_mpz_t());
  for (auto& v : *x) v *= l;
  if (!in_cone_CT(a, *x, t)) return std::nullopt;
  return x;
}

struct RegularTriangulation {
  Triangulation t;
  QVec omega;
};

// Regular triangulations with a certifying weight each. Exhaustive over sets of simplices when there are at
// most `exhaustive_limit` simplices, otherwise sampled from seeded random weights.
inline std::vector<RegularTriangulation> search_regular_triangulations(const CayleyConfig& a, std::uint64_t seed = 1,
                                                                     std::size_t samples = 2000,
                                                                     std::size_t exhaustive_limit = 16) {
  auto simp = all_simplices(a);
  std::vector<RegularTriangulation> out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> u(0, 4L * a.N());
  auto sample = [&]() -> std::optional<RegularTriangulation> {
    QVec w(a.N());
    for (auto& x : w) x = u(rng);
    try {
      return RegularTriangulation{regular_triangulation(a, w), w};
    } catch (const DegenerateError&) {
      return std::nullopt;
    }
  };
  auto add = [&](RegularTriangulation r) {
    for (auto& o : out)
      if (o.t == r.t) return;
    out.push_back(std::move(r));
  };
  if (simp.size() <= exhaustive_limit) {
    std::optional<RegularTriangulation> ref;
    while (!ref) ref = sample();
    mpz_class vol = normalized_volume(a, ref->t);
    std::vector<mpz_class> dets;
    for (auto& s : simp) dets.push_back(mpq_class(abs(simplex_det(a, s))).get_num());
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << simp.size()); ++mask) {
      mpz_class v = 0;
      Triangulation t;
      for (std::size_t i = 0; i < simp.size(); ++i)
        if ((mask >> i) & 1) {
          v += dets[i];
          t.simplices.push_back(simp[i]);
        }
      if (v != vol) continue;
      if (auto w = cone_point(a, t)) add({t, *w});
    }
  } else {
    for (std::size_t k = 0; k < samples; ++k)
      if (auto r = sample()) add(*r);
  }
  std::sort(out.begin(), out.end(), [](const RegularTriangulation& x, const RegularTriangulation& y) {
    return x.t.simplices < y.t.simplices;
  });
  return out;
}

// "123" style label with 1-based indices; comma separated once an index has two digits.
inline std::string simplex_label(const std::vector<int>& s) {
  bool wide = std::any_of(s.begin(), s.end(), [](int j) { return j >= 9; });
  std::string r;
  for (int j : s) {
    if (wide && !r.empty()) r += ',';
    r += std::to_string(j + 1);
  }
  return r;
}

}  // namespace gkz
