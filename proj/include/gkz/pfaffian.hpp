#pragma once

#include <vector>

#include "gkz/contiguity.hpp"
#include "gkz/ratmatrix.hpp"

namespace gkz {

// Pfaffian matrices dz_i F = P_i F for the forms F(q), q in Q, over the standard monomials of a GKZ basis.
class Pfaffian {
 public:
  Pfaffian(const GkzBasis& g, const std::vector<IntVec>& q) : g_(g) {
    if (q.size() != g.standard.size())
      throw NotABasisError("basis has " + std::to_string(q.size()) + " forms but the holonomic rank is " +
                           std::to_string(g.standard.size()));
    for (auto& x : q) forms_.push_back(assemble_form(g, x, cache_));
    RatMatrix pdd(forms_.size(), g.standard.size());
    for (std::size_t r = 0; r < forms_.size(); ++r) {
      auto nf = g.gb.normal_form(forms_[r].op, g.standard);
      for (std::size_t c = 0; c < nf.size(); ++c) pdd(r, c) = nf[c];
    }
    pdd_ = pdd;
    pdd_inv_ = pdd.inverse();
  }

  const GkzBasis& gkz() const { return g_; }
  const std::vector<AssembledForm>& forms() const { return forms_; }
  const ContiguityCache& contiguities() const { return cache_; }
  // Normal forms of F(Q) over the standard monomials.
  const RatMatrix& p_doubleprime() const { return pdd_; }

  // P_i for the 0-based direction i.
  RatMatrix matrix(int i) const {
    WeylRing ring = g_.gb.ring();
    if (i < 0 || i >= ring.N) throw ParameterError("direction out of range");
    RatMatrix pp(forms_.size(), g_.standard.size());
    for (std::size_t r = 0; r < forms_.size(); ++r) {
      auto nf = g_.gb.normal_form(WeylOperator::d(ring, i) * forms_[r].op, g_.standard);
      for (std::size_t c = 0; c < nf.size(); ++c) pp(r, c) = nf[c];
    }
    return pp * pdd_inv_;
  }

  std::vector<RatMatrix> all() const {
    std::vector<RatMatrix> out;
    for (int i = 0; i < g_.gb.ring().N; ++i) out.push_back(matrix(i));
    return out;
  }

 private:
  const GkzBasis& g_;
  ContiguityCache cache_;
  std::vector<AssembledForm> forms_;
  RatMatrix pdd_, pdd_inv_;
};

// b -> -b in every entry.
inline RatMatrix dual_matrix(const RatMatrix& p, int d) {
  RatMatrix r = p;
  for (int k = 0; k < d; ++k) r = r.substitute(std::size_t(k), RatFun(-MultiPoly::var(std::size_t(k))));
  return r;
}

// dz_i P_j + P_j P_i - dz_j P_i - P_i P_j
inline RatMatrix integrability_defect(const RatMatrix& pi, const RatMatrix& pj, std::size_t slot_i, std::size_t slot_j) {
  return pj.derivative(slot_i) + pj * pi - pi.derivative(slot_j) - pi * pj;
}

}  // namespace gkz
