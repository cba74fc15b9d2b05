#pragma once

#include <span>

#include <json.hpp>

#include "twistquant/cochain.hpp"
#include "twistquant/group.hpp"
#include "twistquant/types.hpp"

namespace twistquant {

// Element Phi(q; x) of L^1(G; A) over a finite group: rows q, columns x.
class SymbolAG {
 public:
  SymbolAG(FiniteGroupPtr group, CMatrix values);

  static SymbolAG zero(FiniteGroupPtr group);
  static SymbolAG random(FiniteGroupPtr group, Rng& rng);
  // Phi(q; x) = a(q) delta_{x0}(x)
  static SymbolAG delta(FiniteGroupPtr group, Elem x0, const CVector& a);

  const FiniteGroup& group() const { return *group_; }
  const FiniteGroupPtr& group_ptr() const { return group_; }
  const CMatrix& values() const { return values_; }
  cplx operator()(Elem q, Elem x) const { return values_(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(x)); }

  // sum_x max_q |Phi(q; x)|
  double l1_norm() const;
  double distance(const SymbolAG& other) const;

 private:
  FiniteGroupPtr group_;
  CMatrix values_;
};

SymbolAG twisted_product(const SymbolAG& phi, const SymbolAG& psi, const Cochain& gamma, const FiniteTau& tau);
SymbolAG twisted_involution(const SymbolAG& phi, const Cochain& gamma, const FiniteTau& tau);

// K(q, y) = beta(q; q y^-1) Phi(tau(q y^-1)^-1 q; q y^-1)
CMatrix schrodinger(const SymbolAG& phi, const Cochain& beta, const FiniteTau& tau);

// [Theta(Phi)](q; x) = Phi(tau'(x)^-1 tau(x) q; x), so that
// schrodinger(Phi, beta, tau') = schrodinger(Theta(Phi), beta, tau).
SymbolAG retau(const SymbolAG& phi, const FiniteTau& tau, const FiniteTau& tau_prime);

// [Upsilon(Phi)](q; x) = Phi(q; x) beta(q; x)
SymbolAG recocycle(const SymbolAG& phi, const Cochain& beta);

// [T(y) u](q) = beta(q; y) u(y^-1 q)
CMatrix twisted_translation(Elem y, const Cochain& beta);
// Diagonal multiplication by a.
CMatrix multiplication(const CVector& a);
// (L_x a)(q) = a(x^-1 q)
CVector left_translate(const FiniteGroup& g, const CVector& a, Elem x);
// q -> gamma(q; x, y)
CVector cocycle_slice(const Cochain& gamma, Elem x, Elem y);
CVector cochain_slice(const Cochain& beta, Elem x);
CVector cochain_values0(const Cochain& a);

SymbolAG symbol_ag_from_json(const FiniteGroupPtr& group, const nlohmann::json& j);
nlohmann::json symbol_ag_to_json(const SymbolAG& phi);

}  // namespace twistquant
