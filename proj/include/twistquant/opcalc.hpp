#pragma once

#include <json.hpp>

#include "twistquant/cochain.hpp"
#include "twistquant/crossed_product.hpp"
#include "twistquant/dual.hpp"
#include "twistquant/types.hpp"

namespace twistquant {

// Operator-valued symbol f(x, xi): one d_xi x d_xi block per (x, xi).
class OpSymbol {
 public:
  explicit OpSymbol(DualPtr dual);  // zero symbol

  static OpSymbol identity(DualPtr dual);
  static OpSymbol random(DualPtr dual, Rng& rng);
  // f(x, xi) = a(x) phi(xi)
  static OpSymbol tensor(DualPtr dual, const CVector& a, const OperatorField& phi);

  const UnitaryDual& dual() const { return *dual_; }
  const DualPtr& dual_ptr() const { return dual_; }
  CMatrix& operator()(Elem x, std::size_t xi) { return blocks_[x * nxi_ + xi]; }
  const CMatrix& operator()(Elem x, std::size_t xi) const { return blocks_[x * nxi_ + xi]; }

  // Blockwise adjoint f(x, xi)^*.
  OpSymbol star() const;
  OpSymbol operator+(const OpSymbol& other) const;
  OpSymbol operator*(cplx s) const;
  double distance(const OpSymbol& other) const;

 private:
  DualPtr dual_;
  std::size_t nxi_;
  std::vector<CMatrix> blocks_;
};

// sum_x sum_xi weight_xi Tr[f(x,xi) g(x,xi)^*]
cplx inner(const OpSymbol& f, const OpSymbol& g);
double norm(const OpSymbol& f);

// Fourier in the second variable: f(q, xi) = sum_z Phi(q; z) xi(z)^*.
OpSymbol partial_fourier(const SymbolAG& phi, DualPtr dual);
// Phi(q; z) = sum_xi weight_xi Tr[xi(z) f(q, xi)]
SymbolAG partial_inverse_fourier(const OpSymbol& f);

// Schrodinger image of the partial inverse Fourier transform.
CMatrix op(const OpSymbol& f, const Cochain& beta, const FiniteTau& tau);
// K(x, y) = beta(x; x y^-1) sum_xi weight_xi Tr[xi(x y^-1) f(tau(x y^-1)^-1 x, xi)], summed directly.
CMatrix kernel(const OpSymbol& f, const Cochain& beta, const FiniteTau& tau);
// Inverse of op.
OpSymbol symbol_of(const CMatrix& t, const Cochain& beta, const FiniteTau& tau, DualPtr dual);

OpSymbol compose_symbols(const OpSymbol& f, const OpSymbol& g, const Cochain& beta, const FiniteTau& tau);
OpSymbol involute_symbol(const OpSymbol& f, const Cochain& beta, const FiniteTau& tau);

// w -> <w, u> v, i.e. v u^*.
CMatrix rank_one(const CVector& u, const CVector& v);

// Wigner transform by direct summation:
// V(p, xi) = sum_z conj beta(x; z) v(x) conj u(z^-1 x) xi(z)^*, x = tau(z) p.
OpSymbol wigner(const CVector& u, const CVector& v, const Cochain& beta, const FiniteTau& tau, DualPtr dual);

// Field over (eta, z) on the dual side; same Plancherel weights as OpSymbol.
class DualSideField {
 public:
  explicit DualSideField(DualPtr dual);
  const UnitaryDual& dual() const { return *dual_; }
  CMatrix& operator()(std::size_t eta, Elem z) { return blocks_[z * nxi_ + eta]; }
  const CMatrix& operator()(std::size_t eta, Elem z) const { return blocks_[z * nxi_ + eta]; }
  double distance(const DualSideField& other) const;

 private:
  DualPtr dual_;
  std::size_t nxi_;
  std::vector<CMatrix> blocks_;
};

cplx inner(const DualSideField& a, const DualSideField& b);

// (F (x) F^-1) f: Fourier in position after the partial inverse Fourier transform.
DualSideField fourier_wigner_transform(const OpSymbol& f);
// W(xi, x) = sum_y conj beta(y; x) v(y) conj u(x^-1 y) xi(y)^* xi(tau(x)), by direct summation.
DualSideField fourier_wigner(const CVector& u, const CVector& v, const Cochain& beta, const FiniteTau& tau,
                             DualPtr dual);

// [W(xi, x) Theta](y) = conj beta(y; x) xi(y)^* xi(tau(x)) Theta(x^-1 y) on l2(G) (x) C^d,
// index y * d + i.
CMatrix weyl(const UnitaryDual& dual, std::size_t xi, Elem x, const Cochain& beta, const FiniteTau& tau);
// [U(x) u](y) = conj beta(y; x) u(x^-1 y)
CMatrix u_op(Elem x, const Cochain& beta);
// [V(xi) Theta](y) = xi(y)^* Theta(y)
CMatrix v_op(const UnitaryDual& dual, std::size_t xi);
// u (x) phi with the same layout as weyl.
CVector tensor_vector(const CVector& u, const CVector& phi);

// [Conv(w) u](q) = sum_z beta(q; z) w(z) u(z^-1 q)
CMatrix twisted_convolution(const CVector& w, const Cochain& beta);
// conj of every value.
Cochain conjugate(const Cochain& c);

struct SymmetricReport {
  bool tau_symmetric = false;
  double gamma_inverse_defect = 0.0;  // max |gamma(q; z, z^-1) - 1|
  double adjoint_defect = 0.0;        // max over trials of |Op(f^*) - Op(f)^*|
  bool gamma_condition(double tol = 1e-12) const { return gamma_inverse_defect < tol; }
};

SymmetricReport symmetric_check(const FiniteTau& tau, const Cochain& beta, DualPtr dual, Rng& rng,
                                int trials = 20);

nlohmann::json op_symbol_to_json(const OpSymbol& f);
OpSymbol op_symbol_from_json(DualPtr dual, const nlohmann::json& j);

}  // namespace twistquant
