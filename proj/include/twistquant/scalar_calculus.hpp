#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "twistquant/group.hpp"
#include "twistquant/magnetic.hpp"
#include "twistquant/phase_space.hpp"
#include "twistquant/quadrature.hpp"
#include "twistquant/types.hpp"

namespace twistquant {

// beta(q; x)
using Trivialization = std::function<cplx(const RVector& q, const RVector& x)>;
using GridFunction = std::function<cplx(const RVector&)>;

Trivialization trivial_trivialization();
// q, x -> exp(i circulation of A along [q, x^-1 q])
Trivialization magnetic_beta(LieGroupPtr group, OneForm potential, QuadratureRule rule = QuadratureRule());

// Scalar symbol s(p, chi): a callable, a separable product
// position(p) * prod_a momentum(chi_a), or samples on grid x dual grid.
class ScalarSymbol {
 public:
  using Function = std::function<cplx(const RVector& p, const RVector& dual)>;
  using PositionFactor = std::function<cplx(const RVector& p)>;
  using MomentumFactor = std::function<cplx(double)>;

  explicit ScalarSymbol(Function f);
  static ScalarSymbol separable(PositionFactor position, MomentumFactor momentum);
  // values(i, m): position index i, dual index m.
  static ScalarSymbol sampled(PhaseSpacePtr space, CMatrix values);
  // exp(-(|p|^2 + |chi|^2) / 2)
  static ScalarSymbol gaussian();

  bool is_separable() const { return std::holds_alternative<Separable>(form_); }
  bool is_sampled() const { return std::holds_alternative<Sampled>(form_); }

  // At a position point and the dual point of index m of the given space.
  cplx at(const PhaseSpace& space, const RVector& p, std::size_t m) const;
  // Full table over grid x dual grid.
  CMatrix sample(const PhaseSpace& space) const;
  const CMatrix& values() const;
  cplx position_factor(const RVector& p) const;
  cplx momentum_factor(double chi) const;

 private:
  struct Separable {
    PositionFactor position;
    MomentumFactor momentum;
  };
  struct Sampled {
    PhaseSpacePtr space;
    CMatrix values;
  };
  struct FormTag {};
  ScalarSymbol(FormTag, std::variant<Function, Separable, Sampled> form) : form_(std::move(form)) {}
  std::variant<Function, Separable, Sampled> form_;
};

// Largest |a - b| between two sampled symbols.
double symbol_distance(const ScalarSymbol& a, const ScalarSymbol& b, const PhaseSpace& space);

// Quantization Op(s) with kernel
// K(x, y) = beta(x; z) sum_m w' e^{i <z | chi_m>} s(tau(z)^-1 x, chi_m), z = x y^-1,
// and operator matrix K * w.
class ScalarQuantization {
 public:
  ScalarQuantization(PhaseSpacePtr space, Trivialization beta, LieTau tau);

  const PhaseSpace& space() const { return *space_; }
  const PhaseSpacePtr& space_ptr() const { return space_; }
  const Trivialization& beta() const { return beta_; }
  const LieTau& tau() const { return tau_; }

  // Entry evaluator bound to one symbol; safe for concurrent use.
  class Kernel {
   public:
    Kernel(const ScalarQuantization& quant, const ScalarSymbol& symbol);
    cplx operator()(const RVector& x, const RVector& y) const;
    cplx entry(std::size_t i, std::size_t j) const;

   private:
    cplx axis_factor(int axis_points, double z) const;
    const ScalarQuantization& quant_;
    const ScalarSymbol& symbol_;
    std::vector<RVector> points_;
    std::vector<cplx> offset_table_;  // separable symbols: axis factor at integer lattice offsets
    long offset_origin_ = 0;
  };

  Kernel kernel_of(const ScalarSymbol& s) const { return Kernel(*this, s); }
  CMatrix kernel(const ScalarSymbol& s) const;
  CMatrix kernel_block(const ScalarSymbol& s, const std::vector<std::size_t>& rows,
                       const std::vector<std::size_t>& cols) const;
  CMatrix op_matrix(const ScalarSymbol& s) const;

  // Inverts the kernel map; needs complete fibers over each position: a
  // periodic space, or an abelian lattice with tau trivial or the identity.
  bool invertible() const;
  ScalarSymbol symbol_of_kernel(const CMatrix& k) const;
  ScalarSymbol compose(const ScalarSymbol& r, const ScalarSymbol& s) const;
  ScalarSymbol involution(const ScalarSymbol& s) const;

 private:
  PhaseSpacePtr space_;
  Trivialization beta_;
  LieTau tau_;
};

struct WeylMatrix {
  CMatrix matrix;
  std::vector<bool> truncated;  // row i lost its source point x^-1 q_i
};

// [W(x, chi) u](q) = beta(q; x) e^{i <tau(x)^-1 q | chi>} u(x^-1 q) for lattice-compatible x.
// Throws OffLattice when some x^-1 q misses the lattice.
WeylMatrix weyl_matrix(const ScalarQuantization& quant, const RVector& x, const RVector& chi);
WeylMatrix translation_matrix(const ScalarQuantization& quant, const RVector& x);
// diag e^{i <q | chi>}
CMatrix modulation_matrix(const PhaseSpace& space, const RVector& chi);
// diag e^{i <log(x^-1 q) - log q | chi>}
CVector commutation_phase(const PhaseSpace& space, const RVector& x, const RVector& chi);
// Same operator acting on functions, with exact group products.
GridFunction weyl_apply(const ScalarQuantization& quant, const RVector& x, const RVector& chi, GridFunction u);

// Fraction of sum |s|^2 carried by boundary positions.
double boundary_mass(const PhaseSpace& space, const ScalarSymbol& s);

// Op with beta from A and the symmetric ordering tau(x) = x/2.
ScalarQuantization magnetic_quantization(std::shared_ptr<const LatticePhaseSpace> space, OneForm potential,
                                         QuadratureRule rule = QuadratureRule());
// Full operator matrix; warns on std::clog when the symbol leaks onto the boundary.
CMatrix magnetic_op(std::shared_ptr<const LatticePhaseSpace> space, OneForm potential, const ScalarSymbol& s,
                    QuadratureRule rule = QuadratureRule());

// (2 pi)^{-n/2} exp(-|x + y|^2 / 8 - |x - y|^2 / 2): Weyl kernel of the Gaussian symbol.
double gaussian_weyl_kernel(const RVector& x, const RVector& y);

}  // namespace twistquant
