#pragma once

#include <functional>
#include <map>
#include <vector>

#include "twistquant/group.hpp"
#include "twistquant/quadrature.hpp"
#include "twistquant/types.hpp"

namespace twistquant {

using ScalarField = std::function<double(const RVector&)>;
using OneForm = std::function<RVector(const RVector&)>;
using TwoForm = std::function<RMatrix(const RVector&)>;  // antisymmetric dim x dim

struct MagneticData {
  OneForm potential;   // A, may be empty
  TwoForm field;       // B, may be empty
  ScalarField gauge;   // psi, may be empty
};

// Largest |B + B^T| over the sample points.
double antisymmetry_defect(const TwoForm& field, const std::vector<RVector>& points);

// exp[(1 - s) log x + s log y]
RVector segment(const RVector& x, const RVector& y, double s);
// exp[log x + t (log y - log x) + s (log z - log y)]
RVector triangle(const RVector& x, const RVector& y, const RVector& z, double t, double s);

// int_0^1 <log y - log x | A([x, y]_s)> ds
double circulation(const OneForm& potential, const RVector& x, const RVector& y, const QuadratureRule& rule);
// int_0^1 dt int_0^t ds B(<x, y, z>_{t,s})(log x - log y, log x - log z)
double flux(const TwoForm& field, const RVector& x, const RVector& y, const RVector& z, const QuadratureRule& rule);

// exp(i flux over <q, x^-1 q, y^-1 x^-1 q>)
cplx magnetic_cocycle(const NilpotentLieGroup& g, const TwoForm& field, const RVector& q, const RVector& x,
                      const RVector& y, const QuadratureRule& rule);
// exp(i circulation along [q, x^-1 q])
cplx magnetic_trivialization(const NilpotentLieGroup& g, const OneForm& potential, const RVector& q,
                             const RVector& x, const QuadratureRule& rule);
// Flux through <a, b, c> minus the circulation around its oriented boundary,
// with a = q, b = x^-1 q, c = y^-1 x^-1 q.
double stokes_residual(const NilpotentLieGroup& g, const OneForm& potential, const TwoForm& field,
                       const RVector& q, const RVector& x, const RVector& y, const QuadratureRule& rule);

// Real polynomial in dim variables.
class Polynomial {
 public:
  using Exponents = std::vector<int>;

  explicit Polynomial(int dim) : dim_(dim) {}
  Polynomial(int dim, std::map<Exponents, double> terms);

  // Every monomial of total degree <= degree with coefficients uniform in [-scale, scale].
  static Polynomial random(int dim, int degree, Rng& rng, double scale = 1.0);
  static Polynomial monomial(int dim, Exponents powers, double coeff = 1.0);

  int dim() const { return dim_; }
  int degree() const;
  const std::map<Exponents, double>& terms() const { return terms_; }

  double operator()(const RVector& x) const;
  Polynomial derivative(int axis) const;
  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator*(double s) const;

 private:
  void flatten();
  int dim_;
  std::map<Exponents, double> terms_;
  std::vector<double> coeffs_;  // flat copy of terms_ for evaluation
  std::vector<int> powers_;
};

// A = sum_j A_j dq^j with polynomial coefficients; dA is computed exactly.
class PolynomialOneForm {
 public:
  explicit PolynomialOneForm(std::vector<Polynomial> components);

  static PolynomialOneForm zero(int dim);
  static PolynomialOneForm random(int dim, int degree, Rng& rng, double scale = 1.0);
  // d psi
  static PolynomialOneForm gradient(const Polynomial& psi);
  // A_j(q) = (1/2) sum_i (q - q0)_i B0_ij, whose exterior derivative is B0.
  static PolynomialOneForm linear_potential(const RMatrix& b0, const RVector& q0);

  int dim() const { return static_cast<int>(components_.size()); }
  int degree() const;
  const std::vector<Polynomial>& components() const { return components_; }

  RVector operator()(const RVector& q) const;
  // (dA)_ij = d_i A_j - d_j A_i
  RMatrix exterior_derivative(const RVector& q) const;
  PolynomialOneForm operator+(const PolynomialOneForm& other) const;

  OneForm as_one_form() const;
  TwoForm as_two_form() const;

 private:
  std::vector<Polynomial> components_;
  std::vector<Polynomial> partials_;  // d_i A_j at i * dim + j
};

// Constant 2-form B0 (checked antisymmetric).
TwoForm constant_field(const RMatrix& b0);
// Planar field with B(e1, e2) = b.
RMatrix planar_field(double b);

}  // namespace twistquant
