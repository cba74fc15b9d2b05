#include "twistquant/magnetic.hpp"

#include <cmath>
#include <stdexcept>

namespace twistquant {

namespace {

void require_finite(const RVector& v, const char* what) {
  if (!v.allFinite()) throw std::domain_error(std::string(what) + " evaluated to a non-finite value");
}

void require_finite(const RMatrix& m, const char* what) {
  if (!m.allFinite()) throw std::domain_error(std::string(what) + " evaluated to a non-finite value");
}

}  // namespace

double antisymmetry_defect(const TwoForm& field, const std::vector<RVector>& points) {
  double d = 0.0;
  for (const auto& p : points) {
    const RMatrix b = field(p);
    d = std::max(d, (b + b.transpose()).cwiseAbs().maxCoeff());
  }
  return d;
}

RVector segment(const RVector& x, const RVector& y, double s) { return (1.0 - s) * x + s * y; }

RVector triangle(const RVector& x, const RVector& y, const RVector& z, double t, double s) {
  return x + t * (y - x) + s * (z - y);
}

double circulation(const OneForm& potential, const RVector& x, const RVector& y, const QuadratureRule& rule) {
  const RVector dir = y - x;
  return rule.segment([&](double s) {
    const RVector a = potential(segment(x, y, s));
    require_finite(a, "potential");
    return dir.dot(a);
  });
}

double flux(const TwoForm& field, const RVector& x, const RVector& y, const RVector& z, const QuadratureRule& rule) {
  const RVector u = x - y;
  const RVector v = x - z;
  return rule.triangle([&](double t, double s) {
    const RMatrix b = field(triangle(x, y, z, t, s));
    require_finite(b, "field");
    return u.dot(b * v);
  });
}

cplx magnetic_cocycle(const NilpotentLieGroup& g, const TwoForm& field, const RVector& q, const RVector& x,
                      const RVector& y, const QuadratureRule& rule) {
  const RVector b = g.multiply(g.inverse(x), q);
  const RVector c = g.multiply(g.inverse(y), b);
  return unit_phase(flux(field, q, b, c, rule));
}

cplx magnetic_trivialization(const NilpotentLieGroup& g, const OneForm& potential, const RVector& q,
                             const RVector& x, const QuadratureRule& rule) {
  return unit_phase(circulation(potential, q, g.multiply(g.inverse(x), q), rule));
}

double stokes_residual(const NilpotentLieGroup& g, const OneForm& potential, const TwoForm& field,
                       const RVector& q, const RVector& x, const RVector& y, const QuadratureRule& rule) {
  const RVector b = g.multiply(g.inverse(x), q);
  const RVector c = g.multiply(g.inverse(y), b);
  const double boundary =
      circulation(potential, q, b, rule) + circulation(potential, b, c, rule) - circulation(potential, q, c, rule);
  return flux(field, q, b, c, rule) - boundary;
}

Polynomial::Polynomial(int dim, std::map<Exponents, double> terms) : dim_(dim) {
  for (auto& [powers, c] : terms) {
    if (static_cast<int>(powers.size()) != dim) throw std::invalid_argument("monomial has the wrong number of variables");
    for (int p : powers)
      if (p < 0) throw std::invalid_argument("negative exponent");
    if (c != 0.0) terms_[powers] += c;
  }
  flatten();
}

void Polynomial::flatten() {
  coeffs_.clear();
  powers_.clear();
  for (const auto& [powers, c] : terms_) {
    coeffs_.push_back(c);
    powers_.insert(powers_.end(), powers.begin(), powers.end());
  }
}

Polynomial Polynomial::monomial(int dim, Exponents powers, double coeff) {
  return Polynomial(dim, {{std::move(powers), coeff}});
}

Polynomial Polynomial::random(int dim, int degree, Rng& rng, double scale) {
  std::uniform_real_distribution<double> coeff(-scale, scale);
  std::map<Exponents, double> terms;
  Exponents powers(static_cast<std::size_t>(dim), 0);
  // Enumerate exponent vectors in lexicographic order.
  const auto visit = [&](auto&& self, int axis, int remaining) -> void {
    if (axis == dim) {
      terms[powers] = coeff(rng);
      return;
    }
    for (int p = 0; p <= remaining; ++p) {
      powers[static_cast<std::size_t>(axis)] = p;
      self(self, axis + 1, remaining - p);
    }
    powers[static_cast<std::size_t>(axis)] = 0;
  };
  visit(visit, 0, degree);
  return Polynomial(dim, std::move(terms));
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [powers, c] : terms_) {
    int total = 0;
    for (int p : powers) total += p;
    d = std::max(d, total);
  }
  return d;
}

double Polynomial::operator()(const RVector& x) const {
  double s = 0.0;
  const int* p = powers_.data();
  for (double c : coeffs_) {
    double m = c;
    for (int i = 0; i < dim_; ++i, ++p)
      for (int k = 0; k < *p; ++k) m *= x(i);
    s += m;
  }
  return s;
}

Polynomial Polynomial::derivative(int axis) const {
  std::map<Exponents, double> out;
  for (const auto& [powers, c] : terms_) {
    const int p = powers[static_cast<std::size_t>(axis)];
    if (p == 0) continue;
    Exponents lowered = powers;
    lowered[static_cast<std::size_t>(axis)] = p - 1;
    out[lowered] += c * p;
  }
  return Polynomial(dim_, std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (other.dim_ != dim_) throw std::invalid_argument("polynomials in different numbers of variables");
  auto terms = terms_;
  for (const auto& [powers, c] : other.terms_) terms[powers] += c;
  return Polynomial(dim_, std::move(terms));
}

Polynomial Polynomial::operator*(double s) const {
  auto terms = terms_;
  for (auto& [powers, c] : terms) c *= s;
  return Polynomial(dim_, std::move(terms));
}

PolynomialOneForm::PolynomialOneForm(std::vector<Polynomial> components) : components_(std::move(components)) {
  const int n = dim();
  for (const auto& c : components_)
    if (c.dim() != n) throw std::invalid_argument("one-form components must live in dim variables");
  partials_.reserve(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) partials_.push_back(components_[static_cast<std::size_t>(j)].derivative(i));
}

PolynomialOneForm PolynomialOneForm::zero(int dim) {
  return PolynomialOneForm(std::vector<Polynomial>(static_cast<std::size_t>(dim), Polynomial(dim)));
}

PolynomialOneForm PolynomialOneForm::random(int dim, int degree, Rng& rng, double scale) {
  std::vector<Polynomial> comps;
  for (int j = 0; j < dim; ++j) comps.push_back(Polynomial::random(dim, degree, rng, scale));
  return PolynomialOneForm(std::move(comps));
}

PolynomialOneForm PolynomialOneForm::gradient(const Polynomial& psi) {
  std::vector<Polynomial> comps;
  for (int j = 0; j < psi.dim(); ++j) comps.push_back(psi.derivative(j));
  return PolynomialOneForm(std::move(comps));
}

PolynomialOneForm PolynomialOneForm::linear_potential(const RMatrix& b0, const RVector& q0) {
  const int n = static_cast<int>(b0.rows());
  if (b0.cols() != n || q0.size() != n) throw std::invalid_argument("linear potential needs a square B0 and matching q0");
  if ((b0 + b0.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw std::invalid_argument("B0 must be antisymmetric");
  std::vector<Polynomial> comps;
  for (int j = 0; j < n; ++j) {
    std::map<Polynomial::Exponents, double> terms;
    double constant = 0.0;
    for (int i = 0; i < n; ++i) {
      Polynomial::Exponents e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(i)] = 1;
      terms[e] += 0.5 * b0(i, j);
      constant -= 0.5 * q0(i) * b0(i, j);
    }
    terms[Polynomial::Exponents(static_cast<std::size_t>(n), 0)] += constant;
    comps.emplace_back(n, std::move(terms));
  }
  return PolynomialOneForm(std::move(comps));
}

int PolynomialOneForm::degree() const {
  int d = 0;
  for (const auto& c : components_) d = std::max(d, c.degree());
  return d;
}

RVector PolynomialOneForm::operator()(const RVector& q) const {
  RVector a(dim());
  for (int j = 0; j < dim(); ++j) a(j) = components_[static_cast<std::size_t>(j)](q);
  return a;
}

RMatrix PolynomialOneForm::exterior_derivative(const RVector& q) const {
  const int n = dim();
  RMatrix d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d(i, j) = partials_[static_cast<std::size_t>(i * n + j)](q);
  return d - d.transpose();
}

PolynomialOneForm PolynomialOneForm::operator+(const PolynomialOneForm& other) const {
  if (other.dim() != dim()) throw std::invalid_argument("one-forms of different dimension");
  std::vector<Polynomial> comps;
  for (int j = 0; j < dim(); ++j)
    comps.push_back(components_[static_cast<std::size_t>(j)] + other.components_[static_cast<std::size_t>(j)]);
  return PolynomialOneForm(std::move(comps));
}

OneForm PolynomialOneForm::as_one_form() const {
  return [self = *this](const RVector& q) { return self(q); };
}

TwoForm PolynomialOneForm::as_two_form() const {
  return [self = *this](const RVector& q) { return self.exterior_derivative(q); };
}

TwoForm constant_field(const RMatrix& b0) {
  if (b0.rows() != b0.cols() || (b0 + b0.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("constant field must be an antisymmetric square matrix");
  return [b0](const RVector&) { return b0; };
}

RMatrix planar_field(double b) {
  RMatrix m(2, 2);
  m << 0.0, b, -b, 0.0;
  return m;
}

}  // namespace twistquant
