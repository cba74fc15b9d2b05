#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "twistquant/magnetic.hpp"

using namespace twistquant;

namespace {

RVector random_point(Rng& rng, int dim, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  RVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = u(rng);
  return v;
}

RVector vec(std::initializer_list<double> xs) {
  RVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// A smooth non-polynomial potential on R^3 and its exterior derivative.
RVector wavy_potential(const RVector& q) { return vec({std::sin(q(1)), std::cos(q(2)) * q(0), std::exp(0.3 * q(0))}); }

RMatrix wavy_field(const RVector& q) {
  RMatrix d = RMatrix::Zero(3, 3);  // d_i A_j
  d(1, 0) = std::cos(q(1));
  d(0, 1) = std::cos(q(2));
  d(2, 1) = -std::sin(q(2)) * q(0);
  d(0, 2) = 0.3 * std::exp(0.3 * q(0));
  return d - d.transpose();
}

// (delta^2 gamma)(q; x, y, z)
cplx cocycle_defect_term(const NilpotentLieGroup& g, const TwoForm& b, const RVector& q, const RVector& x,
                         const RVector& y, const RVector& z, const QuadratureRule& rule) {
  const RVector xy = g.multiply(x, y);
  const RVector yz = g.multiply(y, z);
  return magnetic_cocycle(g, b, g.multiply(g.inverse(x), q), y, z, rule) / magnetic_cocycle(g, b, q, xy, z, rule) *
         magnetic_cocycle(g, b, q, x, yz, rule) / magnetic_cocycle(g, b, q, x, y, rule);
}

}  // namespace

TEST_CASE("Gauss-Legendre rule is exact to degree 2m-1 with positive weights") {
  for (int m : {1, 2, 4, 8, 16}) {
    const GaussLegendre gl(m);
    for (double w : gl.weights()) CHECK(w > 0.0);
    for (int d = 0; d <= 2 * m - 1; ++d) {
      const double v = gl.integrate([d](double s) { return std::pow(s, d); });
      CHECK(v == doctest::Approx(1.0 / (d + 1)).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(GaussLegendre(0), std::invalid_argument);
}

TEST_CASE("collapsed triangle rule integrates monomials exactly") {
  const QuadratureRule rule;
  CHECK(rule.triangle_points() == 36);
  CHECK(rule.triangle([](double, double) { return 1.0; }) == doctest::Approx(0.5).epsilon(1e-14));
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4 - a; ++b) {
      const double v = rule.triangle([a, b](double t, double s) { return std::pow(t, a) * std::pow(s, b); });
      CHECK(v == doctest::Approx(1.0 / ((b + 1) * (a + b + 2))).epsilon(1e-13));
    }
}

TEST_CASE("segments") {
  Rng rng(11);
  const auto h = heisenberg_group();
  const RVector x = random_point(rng, 3);
  const RVector y = random_point(rng, 3);
  CHECK(max_abs_diff(segment(x, x, 0.37), x) < 1e-15);
  CHECK(max_abs_diff(segment(x, y, 0.0), x) < 1e-15);
  CHECK(max_abs_diff(segment(x, y, 1.0), y) < 1e-15);
  CHECK(max_abs_diff(segment(y, x, 0.3), segment(x, y, 0.7)) < 1e-15);
  CHECK(max_abs_diff(segment(vec({0, 0}), vec({2, 4}), 0.5), vec({1, 2})) < 1e-15);
  // Segments through the identity are one-parameter subgroups.
  for (int trial = 0; trial < 20; ++trial) {
    const RVector y2 = random_point(rng, 3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double s = u(rng);
    const double t = u(rng);
    const RVector e = h->identity();
    CHECK(max_abs_diff(segment(e, y2, s + t), h->multiply(segment(e, y2, s), segment(e, y2, t))) < 1e-14);
  }
}

TEST_CASE("triangles") {
  Rng rng(12);
  const RVector x = random_point(rng, 3);
  const RVector y = random_point(rng, 3);
  const RVector z = random_point(rng, 3);
  CHECK(max_abs_diff(triangle(x, y, z, 0, 0), x) < 1e-15);
  CHECK(max_abs_diff(triangle(x, y, z, 1, 0), y) < 1e-15);
  CHECK(max_abs_diff(triangle(x, y, z, 1, 1), z) < 1e-15);
  CHECK(max_abs_diff(triangle(x, y, z, 0.41, 0.41), segment(x, z, 0.41)) < 1e-15);
  CHECK(max_abs_diff(triangle(vec({0, 0}), vec({1, 0}), vec({1, 1}), 0.5, 0.25), vec({0.5, 0.25})) < 1e-15);
}

TEST_CASE("circulation") {
  Rng rng(13);
  const QuadratureRule rule;
  const RVector a0 = vec({0.3, -1.2, 0.7});
  const OneForm constant = [a0](const RVector&) { return a0; };
  const auto poly = PolynomialOneForm::random(3, 3, rng).as_one_form();
  for (int trial = 0; trial < 10; ++trial) {
    const RVector x = random_point(rng, 3, 2.0);
    const RVector y = random_point(rng, 3, 2.0);
    CHECK(circulation(constant, x, y, QuadratureRule(1)) == doctest::Approx((y - x).dot(a0)).epsilon(1e-14));
    CHECK(circulation(poly, x, x, rule) == 0.0);
    CHECK(std::abs(circulation(poly, y, x, rule) + circulation(poly, x, y, rule)) < 1e-12);
  }
  const OneForm broken = [](const RVector& q) { return RVector::Constant(q.size(), std::nan("")); };
  CHECK_THROWS_AS(circulation(broken, vec({0, 0}), vec({1, 1}), rule), std::domain_error);
}

TEST_CASE("flux") {
  Rng rng(14);
  const QuadratureRule rule;
  const RMatrix b0 = planar_field(1.7);
  const auto b = constant_field(b0);
  for (int trial = 0; trial < 10; ++trial) {
    const RVector x = random_point(rng, 2, 3.0);
    const RVector y = random_point(rng, 2, 3.0);
    const RVector z = random_point(rng, 2, 3.0);
    CHECK(flux(b, x, y, z, rule) == doctest::Approx(0.5 * (x - y).dot(b0 * (x - z))).epsilon(1e-13));
    CHECK(std::abs(flux(b, x, y, y, rule)) < 1e-14);
  }
  const TwoForm broken = [](const RVector& q) { return RMatrix::Constant(q.size(), q.size(), std::nan("")); };
  CHECK_THROWS_AS(flux(broken, vec({0, 0}), vec({1, 0}), vec({0, 1}), rule), std::domain_error);
  CHECK_THROWS_AS(constant_field(RMatrix::Identity(2, 2)), std::invalid_argument);
}

TEST_CASE("flux of a smooth field converges under order refinement") {
  Rng rng(15);
  const RVector x = random_point(rng, 3, 1.5);
  const RVector y = random_point(rng, 3, 1.5);
  const RVector z = random_point(rng, 3, 1.5);
  const double reference = flux(wavy_field, x, y, z, QuadratureRule::uniform(40));
  double previous = INFINITY;
  for (int m : {2, 4, 8}) {
    const double err = std::abs(flux(wavy_field, x, y, z, QuadratureRule::uniform(m)) - reference);
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 1e-9);
}

TEST_CASE("planar constant field gives the closed-form cocycle") {
  Rng rng(16);
  const auto r2 = euclidean_group(2);
  const RMatrix b0 = planar_field(0.8);
  const auto b = constant_field(b0);
  const QuadratureRule rule;
  for (int trial = 0; trial < 20; ++trial) {
    const RVector q = random_point(rng, 2, 4.0);
    const RVector x = random_point(rng, 2, 4.0);
    const RVector y = random_point(rng, 2, 4.0);
    const cplx expected = unit_phase(0.5 * x.dot(b0 * y));
    CHECK(std::abs(magnetic_cocycle(*r2, b, q, x, y, rule) - expected) < 1e-12);
  }
}

TEST_CASE("magnetic cocycle is normalized and a 2-cocycle on H1") {
  Rng rng(17);
  const auto h = heisenberg_group();
  const QuadratureRule rule;
  const auto a = PolynomialOneForm::random(3, 3, rng, 0.5);
  const auto b = a.as_two_form();
  double defect = 0.0;
  double normalization = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const RVector q = random_point(rng, 3);
    const RVector x = random_point(rng, 3);
    const RVector y = random_point(rng, 3);
    const RVector z = random_point(rng, 3);
    defect = std::max(defect, std::abs(cocycle_defect_term(*h, b, q, x, y, z, rule) - 1.0));
    normalization = std::max({normalization, std::abs(magnetic_cocycle(*h, b, q, x, h->identity(), rule) - 1.0),
                              std::abs(magnetic_cocycle(*h, b, q, h->identity(), x, rule) - 1.0),
                              std::abs(magnetic_cocycle(*h, b, q, x, h->inverse(x), rule) - 1.0)});
  }
  CHECK(defect < 1e-8);
  CHECK(normalization < 1e-14);
}

TEST_CASE("magnetic trivialization") {
  Rng rng(18);
  const auto h = heisenberg_group();
  const QuadratureRule rule;
  const auto a = PolynomialOneForm::random(3, 3, rng, 0.5);
  const auto pot = a.as_one_form();
  const auto b = a.as_two_form();
  const auto psi = Polynomial::random(3, 3, rng, 0.5);
  const auto gauge = PolynomialOneForm::gradient(psi).as_one_form();
  const OneForm zero = PolynomialOneForm::zero(3).as_one_form();
  for (int trial = 0; trial < 50; ++trial) {
    const RVector q = random_point(rng, 3);
    const RVector x = random_point(rng, 3);
    const RVector y = random_point(rng, 3);
    CHECK(magnetic_trivialization(*h, zero, q, x, rule) == cplx(1.0, 0.0));
    CHECK(std::abs(magnetic_trivialization(*h, pot, q, h->identity(), rule) - 1.0) < 1e-15);
    // delta^1 beta = gamma^{dA}
    const RVector xq = h->multiply(h->inverse(x), q);
    const cplx d1 = magnetic_trivialization(*h, pot, xq, y, rule) /
                    magnetic_trivialization(*h, pot, q, h->multiply(x, y), rule) *
                    magnetic_trivialization(*h, pot, q, x, rule);
    CHECK(std::abs(d1 - magnetic_cocycle(*h, b, q, x, y, rule)) < 1e-8);
    // Pure gauge: delta^0(e^{i psi}).
    CHECK(std::abs(magnetic_trivialization(*h, gauge, q, x, rule) - unit_phase(psi(xq) - psi(q))) < 1e-12);
  }
}

TEST_CASE("Stokes residual") {
  Rng rng(19);
  const auto r2 = euclidean_group(2);
  const auto h = heisenberg_group();
  const QuadratureRule rule;
  const OneForm zero_a = PolynomialOneForm::zero(2).as_one_form();
  const TwoForm zero_b = [](const RVector&) { return RMatrix::Zero(2, 2).eval(); };
  const RMatrix b0 = planar_field(1.3);
  const auto linear = PolynomialOneForm::linear_potential(b0, vec({0.5, -0.25}));
  CHECK((linear.exterior_derivative(vec({2.0, 3.0})) - b0).cwiseAbs().maxCoeff() < 1e-15);
  const auto cubic = PolynomialOneForm::random(3, 3, rng, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const RVector q = random_point(rng, 2, 3.0);
    const RVector x = random_point(rng, 2, 3.0);
    const RVector y = random_point(rng, 2, 3.0);
    CHECK(stokes_residual(*r2, zero_a, zero_b, q, x, y, rule) == 0.0);
    CHECK(std::abs(stokes_residual(*r2, linear.as_one_form(), constant_field(b0), q, x, y, rule)) < 1e-12);
    const RVector q3 = random_point(rng, 3);
    const RVector x3 = random_point(rng, 3);
    const RVector y3 = random_point(rng, 3);
    CHECK(std::abs(stokes_residual(*h, cubic.as_one_form(), cubic.as_two_form(), q3, x3, y3, rule)) < 1e-12);
  }
}

TEST_CASE("Stokes residual of a smooth potential shrinks with the order") {
  Rng rng(20);
  const auto h = heisenberg_group();
  double previous = INFINITY;
  std::vector<RVector> args;
  for (int i = 0; i < 30; ++i) args.push_back(random_point(rng, 3));
  for (int m : {2, 4, 8}) {
    const auto rule = QuadratureRule::uniform(m);
    double worst = 0.0;
    for (int i = 0; i < 30; i += 3)
      worst = std::max(worst, std::abs(stokes_residual(*h, wavy_potential, wavy_field, args[i], args[i + 1],
                                                       args[i + 2], rule)));
    CHECK(worst < previous);
    previous = worst;
  }
  CHECK(previous < 1e-9);
}

TEST_CASE("polynomials") {
  const auto p = Polynomial(2, {{{2, 1}, 3.0}, {{0, 0}, -1.0}});
  CHECK(p.degree() == 3);
  CHECK(p(vec({2.0, 5.0})) == doctest::Approx(59.0));
  CHECK(p.derivative(0)(vec({2.0, 5.0})) == doctest::Approx(60.0));
  CHECK(p.derivative(1)(vec({2.0, 5.0})) == doctest::Approx(12.0));
  CHECK((p + p * -1.0).terms().size() <= 2);
  Rng rng(21);
  const auto psi = Polynomial::random(3, 3, rng);
  CHECK(psi.terms().size() == 20);
  // d(d psi) = 0
  const auto grad = PolynomialOneForm::gradient(psi);
  CHECK(grad.exterior_derivative(vec({0.3, -0.7, 1.1})).cwiseAbs().maxCoeff() < 1e-13);
  const auto a = PolynomialOneForm::random(3, 3, rng);
  std::vector<RVector> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(random_point(rng, 3));
  CHECK(antisymmetry_defect(a.as_two_form(), pts) < 1e-12);
  CHECK_THROWS_AS(Polynomial(2, {{{1}, 1.0}}), std::invalid_argument);
}
