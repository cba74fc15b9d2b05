#include "twistquant/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <unsupported/Eigen/KroneckerProduct>

#include "twistquant/cochain.hpp"
#include "twistquant/crossed_product.hpp"
#include "twistquant/dual.hpp"
#include "twistquant/magnetic.hpp"
#include "twistquant/opcalc.hpp"
#include "twistquant/parallel.hpp"
#include "twistquant/scalar_calculus.hpp"

namespace twistquant {

namespace {

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Random data scaled to unit norm, so that absolute defects are relative ones.
CVector unit_vector(Rng& rng, Eigen::Index n) {
  CVector v = random_vector(rng, n);
  return v / v.norm();
}

OpSymbol unit_symbol(const DualPtr& dual, Rng& rng) {
  const OpSymbol f = OpSymbol::random(dual, rng);
  return f * cplx(1.0 / norm(f), 0.0);
}

SymbolAG unit_symbol_ag(const FiniteGroupPtr& g, Rng& rng) {
  const SymbolAG f = SymbolAG::random(g, rng);
  return SymbolAG(g, f.values() / f.values().norm());
}

FiniteTau random_tau(const FiniteGroupPtr& g, Rng& rng) {
  std::uniform_int_distribution<Elem> pick(0, g->order() - 1);
  std::vector<Elem> t(g->order());
  for (auto& v : t) v = pick(rng);
  t[g->identity()] = g->identity();
  return FiniteTau(g, std::move(t));
}

struct Instance {
  Cochain beta;
  Cochain gamma;
  FiniteTau tau;
};

Instance random_instance(const FiniteGroupPtr& g, Rng& rng) {
  Cochain beta = Cochain::random(g, 1, rng);
  Cochain gamma = coboundary(beta);
  return {std::move(beta), std::move(gamma), random_tau(g, rng)};
}

double hs_defect(const OpSymbol& f, const OpSymbol& g, const Cochain& beta, const FiniteTau& tau) {
  return std::abs(inner(f, g) - (op(f, beta, tau) * op(g, beta, tau).adjoint()).trace());
}

RVector uniform_point(Rng& rng, int dim, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  RVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = u(rng);
  return v;
}

// A smooth non-polynomial potential on R^3 and its exterior derivative.
RVector smooth_potential(const RVector& q) {
  RVector a(3);
  a << std::sin(q(1)), std::cos(q(2)) * q(0), std::exp(0.3 * q(0));
  return a;
}

RMatrix smooth_field(const RVector& q) {
  RMatrix d = RMatrix::Zero(3, 3);
  d(1, 0) = std::cos(q(1));
  d(0, 1) = std::cos(q(2));
  d(2, 1) = -std::sin(q(2)) * q(0);
  d(0, 2) = 0.3 * std::exp(0.3 * q(0));
  return d - d.transpose();
}

void finite_group_suite(SuiteReport& report, const std::string& name, int instances, double tol, Rng& rng) {
  const auto model = finite_model(name);
  const auto& gp = model.group;
  const auto& g = *gp;
  const auto& dual = model.dual;
  const auto n = ix(g.order());
  const std::string suite = "finite";
  const auto id = [&](const char* what) { return name + "." + what; };
  const auto repeat = [&](const std::function<double()>& once) {
    double d = 0.0;
    for (int t = 0; t < instances; ++t) d = defect_max(d, once());
    return d;
  };

  report.run(suite, id("dual.selfcheck"), "unitary dual: unitarity, multiplicativity, Schur orthogonality, completeness",
             tol, [&](nlohmann::json&) { return dual_selfcheck(*dual).max_defect(); });

  report.run(suite, id("fourier.plancherel"), "Plancherel identity, Fourier inversion and convolution theorem", tol,
             [&](nlohmann::json&) {
               return repeat([&] {
                 const CVector u = unit_vector(rng, n);
                 const CVector v = unit_vector(rng, n);
                 const auto fu = dual->fourier({u.data(), g.order()});
                 const auto fv = dual->fourier({v.data(), g.order()});
                 double d = std::abs(dual->inner(fu, fv) - v.dot(u));
                 d = std::max(d, max_abs_diff(dual->inverse_fourier(fu), u));
                 CVector c = CVector::Zero(n);
                 for (Elem x = 0; x < g.order(); ++x)
                   for (Elem y = 0; y < g.order(); ++y) c(ix(x)) += u(ix(y)) * v(ix(g.multiply(g.inverse(y), x)));
                 const auto fc = dual->fourier({c.data(), g.order()});
                 for (std::size_t k = 0; k < dual->size(); ++k) d = std::max(d, max_abs_diff(fc[k], fv[k] * fu[k]));
                 return d;
               });
             });

  report.run(suite, id("cohomology.coboundary_squared"), "delta^2 delta^1 = 1 and delta^1 delta^0 = 1", tol,
             [&](nlohmann::json&) {
               return repeat([&] {
                 const Cochain a = Cochain::random(gp, 0, rng);
                 const Cochain b = Cochain::random(gp, 1, rng, false);
                 return std::max(coboundary(coboundary(a)).distance(Cochain::one(gp, 2)),
                                 coboundary(coboundary(b)).distance(Cochain::one(gp, 3)));
               });
             });

  report.run(suite, id("cohomology.trivialize"), "delta(trivialize(gamma)) = gamma in degrees 2 and 3", tol,
             [&](nlohmann::json&) {
               return repeat([&] {
                 const Cochain gamma = coboundary(Cochain::random(gp, 1, rng));
                 const Cochain omega = coboundary(Cochain::random(gp, 2, rng));
                 return std::max(coboundary(trivialize(gamma)).distance(gamma),
                                 coboundary(trivialize(omega)).distance(omega));
               });
             });

  report.run(suite, id("cohomology.pseudo_trivialize"), "delta(beta_gamma) = gamma", tol, [&](nlohmann::json&) {
    return repeat([&] {
      const Cochain gamma = coboundary(Cochain::random(gp, 1, rng));
      return coboundary(pseudo_trivialize(gamma)).distance(gamma);
    });
  });

  report.run(suite, id("schrodinger.covariance"), "T(x) T(y) = gamma(x, y) T(xy) and T(x) M_a T(x)^* = M_{L_x a}", tol,
             [&](nlohmann::json&) {
               return repeat([&] {
                 const auto s = random_instance(gp, rng);
                 const CVector a = unit_vector(rng, n);
                 double d = 0.0;
                 for (Elem x = 0; x < g.order(); ++x) {
                   const CMatrix tx = twisted_translation(x, s.beta);
                   d = std::max(d, max_abs_diff(tx * multiplication(a) * tx.adjoint(),
                                                multiplication(left_translate(g, a, x))));
                   for (Elem y = 0; y < g.order(); ++y)
                     d = std::max(d, max_abs_diff(tx * twisted_translation(y, s.beta),
                                                  multiplication(cocycle_slice(s.gamma, x, y)) *
                                                      twisted_translation(g.multiply(x, y), s.beta)));
                 }
                 return d;
               });
             });

  report.run(suite, id("schrodinger.homomorphism"), "Sch(f <> h) = Sch(f) Sch(h) and Sch(f^<>) = Sch(f)^*", tol,
             [&](nlohmann::json&) {
               return repeat([&] {
                 const auto s = random_instance(gp, rng);
                 const auto f = unit_symbol_ag(gp, rng);
                 const auto h = unit_symbol_ag(gp, rng);
                 const CMatrix sf = schrodinger(f, s.beta, s.tau);
                 return std::max(
                     max_abs_diff(schrodinger(twisted_product(f, h, s.gamma, s.tau), s.beta, s.tau),
                                  sf * schrodinger(h, s.beta, s.tau)),
                     max_abs_diff(schrodinger(twisted_involution(f, s.gamma, s.tau), s.beta, s.tau), sf.adjoint()));
               });
             });

  report.run(suite, id("crossed_product.retau"), "Sch with tau' equals Sch with tau after Theta", tol,
             [&](nlohmann::json&) {
               return repeat([&] {
                 const auto s = random_instance(gp, rng);
                 const auto other = random_tau(gp, rng);
                 const auto f = unit_symbol_ag(gp, rng);
                 const auto h = unit_symbol_ag(gp, rng);
                 const auto theta = [&](const SymbolAG& p) { return retau(p, s.tau, other); };
                 double d = max_abs_diff(schrodinger(f, s.beta, other), schrodinger(theta(f), s.beta, s.tau));
                 d = std::max(d, theta(twisted_product(f, h, s.gamma, other))
                                     .distance(twisted_product(theta(f), theta(h), s.gamma, s.tau)));
                 return d;
               });
             });

  report.run(suite, id("crossed_product.recocycle"),
             "Upsilon(f <> h under delta(beta) gamma) = Upsilon f <> Upsilon h under gamma; Sch_1 Upsilon = Sch_beta", tol,
             [&](nlohmann::json&) {
               return repeat([&] {
                 const auto s = random_instance(gp, rng);
                 const auto e = FiniteTau::trivial(gp);
                 const Cochain gamma0 = coboundary(Cochain::random(gp, 1, rng));
                 const Cochain shifted = coboundary(s.beta) * gamma0;
                 const auto f = unit_symbol_ag(gp, rng);
                 const auto h = unit_symbol_ag(gp, rng);
                 double d = recocycle(twisted_product(f, h, shifted, e), s.beta)
                                .distance(twisted_product(recocycle(f, s.beta), recocycle(h, s.beta), gamma0, e));
                 d = std::max(d, recocycle(twisted_involution(f, shifted, e), s.beta)
                                     .distance(twisted_involution(recocycle(f, s.beta), gamma0, e)));
                 d = std::max(d, max_abs_diff(schrodinger(recocycle(f, s.beta), Cochain::one(gp, 1), e),
                                              schrodinger(f, s.beta, e)));
                 return d;
               });
             });

  report.run(suite, id("gauge.covariance"), "Sch_{delta(a) beta} = M_a^* Sch_beta M_a and the same for Op", tol,
             [&](nlohmann::json&) {
               return repeat([&] {
                 const auto s = random_instance(gp, rng);
                 const Cochain a = Cochain::random(gp, 0, rng);
                 const Cochain moved = coboundary(a) * s.beta;
                 const CMatrix m = multiplication(cochain_values0(a));
                 const auto f = unit_symbol_ag(gp, rng);
                 const auto fo = unit_symbol(dual, rng);
                 return std::max(
                     max_abs_diff(schrodinger(f, moved, s.tau), m.adjoint() * schrodinger(f, s.beta, s.tau) * m),
                     max_abs_diff(op(fo, moved, s.tau), m.adjoint() * op(fo, s.beta, s.tau) * m));
               });
             });

  report.run(suite, id("op.unitarity"), "<f, g> = Tr[Op(f) Op(g)^*] and Op is invertible", tol, [&](nlohmann::json&) {
    return repeat([&] {
      const auto s = random_instance(gp, rng);
      const auto f = unit_symbol(dual, rng);
      const auto h = unit_symbol(dual, rng);
      return std::max(hs_defect(f, h, s.beta, s.tau), symbol_of(op(f, s.beta, s.tau), s.beta, s.tau, dual).distance(f));
    });
  });

  report.run(suite, id("wigner.orthogonality"),
             "<V(u,v), V(u',v')> = <u',u> <v,v'> for Wigner and Fourier-Wigner transforms", tol, [&](nlohmann::json&) {
               return repeat([&] {
                 const auto s = random_instance(gp, rng);
                 const CVector u = unit_vector(rng, n), v = unit_vector(rng, n);
                 const CVector u2 = unit_vector(rng, n), v2 = unit_vector(rng, n);
                 const cplx expected = u.dot(u2) * v2.dot(v);
                 const double d = std::abs(inner(wigner(u, v, s.beta, s.tau, dual), wigner(u2, v2, s.beta, s.tau, dual)) -
                                           expected);
                 return std::max(d, std::abs(inner(fourier_wigner(u, v, s.beta, s.tau, dual),
                                                   fourier_wigner(u2, v2, s.beta, s.tau, dual)) -
                                             expected));
               });
             });

  report.run(suite, id("wigner.rank_one"), "Op(V(u, v)) = <., u> v", tol, [&](nlohmann::json&) {
    return repeat([&] {
      const auto s = random_instance(gp, rng);
      const CVector u = unit_vector(rng, n), v = unit_vector(rng, n);
      return max_abs_diff(op(wigner(u, v, s.beta, s.tau, dual), s.beta, s.tau), rank_one(u, v));
    });
  });

  report.run(suite, id("weyl.uu"), "U(x) U(y) = conj gamma(x, y) U(xy)", tol, [&](nlohmann::json&) {
    return repeat([&] {
      const auto s = random_instance(gp, rng);
      double d = 0.0;
      for (Elem x = 0; x < g.order(); ++x)
        for (Elem y = 0; y < g.order(); ++y)
          d = std::max(d, max_abs_diff(u_op(x, s.beta) * u_op(y, s.beta),
                                       multiplication(cocycle_slice(s.gamma, x, y).conjugate()) *
                                           u_op(g.multiply(x, y), s.beta)));
      return d;
    });
  });

  report.run(suite, id("weyl.uv"), "(U(x) (x) 1) V(xi) = V(xi) (U(x) (x) 1) (1 (x) xi(x))", tol, [&](nlohmann::json&) {
    return repeat([&] {
      const auto s = random_instance(gp, rng);
      double d = 0.0;
      for (std::size_t k = 0; k < dual->size(); ++k) {
        const auto& xi = dual->irrep(k);
        const CMatrix vk = v_op(*dual, k);
        for (Elem x = 0; x < g.order(); ++x) {
          const CMatrix ux = Eigen::kroneckerProduct(u_op(x, s.beta), CMatrix::Identity(xi.dim, xi.dim)).eval();
          const CMatrix shift = Eigen::kroneckerProduct(CMatrix::Identity(n, n), xi(x)).eval();
          d = std::max(d, max_abs_diff(ux * vk, vk * ux * shift));
        }
      }
      return d;
    });
  });

  report.run(suite, id("weyl.vv"), "V(xi) and V(eta) commute on l2(G) (x) H_xi (x) H_eta", tol, [&](nlohmann::json&) {
    double d = 0.0;
    for (std::size_t k = 0; k < dual->size(); ++k)
      for (std::size_t l = 0; l < dual->size(); ++l) {
        const auto& xi = dual->irrep(k);
        const auto& eta = dual->irrep(l);
        const Eigen::Index b = xi.dim * eta.dim;
        CMatrix vx = CMatrix::Zero(n * b, n * b), ve = CMatrix::Zero(n * b, n * b);
        for (Elem y = 0; y < g.order(); ++y) {
          vx.block(ix(y) * b, ix(y) * b, b, b) =
              Eigen::kroneckerProduct(xi(y).adjoint(), CMatrix::Identity(eta.dim, eta.dim)).eval();
          ve.block(ix(y) * b, ix(y) * b, b, b) =
              Eigen::kroneckerProduct(CMatrix::Identity(xi.dim, xi.dim), eta(y).adjoint()).eval();
        }
        d = std::max(d, max_abs_diff(vx * ve, ve * vx));
      }
    return d;
  });

  report.run(suite, id("weyl.integrated_form"), "sum_x w(x) U(x) = Conv_{conj beta}(w)", tol, [&](nlohmann::json&) {
    return repeat([&] {
      const auto s = random_instance(gp, rng);
      const CVector w = unit_vector(rng, n);
      CMatrix integrated = CMatrix::Zero(n, n);
      for (Elem x = 0; x < g.order(); ++x) integrated += w(ix(x)) * u_op(x, s.beta);
      return max_abs_diff(integrated, twisted_convolution(w, conjugate(s.beta)));
    });
  });

  report.run(suite, id("hstar.axioms"),
             "associativity, involutivity, <g#, f#> = <f, g>, <g h, f> = <h, g# f>, Op multiplicative and adjoint", tol,
             [&](nlohmann::json&) {
               return repeat([&] {
                 const auto s = random_instance(gp, rng);
                 const auto f = unit_symbol(dual, rng), h = unit_symbol(dual, rng), k = unit_symbol(dual, rng);
                 const auto c = [&](const OpSymbol& a, const OpSymbol& b) { return compose_symbols(a, b, s.beta, s.tau); };
                 const auto star = [&](const OpSymbol& a) { return involute_symbol(a, s.beta, s.tau); };
                 double d = c(c(f, h), k).distance(c(f, c(h, k)));
                 d = std::max(d, star(star(f)).distance(f));
                 d = std::max(d, std::abs(inner(star(h), star(f)) - inner(f, h)));
                 d = std::max(d, std::abs(inner(c(h, k), f) - inner(k, c(star(h), f))));
                 d = std::max(d, max_abs_diff(op(c(f, h), s.beta, s.tau), op(f, s.beta, s.tau) * op(h, s.beta, s.tau)));
                 d = std::max(d, max_abs_diff(op(star(f), s.beta, s.tau), op(f, s.beta, s.tau).adjoint()));
                 return d;
               });
             });

  report.run(suite, id("op.factorization"),
             "Op(a (x) w^) = M_{L_x0 a} Conv(w) for constant tau = x0 and Conv(w) M_a for tau = id", tol,
             [&](nlohmann::json&) {
               return repeat([&] {
                 const auto s = random_instance(gp, rng);
                 const CVector a = unit_vector(rng, n), w = unit_vector(rng, n);
                 const auto f = OpSymbol::tensor(dual, a, dual->fourier({w.data(), g.order()}));
                 double d = max_abs_diff(op(f, s.beta, FiniteTau::identity(gp)),
                                         twisted_convolution(w, s.beta) * multiplication(a));
                 for (Elem x0 = 0; x0 < g.order(); ++x0)
                   d = std::max(d, max_abs_diff(op(f, s.beta, FiniteTau::constant(gp, x0)),
                                                multiplication(left_translate(g, a, x0)) * twisted_convolution(w, s.beta)));
                 return d;
               });
             });
}

}  // namespace

void run_finite_suite(SuiteReport& report, const FiniteSuiteOptions& options, Rng& rng) {
  for (const auto& name : options.groups) finite_group_suite(report, name, options.instances, options.tolerance, rng);
}

void run_symmetric_suite(SuiteReport& report, const SymmetricSuiteOptions& options, Rng& rng) {
  const std::string suite = "symmetric";
  const auto z2 = finite_model("Z2");
  const auto z3 = finite_model("Z3");

  report.run(suite, "symmetric.Z2.none", "exhaustive search finds no tau with tau(x) = x tau(x^-1) on Z2", 0.5,
             [&](nlohmann::json& detail) {
               const auto search = symmetric_search(z2.group);
               const auto count = count_symmetric_maps(z2.group);
               detail = {{"symmetric_maps", count}, {"exhaustive", search.exhaustive}};
               return static_cast<double>(count) + (search.witness ? 1.0 : 0.0) + (search.exhaustive ? 0.0 : 1.0);
             });

  report.run(suite, "symmetric.Z3.square", "search on Z3 returns tau(x) = x^2", 0.5, [&](nlohmann::json& detail) {
    const auto search = symmetric_search(z3.group);
    if (!search.witness) return 1.0;
    detail = {{"table", search.witness->table()}, {"symmetric_maps", count_symmetric_maps(z3.group)}};
    return search.witness->table() == FiniteTau::power(z3.group, 2).table() ? 0.0 : 1.0;
  });

  const auto tau = FiniteTau::power(z3.group, 2);
  const auto& g = *z3.group;
  const Elem gen = *g.find("g");
  // beta(q; g^2) = conj beta(g q; g) keeps gamma(q; z, z^-1) = 1.
  const auto symmetric_beta = [&](const Cochain& rnd) {
    return Cochain::tabulate(z3.group, 1, [&](Elem q, std::span<const Elem> x) {
      if (x[0] == gen) return rnd.at(q, gen);
      if (x[0] == g.inverse(gen)) return std::conj(rnd.at(g.multiply(gen, q), gen));
      return cplx(1.0, 0.0);
    });
  };

  report.run(suite, "symmetric.Z3.adjoint", "Op(f^*) = Op(f)^* for tau = x^2 and gamma(z, z^-1) = 1", options.tolerance,
             [&](nlohmann::json& detail) {
               double adjoint = 0.0;
               double condition = 0.0;
               for (int t = 0; t < options.instances; ++t) {
                 const Cochain beta = symmetric_beta(Cochain::random(z3.group, 1, rng));
                 const auto r = symmetric_check(tau, beta, z3.dual, rng, 1);
                 adjoint = defect_max(adjoint, r.adjoint_defect);
                 condition = defect_max(condition, r.gamma_inverse_defect);
               }
               detail = {{"gamma_inverse_defect", condition}};
               return defect_max(adjoint, condition);
             });

  report.run(
      suite, "symmetric.Z3.counterexample", "a beta with gamma(z, z^-1) != 1 breaks Op(f^*) = Op(f)^*",
      options.witness_threshold,
      [&](nlohmann::json& detail) {
        double weakest = INFINITY;
        double condition = INFINITY;
        for (int t = 0; t < options.instances; ++t) {
          const Cochain beta = Cochain::random(z3.group, 1, rng);
          const auto r = symmetric_check(tau, beta, z3.dual, rng, 1);
          weakest = std::min(weakest, r.adjoint_defect);
          condition = std::min(condition, r.gamma_inverse_defect);
        }
        detail = {{"gamma_inverse_defect", condition}};
        return weakest;
      },
      Comparison::Above);
}

void run_magnetic_geometry_suite(SuiteReport& report, const MagneticGeometryOptions& options, Rng& rng) {
  const std::string suite = "magnetic";
  const QuadratureRule rule(options.order, options.order);
  const auto wants = [&](const char* name) {
    return std::find(options.groups.begin(), options.groups.end(), name) != options.groups.end();
  };
  const int samples = options.samples;

  if (wants("R2")) {
    const auto r2 = euclidean_group(2);
    const RMatrix b0 = planar_field(1.0);
    const auto field = constant_field(b0);
    const auto potential = PolynomialOneForm::linear_potential(b0, RVector::Zero(2));

    report.run(suite, "magnetic.R2.constant_cocycle", "constant B: gamma(q; x, y) = exp(i B(x, y) / 2)",
               options.exact_tolerance, [&](nlohmann::json&) {
                 double d = 0.0;
                 for (int t = 0; t < samples; ++t) {
                   const RVector q = uniform_point(rng, 2, 4.0), x = uniform_point(rng, 2, 4.0),
                                 y = uniform_point(rng, 2, 4.0);
                   d = defect_max(d, std::abs(magnetic_cocycle(*r2, field, q, x, y, rule) - unit_phase(0.5 * x.dot(b0 * y))));
                 }
                 return d;
               });

    report.run(suite, "magnetic.R2.stokes_linear", "Stokes residual of A = B0(q, .)/2 against constant B0",
               options.exact_tolerance, [&](nlohmann::json&) {
                 double d = 0.0;
                 for (int t = 0; t < samples; ++t) {
                   const RVector q = uniform_point(rng, 2, 4.0), x = uniform_point(rng, 2, 4.0),
                                 y = uniform_point(rng, 2, 4.0);
                   d = defect_max(d, std::abs(stokes_residual(*r2, potential.as_one_form(), field, q, x, y, rule)));
                 }
                 return d;
               });
  }

  if (wants("H1")) {
    const auto h = heisenberg_group();
    const auto cubic = PolynomialOneForm::random(3, 3, rng, 0.5);
    const auto pot = cubic.as_one_form();
    const auto field = cubic.as_two_form();
    std::vector<std::array<RVector, 4>> args;
    for (int t = 0; t < samples; ++t)
      args.push_back({uniform_point(rng, 3, 1.0), uniform_point(rng, 3, 1.0), uniform_point(rng, 3, 1.0),
                      uniform_point(rng, 3, 1.0)});
    const auto worst_residual = [&](const OneForm& a, const TwoForm& b, const QuadratureRule& r) {
      double d = 0.0;
      for (const auto& [q, x, y, z] : args) d = defect_max(d, std::abs(stokes_residual(*h, a, b, q, x, y, r)));
      return d;
    };

    report.run(suite, "magnetic.H1.stokes_polynomial", "Stokes residual for a cubic potential and its exact dA",
               options.exact_tolerance, [&](nlohmann::json&) { return worst_residual(pot, field, rule); });

    report.run(suite, "magnetic.H1.stokes_refinement",
               "cubic potential: residual non-increasing along the order sequence above the roundoff floor",
               options.exact_tolerance, [&](nlohmann::json& detail) {
                 std::vector<double> residuals;
                 for (int m : options.refinement) residuals.push_back(worst_residual(pot, field, QuadratureRule(m, m)));
                 double increase = 0.0;
                 for (std::size_t k = 1; k < residuals.size(); ++k)
                   increase = defect_max(increase, std::max(0.0, residuals[k] - std::max(residuals[k - 1], options.roundoff_floor)));
                 detail = {{"orders", options.refinement}, {"residuals", residuals}, {"floor", options.roundoff_floor}};
                 return increase;
               });

    report.run(suite, "magnetic.H1.stokes_refinement_smooth",
               "non-polynomial potential: residual strictly decreasing for orders 2, 4, 8 and below 1e-9 at 8", 1e-9,
               [&](nlohmann::json& detail) {
                 std::vector<double> residuals;
                 for (int m : {2, 4, 8}) residuals.push_back(worst_residual(smooth_potential, smooth_field, QuadratureRule(m, m)));
                 detail = {{"orders", {2, 4, 8}}, {"residuals", residuals}};
                 const bool monotone = residuals[1] < residuals[0] && residuals[2] < residuals[1];
                 return monotone ? residuals.back() : INFINITY;
               });

    report.run(suite, "magnetic.H1.cocycle_identity", "gamma^B satisfies the 2-cocycle identity", options.cocycle_tolerance,
               [&](nlohmann::json&) {
                 double d = 0.0;
                 for (const auto& [q, x, y, z] : args) {
                   const cplx v = magnetic_cocycle(*h, field, h->multiply(h->inverse(x), q), y, z, rule) /
                                  magnetic_cocycle(*h, field, q, h->multiply(x, y), z, rule) *
                                  magnetic_cocycle(*h, field, q, x, h->multiply(y, z), rule) /
                                  magnetic_cocycle(*h, field, q, x, y, rule);
                   d = defect_max(d, std::abs(v - 1.0));
                 }
                 return d;
               });

    report.run(suite, "magnetic.H1.cocycle_normalization",
               "gamma^B(q; x, e) = gamma^B(q; e, x) = gamma^B(q; x, x^-1) = 1", options.exact_tolerance,
               [&](nlohmann::json&) {
                 double d = 0.0;
                 const RVector e = h->identity();
                 for (const auto& [q, x, y, z] : args)
                   d = defect_max(d, std::max({std::abs(magnetic_cocycle(*h, field, q, x, e, rule) - 1.0),
                                               std::abs(magnetic_cocycle(*h, field, q, e, x, rule) - 1.0),
                                               std::abs(magnetic_cocycle(*h, field, q, x, h->inverse(x), rule) - 1.0)}));
                 return d;
               });

    report.run(suite, "magnetic.H1.trivialization", "delta(beta^A) = gamma^{dA}", options.cocycle_tolerance,
               [&](nlohmann::json&) {
                 double d = 0.0;
                 for (const auto& [q, x, y, z] : args) {
                   const RVector xq = h->multiply(h->inverse(x), q);
                   const cplx d1 = magnetic_trivialization(*h, pot, xq, y, rule) /
                                   magnetic_trivialization(*h, pot, q, h->multiply(x, y), rule) *
                                   magnetic_trivialization(*h, pot, q, x, rule);
                   d = defect_max(d, std::abs(d1 - magnetic_cocycle(*h, field, q, x, y, rule)));
                 }
                 return d;
               });
  }
}

namespace {

// Points whose coordinates all lie in [-L/2, L/2], every stride-th index per axis.
std::vector<std::size_t> interior_subset(const PhaseSpace& space, int stride) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!space.in_interior(i, 0.5)) continue;
    bool keep = true;
    for (int k : space.axis_indices(i)) keep = keep && (k % stride == 0);
    if (keep) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> all_points(const PhaseSpace& space) {
  std::vector<std::size_t> out(space.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

// max over pairs in points x points of f(i, j).
template <class F>
double pairwise_max(const std::vector<std::size_t>& points, F&& f) {
  return parallel_max(points.size(), [&](std::size_t r) {
    double d = 0.0;
    for (std::size_t j : points) d = defect_max(d, f(points[r], j));
    return d;
  });
}

void operator_checks(SuiteReport& report, const std::string& name, std::shared_ptr<const LatticePhaseSpace> space,
                     const std::vector<std::size_t>& points, const PolynomialOneForm& potential, const Polynomial& psi,
                     const MagneticOperatorOptions& options) {
  const std::string suite = "magnetic_operators";
  const QuadratureRule rule(options.order, options.order);
  const double w = space->position_weight();
  const ScalarSymbol symbol = ScalarSymbol::gaussian();
  const auto moved = potential + PolynomialOneForm::gradient(psi);
  const auto quant = magnetic_quantization(space, potential.as_one_form(), rule);
  const auto quant_moved = magnetic_quantization(space, moved.as_one_form(), rule);
  const auto k = quant.kernel_of(symbol);
  const auto k_moved = quant_moved.kernel_of(symbol);
  std::vector<cplx> phase(space->size());
  for (std::size_t i = 0; i < space->size(); ++i) phase[i] = unit_phase(psi(space->point(i)));
  double scale = 0.0;  // largest diagonal operator entry, to read the defects against
  for (std::size_t i : points) scale = std::max(scale, std::abs(k.entry(i, i)) * w);
  const nlohmann::json grid = {{"L", space->grid().half_width}, {"N", space->grid().points}, {"points", points.size()},
                               {"diagonal_scale", scale}};

  report.run(suite, "operators." + name + ".gauge_covariance", "Op_{A + d psi}(s) = M_{e^{i psi}}^* Op_A(s) M_{e^{i psi}}",
             options.tolerance, [&](nlohmann::json& detail) {
               detail = grid;
               return pairwise_max(points, [&](std::size_t i, std::size_t j) {
                 return std::abs(k_moved.entry(i, j) - std::conj(phase[i]) * k.entry(i, j) * phase[j]) * w;
               });
             });

  report.run(suite, "operators." + name + ".hermitian", "Op_A(real Gaussian) with tau(x) = x/2 is Hermitian",
             options.tolerance, [&](nlohmann::json& detail) {
               detail = grid;
               return pairwise_max(points, [&](std::size_t i, std::size_t j) {
                 if (j < i) return 0.0;
                 return std::abs(k.entry(i, j) - std::conj(k.entry(j, i))) * w;
               });
             });

  const double leak = boundary_mass(*space, symbol);
  report.run(suite, "operators." + name + ".boundary_mass", "fraction of the symbol mass on the grid boundary", 1e-6,
             [&](nlohmann::json&) { return leak; });
}

}  // namespace

void run_magnetic_operator_suite(SuiteReport& report, const MagneticOperatorOptions& options, Rng& rng) {
  const auto wants = [&](const char* name) {
    return std::find(options.groups.begin(), options.groups.end(), name) != options.groups.end();
  };

  if (wants("R2")) {
    const auto space = std::make_shared<const LatticePhaseSpace>(euclidean_group(2), options.plane);
    const auto potential =
        PolynomialOneForm::linear_potential(planar_field(0.5), RVector::Zero(2)) + PolynomialOneForm::random(2, 2, rng, 0.05);
    const auto psi = Polynomial::random(2, 3, rng, 0.02);
    operator_checks(report, "R2", space, all_points(*space), potential, psi, options);

    report.run("magnetic_operators", "operators.R2.weyl_gaussian_kernel",
               "A = 0, tau(x) = x/2: Gaussian symbol kernel equals the closed-form Weyl kernel on the interior half",
               options.kernel_tolerance, [&](nlohmann::json&) {
                 const ScalarQuantization weyl(space, trivial_trivialization(), LieTau::half(2));
                 const auto k = weyl.kernel_of(ScalarSymbol::gaussian());
                 const auto interior = interior_subset(*space, 1);
                 return pairwise_max(interior, [&](std::size_t i, std::size_t j) {
                   return std::abs(k.entry(i, j) - gaussian_weyl_kernel(space->point(i), space->point(j)));
                 });
               });
  }

  if (wants("H1")) {
    const auto space = std::make_shared<const LatticePhaseSpace>(heisenberg_group(), options.heisenberg);
    RMatrix b0 = RMatrix::Zero(3, 3);
    b0(0, 1) = 0.4;
    b0(1, 0) = -0.4;
    b0(0, 2) = 0.1;
    b0(2, 0) = -0.1;
    const auto potential = PolynomialOneForm::linear_potential(b0, RVector::Zero(3)) + PolynomialOneForm::random(3, 3, rng, 0.01);
    const auto psi = Polynomial::random(3, 3, rng, 0.02);
    operator_checks(report, "H1", space, interior_subset(*space, options.heisenberg_stride), potential, psi, options);
  }
}

void run_cross_backend_suite(SuiteReport& report, const CrossBackendOptions& options, Rng& rng) {
  const int order = options.order;
  const auto model = finite_model("Z" + std::to_string(order));
  const auto cyclic = std::make_shared<const CyclicPhaseSpace>(order);
  const std::string prefix = "cross.Z" + std::to_string(order) + ".";
  double kernel_defect = 0.0, compose_defect = 0.0, involution_defect = 0.0;

  for (int t = 0; t < options.pairs; ++t) {
    const Cochain beta = Cochain::random(model.group, 1, rng);
    std::uniform_int_distribution<Elem> pick(0, model.group->order() - 1);
    std::vector<Elem> table(model.group->order());
    for (auto& v : table) v = pick(rng);
    const FiniteTau tau(model.group, table);
    const Trivialization scalar_beta = [beta](const RVector& q, const RVector& x) {
      return beta.at(static_cast<Elem>(std::lround(q(0))), static_cast<Elem>(std::lround(x(0))));
    };
    const LieTau scalar_tau = LieTau::custom("table", 1, [table](const RVector& x) {
      return RVector::Constant(1, static_cast<double>(table[static_cast<std::size_t>(std::lround(x(0)))]));
    });
    const ScalarQuantization quant(cyclic, scalar_beta, scalar_tau);
    const auto to_scalar = [&](const OpSymbol& f) {
      CMatrix v(order, order);
      for (Elem x = 0; x < static_cast<Elem>(order); ++x)
        for (std::size_t k = 0; k < static_cast<std::size_t>(order); ++k) v(ix(x), ix(k)) = f(x, k)(0, 0);
      return ScalarSymbol::sampled(cyclic, v);
    };
    const auto f = unit_symbol(model.dual, rng);
    const auto g = unit_symbol(model.dual, rng);
    kernel_defect = defect_max(kernel_defect, max_abs_diff(quant.kernel(to_scalar(f)), kernel(f, beta, tau)));
    kernel_defect = defect_max(kernel_defect, max_abs_diff(quant.kernel(to_scalar(g)), kernel(g, beta, tau)));
    compose_defect = defect_max(compose_defect, symbol_distance(quant.compose(to_scalar(f), to_scalar(g)),
                                                                to_scalar(compose_symbols(f, g, beta, tau)), *cyclic));
    involution_defect = defect_max(involution_defect, symbol_distance(quant.involution(to_scalar(f)),
                                                                      to_scalar(involute_symbol(f, beta, tau)), *cyclic));
  }
  const nlohmann::json detail = {{"pairs", options.pairs}};
  report.run("cross_backend", prefix + "kernel", "scalar and character kernels agree", options.tolerance,
             [&](nlohmann::json& d) { d = detail; return kernel_defect; });
  report.run("cross_backend", prefix + "compose", "scalar and character products agree", options.tolerance,
             [&](nlohmann::json& d) { d = detail; return compose_defect; });
  report.run("cross_backend", prefix + "involution", "scalar and character involutions agree", options.tolerance,
             [&](nlohmann::json& d) { d = detail; return involution_defect; });
}

}  // namespace twistquant
