#include <doctest.h>

#include "twistquant/dual.hpp"
#include "twistquant/opcalc.hpp"

#include <unsupported/Eigen/KroneckerProduct>

using namespace twistquant;

namespace {

struct Setup {
  FiniteGroupPtr g;
  DualPtr dual;
  Cochain beta;
  Cochain gamma;
  FiniteTau tau;
};

FiniteTau random_tau(const FiniteGroupPtr& g, Rng& rng) {
  std::uniform_int_distribution<Elem> pick(0, g->order() - 1);
  std::vector<Elem> t(g->order());
  for (auto& v : t) v = pick(rng);
  t[g->identity()] = g->identity();
  return FiniteTau(g, t);
}

Setup random_setup(const char* name, Rng& rng) {
  auto m = finite_model(name);
  Cochain beta = Cochain::random(m.group, 1, rng);
  Cochain gamma = coboundary(beta);
  FiniteTau tau = random_tau(m.group, rng);
  return {m.group, m.dual, std::move(beta), std::move(gamma), std::move(tau)};
}

cplx hs_inner(const CMatrix& a, const CMatrix& b) { return (a * b.adjoint()).trace(); }

Eigen::Index ix(Elem x) { return static_cast<Eigen::Index>(x); }

}  // namespace

TEST_CASE("identity symbol quantizes to the identity") {
  Rng rng(1);
  for (const char* name : {"S3", "Q8", "Z6"}) {
    auto s = random_setup(name, rng);
    const auto n = ix(s.g->order());
    CHECK(max_abs_diff(op(OpSymbol::identity(s.dual), s.beta, s.tau), CMatrix::Identity(n, n)) < 1e-12);
    CHECK(symbol_of(CMatrix::Identity(n, n), s.beta, s.tau, s.dual).distance(OpSymbol::identity(s.dual)) < 1e-12);
  }
}

TEST_CASE("kernel formula agrees with the Schrodinger route") {
  Rng rng(2);
  for (const char* name : {"S3", "D4", "Q8"}) {
    auto s = random_setup(name, rng);
    const auto f = OpSymbol::random(s.dual, rng);
    const CMatrix k = kernel(f, s.beta, s.tau);
    CHECK(max_abs_diff(k, op(f, s.beta, s.tau)) < 1e-12);
    CHECK(std::abs(k.norm() - norm(f)) < 1e-12);
    const auto e = FiniteTau::trivial(s.g);
    const SymbolAG phi = partial_inverse_fourier(f);
    const CMatrix k0 = kernel(f, Cochain::one(s.g, 1), e);
    for (Elem x = 0; x < s.g->order(); ++x)
      for (Elem y = 0; y < s.g->order(); ++y)
        CHECK(std::abs(k0(ix(x), ix(y)) - phi(x, s.g->multiply(x, s.g->inverse(y)))) < 1e-12);
  }
}

TEST_CASE("Op is unitary onto Hilbert-Schmidt matrices and symbol_of inverts it") {
  Rng rng(3);
  auto s = random_setup("S3", rng);
  for (int t = 0; t < 10; ++t) {
    const auto f = OpSymbol::random(s.dual, rng), g = OpSymbol::random(s.dual, rng);
    CHECK(std::abs(inner(f, g) - hs_inner(op(f, s.beta, s.tau), op(g, s.beta, s.tau))) < 1e-12);
    CHECK(symbol_of(op(f, s.beta, s.tau), s.beta, s.tau, s.dual).distance(f) < 1e-12);
    const CMatrix m = random_matrix(rng, 6, 6);
    CHECK(max_abs_diff(op(symbol_of(m, s.beta, s.tau, s.dual), s.beta, s.tau), m) < 1e-12);
  }
}

TEST_CASE("Wigner transforms quantize to rank-one operators") {
  Rng rng(4);
  for (const char* name : {"Z3", "S3", "Q8"}) {
    CAPTURE(name);
    auto s = random_setup(name, rng);
    const auto n = ix(s.g->order());
    const CVector u = random_vector(rng, n), v = random_vector(rng, n);
    const OpSymbol w = wigner(u, v, s.beta, s.tau, s.dual);
    CHECK(max_abs_diff(op(w, s.beta, s.tau), rank_one(u, v)) < 1e-12);
    CHECK(symbol_of(rank_one(u, v), s.beta, s.tau, s.dual).distance(w) < 1e-12);
    // sesquilinear pairing
    const auto f = OpSymbol::random(s.dual, rng);
    CHECK(std::abs(v.dot(op(f, s.beta, s.tau) * u) - inner(f, w)) < 1e-12);
    // orthogonality
    const CVector u2 = random_vector(rng, n), v2 = random_vector(rng, n);
    const OpSymbol w2 = wigner(u2, v2, s.beta, s.tau, s.dual);
    CHECK(std::abs(inner(w, w2) - u.dot(u2) * v2.dot(v)) < 1e-12);
    CHECK(std::abs(norm(w) - u.norm() * v.norm()) < 1e-12);
  }
}

TEST_CASE("untwisted Wigner kernel is v(x) conj u(y)") {
  Rng rng(5);
  auto m = finite_model("S3");
  const CVector u = random_vector(rng, 6), v = random_vector(rng, 6);
  const auto e = FiniteTau::trivial(m.group);
  const auto one = Cochain::one(m.group, 1);
  const CMatrix k = kernel(wigner(u, v, one, e, m.dual), one, e);
  for (Eigen::Index x = 0; x < 6; ++x)
    for (Eigen::Index y = 0; y < 6; ++y) CHECK(std::abs(k(x, y) - v(x) * std::conj(u(y))) < 1e-12);
}

TEST_CASE("symbol composition and involution") {
  Rng rng(6);
  for (const char* name : {"S3", "D4"}) {
    auto s = random_setup(name, rng);
    const auto n = ix(s.g->order());
    const auto f = OpSymbol::random(s.dual, rng), g = OpSymbol::random(s.dual, rng), h = OpSymbol::random(s.dual, rng);
    const auto id = OpSymbol::identity(s.dual);
    CHECK(max_abs_diff(op(compose_symbols(f, g, s.beta, s.tau), s.beta, s.tau), op(f, s.beta, s.tau) * op(g, s.beta, s.tau)) < 1e-11);
    CHECK(compose_symbols(f, id, s.beta, s.tau).distance(f) < 1e-12);
    CHECK(compose_symbols(id, f, s.beta, s.tau).distance(f) < 1e-12);
    CHECK(compose_symbols(compose_symbols(f, g, s.beta, s.tau), h, s.beta, s.tau)
              .distance(compose_symbols(f, compose_symbols(g, h, s.beta, s.tau), s.beta, s.tau)) < 1e-11);
    const auto fi = involute_symbol(f, s.beta, s.tau);
    CHECK(max_abs_diff(op(fi, s.beta, s.tau), op(f, s.beta, s.tau).adjoint()) < 1e-12);
    CHECK(involute_symbol(fi, s.beta, s.tau).distance(f) < 1e-12);
    CHECK(involute_symbol(id, s.beta, s.tau).distance(id) < 1e-12);
    // H*-algebra axioms
    CHECK(std::abs(inner(involute_symbol(g, s.beta, s.tau), fi) - inner(f, g)) < 1e-11);
    CHECK(std::abs(inner(compose_symbols(g, h, s.beta, s.tau), f) -
                   inner(h, compose_symbols(involute_symbol(g, s.beta, s.tau), f, s.beta, s.tau))) < 1e-11);
    // Wigner composition rules
    const CVector u1 = random_vector(rng, n), v1 = random_vector(rng, n), u2 = random_vector(rng, n), v2 = random_vector(rng, n);
    const auto w11 = wigner(u1, v1, s.beta, s.tau, s.dual), w22 = wigner(u2, v2, s.beta, s.tau, s.dual);
    CHECK(compose_symbols(w11, w22, s.beta, s.tau).distance(wigner(u2, v1, s.beta, s.tau, s.dual) * u1.dot(v2)) < 1e-11);
    CHECK(involute_symbol(w11, s.beta, s.tau).distance(wigner(v1, u1, s.beta, s.tau, s.dual)) < 1e-12);
  }
}

TEST_CASE("composition does not depend on the trivialization") {
  Rng rng(7);
  auto s = random_setup("Q8", rng);
  const Cochain other = pseudo_trivialize(s.gamma);
  const auto f = OpSymbol::random(s.dual, rng), g = OpSymbol::random(s.dual, rng);
  CHECK(compose_symbols(f, g, s.beta, s.tau).distance(compose_symbols(f, g, other, s.tau)) < 1e-12);
  CHECK(involute_symbol(f, s.beta, s.tau).distance(involute_symbol(f, other, s.tau)) < 1e-12);
}

TEST_CASE("gauge covariance of Op") {
  Rng rng(8);
  auto s = random_setup("S3", rng);
  const Cochain a = Cochain::random(s.g, 0, rng);
  const CMatrix m = multiplication(cochain_values0(a));
  const Cochain beta2 = coboundary(a) * s.beta;
  const auto f = OpSymbol::random(s.dual, rng);
  CHECK(max_abs_diff(op(f, beta2, s.tau), m.adjoint() * op(f, s.beta, s.tau) * m) < 1e-12);
}

TEST_CASE("Fourier-Wigner transform") {
  Rng rng(9);
  for (const char* name : {"Z3", "S3", "Q8"}) {
    CAPTURE(name);
    auto s = random_setup(name, rng);
    const auto n = ix(s.g->order());
    const CVector u = random_vector(rng, n), v = random_vector(rng, n);
    const auto fw = fourier_wigner(u, v, s.beta, s.tau, s.dual);
    CHECK(fw.distance(fourier_wigner_transform(wigner(u, v, s.beta, s.tau, s.dual))) < 1e-12);
    const auto f = OpSymbol::random(s.dual, rng);
    CHECK(std::abs(v.dot(op(f, s.beta, s.tau) * u) - inner(fourier_wigner_transform(f), fw)) < 1e-12);
    const CVector u2 = random_vector(rng, n), v2 = random_vector(rng, n);
    CHECK(std::abs(inner(fw, fourier_wigner(u2, v2, s.beta, s.tau, s.dual)) - u.dot(u2) * v2.dot(v)) < 1e-12);
    // matrix elements of the Weyl system
    for (std::size_t k = 0; k < s.dual->size(); ++k) {
      const int d = s.dual->irrep(k).dim;
      const CVector phi = random_vector(rng, d), psi = random_vector(rng, d);
      for (Elem x = 0; x < s.g->order(); ++x) {
        const CMatrix w = weyl(*s.dual, k, x, s.beta, s.tau);
        const cplx lhs = tensor_vector(v.conjugate(), psi).dot(w * tensor_vector(u.conjugate(), phi));
        const cplx rhs = psi.dot(fw(k, x) * phi);
        CHECK(std::abs(lhs - rhs) < 1e-12);
      }
    }
  }
}

TEST_CASE("Fourier-Wigner of deltas on Z2") {
  auto m = finite_model("Z2");
  CVector d = CVector::Zero(2);
  d(0) = 1.0;
  const auto e = FiniteTau::trivial(m.group);
  const auto one = Cochain::one(m.group, 1);
  const auto fw = fourier_wigner(d, d, one, e, m.dual);
  CHECK(fw.distance(fourier_wigner_transform(wigner(d, d, one, e, m.dual))) < 1e-15);
  CHECK(std::abs(fw(0, 0)(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(fw(1, 0)(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(fw(1, 1)(0, 0)) < 1e-15);
}

TEST_CASE("Weyl system, U and V operators") {
  Rng rng(10);
  auto s = random_setup("S3", rng);
  const auto& g = *s.g;
  const auto n = ix(g.order());
  const std::size_t triv = s.dual->trivial_index();
  CHECK(max_abs_diff(u_op(g.identity(), s.beta), CMatrix::Identity(n, n)) < 1e-15);
  CHECK(max_abs_diff(v_op(*s.dual, triv), CMatrix::Identity(n, n)) < 1e-15);
  for (Elem x = 0; x < g.order(); ++x) {
    CHECK(max_abs_diff(weyl(*s.dual, triv, x, s.beta, s.tau), u_op(x, s.beta)) < 1e-15);
    for (std::size_t k = 0; k < s.dual->size(); ++k) {
      const CMatrix w = weyl(*s.dual, k, x, s.beta, s.tau);
      CHECK(max_abs_diff(w.adjoint() * w, CMatrix::Identity(w.rows(), w.cols())) < 1e-12);
      const int d = s.dual->irrep(k).dim;
      // W(xi, x) = V(xi) (U(x) (x) xi(tau(x)))
      const CMatrix factor = Eigen::kroneckerProduct(u_op(x, s.beta), s.dual->irrep(k)(s.tau(x))).eval();
      CHECK(max_abs_diff(w, v_op(*s.dual, k) * factor) < 1e-12);
      if (x == g.identity()) CHECK(max_abs_diff(w, v_op(*s.dual, k)) < 1e-15);
      (void)d;
    }
  }
}

TEST_CASE("U/V commutation relations") {
  Rng rng(11);
  for (const char* name : {"S3", "Q8"}) {
    CAPTURE(name);
    auto s = random_setup(name, rng);
    const auto& g = *s.g;
    for (Elem x = 0; x < g.order(); ++x)
      for (Elem y = 0; y < g.order(); ++y) {
        const CMatrix lhs = u_op(x, s.beta) * u_op(y, s.beta);
        const CMatrix rhs = multiplication(cocycle_slice(s.gamma, x, y).conjugate()) * u_op(g.multiply(x, y), s.beta);
        CHECK(max_abs_diff(lhs, rhs) < 1e-12);
      }
    const auto n = ix(g.order());
    for (std::size_t k = 0; k < s.dual->size(); ++k) {
      const auto& xi = s.dual->irrep(k);
      const CMatrix idx = CMatrix::Identity(xi.dim, xi.dim);
      for (Elem x = 0; x < g.order(); ++x) {
        const CMatrix ux = Eigen::kroneckerProduct(u_op(x, s.beta), idx).eval();
        const CMatrix shift = Eigen::kroneckerProduct(CMatrix::Identity(n, n), xi(x)).eval();
        CHECK(max_abs_diff(ux * v_op(*s.dual, k), v_op(*s.dual, k) * ux * shift) < 1e-12);
      }
      for (std::size_t l = 0; l < s.dual->size(); ++l) {
        const auto& eta = s.dual->irrep(l);
        // On l2(G) (x) H_xi (x) H_eta, index (y, i, j).
        const Eigen::Index d = xi.dim * eta.dim;
        CMatrix vx = CMatrix::Zero(n * d, n * d), ve = CMatrix::Zero(n * d, n * d);
        for (Elem y = 0; y < g.order(); ++y) {
          vx.block(ix(y) * d, ix(y) * d, d, d) = Eigen::kroneckerProduct(xi(y).adjoint(), CMatrix::Identity(eta.dim, eta.dim)).eval();
          ve.block(ix(y) * d, ix(y) * d, d, d) = Eigen::kroneckerProduct(CMatrix::Identity(xi.dim, xi.dim), eta(y).adjoint()).eval();
        }
        CHECK(max_abs_diff(vx * ve, ve * vx) < 1e-12);
      }
    }
  }
}

TEST_CASE("twisted convolution") {
  Rng rng(12);
  auto z2 = finite_model("Z2").group;
  CVector dg = CVector::Zero(2);
  dg(1) = 1.0;
  CMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(max_abs_diff(twisted_convolution(dg, Cochain::one(z2, 1)), swap) == 0.0);

  auto s = random_setup("S3", rng);
  const auto& g = *s.g;
  const auto n = ix(g.order());
  const CVector v = random_vector(rng, n), w = random_vector(rng, n);
  // integrated form
  CMatrix integrated = CMatrix::Zero(n, n);
  for (Elem x = 0; x < g.order(); ++x) integrated += w(ix(x)) * u_op(x, s.beta);
  CHECK(max_abs_diff(integrated, twisted_convolution(w, conjugate(s.beta))) < 1e-12);
  // Conv(v) Conv(w) against the gamma-weighted double sum
  const CMatrix prod = twisted_convolution(v, s.beta) * twisted_convolution(w, s.beta);
  CMatrix expected = CMatrix::Zero(n, n);
  for (Elem q = 0; q < g.order(); ++q)
    for (Elem x = 0; x < g.order(); ++x) {
      cplx inner_sum = 0.0;
      for (Elem y = 0; y < g.order(); ++y) {
        const Elem xy = g.multiply(x, g.inverse(y));
        inner_sum += s.gamma.at(q, xy, y) * v(ix(xy)) * w(ix(y));
      }
      expected(ix(q), ix(g.multiply(g.inverse(x), q))) += s.beta.at(q, x) * inner_sum;
    }
  CHECK(max_abs_diff(prod, expected) < 1e-12);
  // untwisted: Conv(v) Conv(w) = Conv(v * w)
  const auto one = Cochain::one(s.g, 1);
  CVector vw = CVector::Zero(n);
  for (Elem x = 0; x < g.order(); ++x)
    for (Elem y = 0; y < g.order(); ++y) vw(ix(x)) += v(ix(y)) * w(ix(g.multiply(g.inverse(y), x)));
  CHECK(max_abs_diff(twisted_convolution(v, one) * twisted_convolution(w, one), twisted_convolution(vw, one)) < 1e-12);
}

TEST_CASE("factorization of tensor symbols") {
  Rng rng(13);
  auto s = random_setup("D4", rng);
  const auto& g = *s.g;
  const auto n = ix(g.order());
  const CVector a = random_vector(rng, n), w = random_vector(rng, n);
  const auto f = OpSymbol::tensor(s.dual, a, s.dual->fourier({w.data(), static_cast<std::size_t>(n)}));
  for (Elem x0 = 0; x0 < g.order(); ++x0) {
    const auto tau = FiniteTau::constant(s.g, x0);
    CHECK(max_abs_diff(op(f, s.beta, tau), multiplication(left_translate(g, a, x0)) * twisted_convolution(w, s.beta)) < 1e-12);
  }
  CHECK(max_abs_diff(op(f, s.beta, FiniteTau::identity(s.g)), twisted_convolution(w, s.beta) * multiplication(a)) < 1e-12);
}

TEST_CASE("symmetric quantization on Z3") {
  Rng rng(14);
  auto m = finite_model("Z3");
  const auto& g = *m.group;
  const auto tau = FiniteTau::power(m.group, 2);
  const auto one = Cochain::one(m.group, 1);
  const auto ok = symmetric_check(tau, one, m.dual, rng);
  CHECK(ok.tau_symmetric);
  CHECK(ok.gamma_condition());
  CHECK(ok.adjoint_defect < 1e-12);
  // beta(q; g^2) = conj beta(g q; g) keeps gamma(q; z, z^-1) = 1.
  const Elem gen = *g.find("g");
  const Cochain rnd = Cochain::random(m.group, 1, rng);
  const Cochain beta = Cochain::tabulate(m.group, 1, [&](Elem q, std::span<const Elem> x) {
    if (x[0] == gen) return rnd.at(q, gen);
    if (x[0] == g.inverse(gen)) return std::conj(rnd.at(g.multiply(gen, q), gen));
    return cplx(1.0, 0.0);
  });
  const auto good = symmetric_check(tau, beta, m.dual, rng);
  CHECK(good.gamma_condition());
  CHECK(good.adjoint_defect < 1e-12);
  const auto bad = symmetric_check(tau, rnd, m.dual, rng);
  CHECK_FALSE(bad.gamma_condition());
  CHECK(bad.adjoint_defect > 1e-3);
  // Z2 has no symmetric tau at all.
  auto z2 = finite_model("Z2");
  for (Elem a = 0; a < 2; ++a)
    for (Elem b = 0; b < 2; ++b) CHECK_FALSE(FiniteTau(z2.group, {a, b}).is_symmetric());
}

TEST_CASE("operator symbol JSON round trip") {
  Rng rng(15);
  auto dual = finite_model("S3").dual;
  const auto f = OpSymbol::random(dual, rng);
  CHECK(op_symbol_from_json(dual, op_symbol_to_json(f)).distance(f) == 0.0);
}
