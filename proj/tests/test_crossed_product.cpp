#include <doctest.h>

#include "twistquant/crossed_product.hpp"
#include "twistquant/dual.hpp"

using namespace twistquant;

namespace {

struct Setup {
  FiniteGroupPtr g;
  Cochain beta;
  Cochain gamma;
};

Setup random_setup(const char* name, Rng& rng) {
  auto g = finite_model(name).group;
  Cochain beta = Cochain::random(g, 1, rng);
  Cochain gamma = coboundary(beta);
  return {g, std::move(beta), std::move(gamma)};
}

FiniteTau random_tau(const FiniteGroupPtr& g, Rng& rng) {
  std::uniform_int_distribution<Elem> pick(0, g->order() - 1);
  std::vector<Elem> t(g->order());
  for (auto& v : t) v = pick(rng);
  t[g->identity()] = g->identity();
  return FiniteTau(g, t);
}

}  // namespace

TEST_CASE("untwisted product of position-independent symbols is group convolution") {
  auto g = finite_model("S3").group;
  Rng rng(2);
  const CVector a = random_vector(rng, 6), b = random_vector(rng, 6);
  CMatrix pa(6, 6), pb(6, 6);
  for (int q = 0; q < 6; ++q) pa.row(q) = a.transpose(), pb.row(q) = b.transpose();
  const auto prod = twisted_product(SymbolAG(g, pa), SymbolAG(g, pb), Cochain::one(g, 2), FiniteTau::trivial(g));
  for (Elem q = 0; q < 6; ++q)
    for (Elem x = 0; x < 6; ++x) {
      cplx s = 0.0;
      for (Elem y = 0; y < 6; ++y) s += a(static_cast<Eigen::Index>(y)) * b(static_cast<Eigen::Index>(g->multiply(g->inverse(y), x)));
      CHECK(std::abs(prod(q, x) - s) < 1e-12);
    }
}

TEST_CASE("Z2 delta at the generator squares to the delta at the identity") {
  auto g = finite_model("Z2").group;
  const Elem gen = *g->find("g");
  const auto d = SymbolAG::delta(g, gen, CVector::Ones(2));
  const auto p = twisted_product(d, d, Cochain::one(g, 2), FiniteTau::trivial(g));
  CHECK(p.distance(SymbolAG::delta(g, 0, CVector::Ones(2))) < 1e-15);
}

TEST_CASE("twisted product is associative and the involution is involutive") {
  Rng rng(41);
  for (const char* name : {"S3", "Z6", "Q8"}) {
    CAPTURE(name);
    auto s = random_setup(name, rng);
    for (const auto& tau : {FiniteTau::trivial(s.g), FiniteTau::identity(s.g), random_tau(s.g, rng)}) {
      const auto f = SymbolAG::random(s.g, rng), h = SymbolAG::random(s.g, rng), k = SymbolAG::random(s.g, rng);
      const auto left = twisted_product(twisted_product(f, h, s.gamma, tau), k, s.gamma, tau);
      const auto right = twisted_product(f, twisted_product(h, k, s.gamma, tau), s.gamma, tau);
      CHECK(left.distance(right) < 1e-12);
      const auto fi = twisted_involution(f, s.gamma, tau);
      CHECK(twisted_involution(fi, s.gamma, tau).distance(f) < 1e-12);
      CHECK(std::abs(fi.l1_norm() - f.l1_norm()) < 1e-12);
    }
  }
}

TEST_CASE("untwisted involution specialization") {
  Rng rng(3);
  auto g = finite_model("S3").group;
  const auto f = SymbolAG::random(g, rng);
  const auto fi = twisted_involution(f, Cochain::one(g, 2), FiniteTau::trivial(g));
  for (Elem q = 0; q < 6; ++q)
    for (Elem x = 0; x < 6; ++x) CHECK(fi(q, x) == std::conj(f(g->multiply(g->inverse(x), q), g->inverse(x))));
}

TEST_CASE("Schrodinger representation examples") {
  Rng rng(6);
  auto s = random_setup("S3", rng);
  const auto tau = random_tau(s.g, rng);
  const CVector a = random_vector(rng, 6);
  CHECK(max_abs_diff(schrodinger(SymbolAG::delta(s.g, 0, a), s.beta, tau), multiplication(a)) < 1e-15);
  const Elem x0 = 4;
  const CMatrix t = schrodinger(SymbolAG::delta(s.g, x0, CVector::Ones(6)), Cochain::one(s.g, 1), FiniteTau::trivial(s.g));
  CMatrix expected = CMatrix::Zero(6, 6);
  for (Elem q = 0; q < 6; ++q) expected(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(s.g->multiply(s.g->inverse(x0), q))) = 1.0;
  CHECK(max_abs_diff(t, expected) == 0.0);
}

TEST_CASE("Schrodinger representation is a star homomorphism") {
  Rng rng(7);
  for (const char* name : {"S3", "D4", "Z6"}) {
    CAPTURE(name);
    auto s = random_setup(name, rng);
    const auto tau = random_tau(s.g, rng);
    for (int t = 0; t < 5; ++t) {
      const auto f = SymbolAG::random(s.g, rng), h = SymbolAG::random(s.g, rng);
      const CMatrix sf = schrodinger(f, s.beta, tau), sh = schrodinger(h, s.beta, tau);
      CHECK(max_abs_diff(schrodinger(twisted_product(f, h, s.gamma, tau), s.beta, tau), sf * sh) < 1e-12);
      CHECK(max_abs_diff(schrodinger(twisted_involution(f, s.gamma, tau), s.beta, tau), sf.adjoint()) < 1e-12);
    }
  }
}

TEST_CASE("covariant pair relations") {
  Rng rng(8);
  auto s = random_setup("Q8", rng);
  const auto& g = *s.g;
  const CVector a = random_vector(rng, 8);
  for (Elem x = 0; x < 8; ++x)
    for (Elem y = 0; y < 8; ++y) {
      const CMatrix lhs = twisted_translation(x, s.beta) * twisted_translation(y, s.beta);
      const CMatrix rhs = multiplication(cocycle_slice(s.gamma, x, y)) * twisted_translation(g.multiply(x, y), s.beta);
      CHECK(max_abs_diff(lhs, rhs) < 1e-12);
    }
  for (Elem x = 0; x < 8; ++x) {
    const CMatrix t = twisted_translation(x, s.beta);
    CHECK(max_abs_diff(t * multiplication(a) * t.adjoint(), multiplication(left_translate(g, a, x))) < 1e-12);
  }
}

TEST_CASE("gauge covariance of the Schrodinger representation") {
  Rng rng(9);
  auto s = random_setup("D4", rng);
  const auto tau = random_tau(s.g, rng);
  const Cochain a = Cochain::random(s.g, 0, rng);
  const Cochain beta2 = coboundary(a) * s.beta;
  const CMatrix m = multiplication(cochain_values0(a));
  for (int t = 0; t < 5; ++t) {
    const auto f = SymbolAG::random(s.g, rng);
    CHECK(max_abs_diff(schrodinger(f, beta2, tau), m.adjoint() * schrodinger(f, s.beta, tau) * m) < 1e-12);
  }
}

TEST_CASE("changing tau intertwines the representations") {
  Rng rng(10);
  auto g = finite_model("Z3").group;
  const Cochain beta = Cochain::random(g, 1, rng);
  const auto t0 = FiniteTau::trivial(g);
  const auto t1 = FiniteTau::power(g, 2);
  const auto t2 = random_tau(g, rng);
  const auto f = SymbolAG::random(g, rng);
  CHECK(retau(f, t1, t1).distance(f) == 0.0);
  CHECK(max_abs_diff(schrodinger(f, beta, t1), schrodinger(retau(f, t0, t1), beta, t0)) < 1e-12);
  CHECK(retau(retau(f, t1, t2), t0, t1).distance(retau(f, t0, t2)) < 1e-12);
}

TEST_CASE("recocycling intertwines twisted products") {
  Rng rng(11);
  auto s = random_setup("S3", rng);
  const auto e = FiniteTau::trivial(s.g);
  const auto one = Cochain::one(s.g, 1);
  const Cochain gamma0 = coboundary(Cochain::random(s.g, 1, rng));
  const Cochain shifted = coboundary(s.beta) * gamma0;
  for (int t = 0; t < 5; ++t) {
    const auto f = SymbolAG::random(s.g, rng), h = SymbolAG::random(s.g, rng);
    CHECK(recocycle(f, one).distance(f) == 0.0);
    CHECK(std::abs(recocycle(f, s.beta).l1_norm() - f.l1_norm()) < 1e-12);
    // Upsilon(f <> h with delta(beta) gamma) = Upsilon f <> Upsilon h with gamma
    const auto lhs = recocycle(twisted_product(f, h, shifted, e), s.beta);
    const auto rhs = twisted_product(recocycle(f, s.beta), recocycle(h, s.beta), gamma0, e);
    CHECK(lhs.distance(rhs) < 1e-12);
    const auto li = recocycle(twisted_involution(f, shifted, e), s.beta);
    CHECK(li.distance(twisted_involution(recocycle(f, s.beta), gamma0, e)) < 1e-12);
    // Schrodinger with trivial beta after recocycling equals Schrodinger with beta.
    CHECK(max_abs_diff(schrodinger(recocycle(f, s.beta), one, e), schrodinger(f, s.beta, e)) < 1e-12);
  }
}

TEST_CASE("the opposite recocycling direction does not intertwine") {
  Rng rng(12);
  auto s = random_setup("S3", rng);
  const auto e = FiniteTau::trivial(s.g);
  const auto f = SymbolAG::random(s.g, rng), h = SymbolAG::random(s.g, rng);
  const auto lhs = recocycle(twisted_product(f, h, Cochain::one(s.g, 2), e), s.beta);
  const auto rhs = twisted_product(recocycle(f, s.beta), recocycle(h, s.beta), s.gamma, e);
  CHECK(lhs.distance(rhs) > 1e-3);
}

TEST_CASE("SymbolAG JSON round trip") {
  Rng rng(13);
  auto g = finite_model("Z3").group;
  const auto f = SymbolAG::random(g, rng);
  CHECK(symbol_ag_from_json(g, symbol_ag_to_json(f)).distance(f) == 0.0);
}
