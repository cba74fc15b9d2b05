#include <doctest.h>

#include "twistquant/dual.hpp"
#include "twistquant/errors.hpp"

using namespace twistquant;

namespace {

CVector random_function(Rng& rng, std::size_t n) { return random_vector(rng, static_cast<Eigen::Index>(n)); }

std::span<const cplx> span_of(const CVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

// (u * v)(x) = sum_y u(y) v(y^-1 x)
CVector convolve(const FiniteGroup& g, const CVector& u, const CVector& v) {
  CVector out = CVector::Zero(u.size());
  for (Elem x = 0; x < g.order(); ++x)
    for (Elem y = 0; y < g.order(); ++y)
      out(static_cast<Eigen::Index>(x)) += u(static_cast<Eigen::Index>(y)) *
                                           v(static_cast<Eigen::Index>(g.multiply(g.inverse(y), x)));
  return out;
}

}  // namespace

TEST_CASE("shipped duals pass the self-check") {
  for (const char* name : {"trivial", "Z2", "Z3", "Z6", "S3", "D4", "Q8", "Z8"}) {
    CAPTURE(name);
    const auto model = finite_model(name);
    const auto d = dual_selfcheck(*model.dual);
    CHECK(d.max_defect() < 1e-12);
    CHECK(d.accepted());
  }
  const auto s3 = finite_model("S3").dual;
  CHECK(s3->size() == 3);
  CHECK(s3->irrep(2).dim == 2);
  CHECK(s3->weight(2) == doctest::Approx(2.0 / 6.0));
}

TEST_CASE("S3 standard irrep is real orthogonal") {
  const auto s3 = finite_model("S3").dual;
  for (const auto& m : s3->irrep(2).matrices) CHECK(m.imag().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("duplicated irrep fails the inequivalence check") {
  const auto s3 = finite_model("S3");
  auto irreps = s3.dual->irreps();
  irreps.push_back(irreps[2]);
  const UnitaryDual bad(s3.group, irreps);
  const auto d = dual_selfcheck(bad);
  CHECK(d.inequivalence == 1.0);
  CHECK_FALSE(d.accepted());
}

TEST_CASE("Fourier transform on Z2") {
  const auto z2 = finite_model("Z2").dual;
  CVector u(2);
  u << 1.0, 0.0;
  const auto f = z2->fourier(span_of(u));
  CHECK(std::abs(f[0](0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(f[1](0, 0) - 1.0) < 1e-15);
}

TEST_CASE("delta at the identity transforms to identity blocks and back") {
  for (const char* name : {"S3", "Q8", "D4"}) {
    const auto dual = finite_model(name).dual;
    CVector delta = CVector::Zero(static_cast<Eigen::Index>(dual->group().order()));
    delta(0) = 1.0;
    const auto f = dual->fourier(span_of(delta));
    for (std::size_t k = 0; k < dual->size(); ++k) CHECK(max_abs_diff(f[k], CMatrix::Identity(f[k].rows(), f[k].cols())) < 1e-15);
    CHECK(max_abs_diff(dual->inverse_fourier(dual->identity_field()), delta) < 1e-15);
  }
}

TEST_CASE("trivial-rep field inverts to the constant 1/|G|") {
  const auto dual = finite_model("D4").dual;
  auto phi = dual->zero_field();
  phi[dual->trivial_index()](0, 0) = 1.0;
  const CVector u = dual->inverse_fourier(phi);
  CHECK(max_abs_diff(u, CVector::Constant(8, 1.0 / 8.0)) < 1e-16);
}

TEST_CASE("Plancherel, inversion and convolution orientation") {
  Rng rng(17);
  for (const char* name : {"Z3", "S3", "D4", "Q8", "Z6"}) {
    CAPTURE(name);
    const auto dual = finite_model(name).dual;
    const auto& g = dual->group();
    for (int t = 0; t < 10; ++t) {
      const CVector u = random_function(rng, g.order());
      const CVector v = random_function(rng, g.order());
      const auto fu = dual->fourier(span_of(u));
      const auto fv = dual->fourier(span_of(v));
      CHECK(std::abs(u.squaredNorm() - dual->inner(fu, fu).real()) < 1e-12);
      CHECK(max_abs_diff(dual->inverse_fourier(fu), u) < 1e-12);
      const CVector c = convolve(g, u, v);
      const auto fc = dual->fourier(span_of(c));
      for (std::size_t k = 0; k < dual->size(); ++k) CHECK(max_abs_diff(fc[k], fv[k] * fu[k]) < 1e-12);
    }
  }
}

TEST_CASE("mismatched function size is rejected") {
  const auto dual = finite_model("S3").dual;
  CVector u = CVector::Zero(4);
  CHECK_THROWS_AS(dual->fourier(span_of(u)), BackendMismatch);
}

TEST_CASE("dual JSON round trip") {
  const auto q8 = finite_model("Q8");
  const auto back = dual_from_json(q8.group, dual_to_json(*q8.dual));
  CHECK(back->size() == 5);
  CHECK(dual_selfcheck(*back).accepted());
  CHECK_THROWS_AS(dual_from_json(q8.group, nlohmann::json::parse(R"([{"dim":1,"matrices":[[[1,0]]]}])")), ConfigError);
}
