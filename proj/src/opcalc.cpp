#include "twistquant/opcalc.hpp"

#include <cmath>
#include <stdexcept>

#include "twistquant/errors.hpp"

namespace twistquant {

namespace {

Eigen::Index ix(std::size_t x) { return static_cast<Eigen::Index>(x); }

void require_group(const FiniteGroup& a, const FiniteGroup& b) {
  if (&a != &b && a.cayley() != b.cayley()) throw BackendMismatch("operands live on different groups");
}

}  // namespace

OpSymbol::OpSymbol(DualPtr dual) : dual_(std::move(dual)), nxi_(dual_->size()) {
  const auto n = dual_->group().order();
  blocks_.reserve(n * nxi_);
  for (Elem x = 0; x < n; ++x)
    for (std::size_t k = 0; k < nxi_; ++k) {
      const int d = dual_->irrep(k).dim;
      blocks_.push_back(CMatrix::Zero(d, d));
    }
}

OpSymbol OpSymbol::identity(DualPtr dual) {
  OpSymbol f(std::move(dual));
  for (auto& b : f.blocks_) b.setIdentity();
  return f;
}

OpSymbol OpSymbol::random(DualPtr dual, Rng& rng) {
  OpSymbol f(std::move(dual));
  for (auto& b : f.blocks_) b = random_matrix(rng, b.rows(), b.cols());
  return f;
}

OpSymbol OpSymbol::tensor(DualPtr dual, const CVector& a, const OperatorField& phi) {
  dual->check_field(phi);
  OpSymbol f(std::move(dual));
  const auto n = f.dual().group().order();
  if (static_cast<std::size_t>(a.size()) != n) throw BackendMismatch("position factor has the wrong size");
  for (Elem x = 0; x < n; ++x)
    for (std::size_t k = 0; k < f.nxi_; ++k) f(x, k) = a(ix(x)) * phi[k];
  return f;
}

OpSymbol OpSymbol::star() const {
  OpSymbol f(dual_);
  for (std::size_t i = 0; i < blocks_.size(); ++i) f.blocks_[i] = blocks_[i].adjoint();
  return f;
}

OpSymbol OpSymbol::operator+(const OpSymbol& other) const {
  require_group(dual_->group(), other.dual().group());
  OpSymbol f(dual_);
  for (std::size_t i = 0; i < blocks_.size(); ++i) f.blocks_[i] = blocks_[i] + other.blocks_[i];
  return f;
}

OpSymbol OpSymbol::operator*(cplx s) const {
  OpSymbol f(dual_);
  for (std::size_t i = 0; i < blocks_.size(); ++i) f.blocks_[i] = s * blocks_[i];
  return f;
}

double OpSymbol::distance(const OpSymbol& other) const {
  require_group(dual_->group(), other.dual().group());
  if (other.blocks_.size() != blocks_.size()) throw BackendMismatch("symbols use different duals");
  double d = 0.0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) d = std::max(d, max_abs_diff(blocks_[i], other.blocks_[i]));
  return d;
}

cplx inner(const OpSymbol& f, const OpSymbol& g) {
  const auto& dual = f.dual();
  require_group(dual.group(), g.dual().group());
  cplx s = 0.0;
  for (Elem x = 0; x < dual.group().order(); ++x)
    for (std::size_t k = 0; k < dual.size(); ++k)
      s += dual.weight(k) * (f(x, k).array() * g(x, k).array().conjugate()).sum();
  return s;
}

double norm(const OpSymbol& f) { return std::sqrt(std::max(0.0, inner(f, f).real())); }

OpSymbol partial_fourier(const SymbolAG& phi, DualPtr dual) {
  require_group(phi.group(), dual->group());
  OpSymbol f(dual);
  const auto n = phi.group().order();
  for (Elem q = 0; q < n; ++q)
    for (std::size_t k = 0; k < dual->size(); ++k)
      for (Elem z = 0; z < n; ++z) f(q, k) += phi(q, z) * dual->irrep(k)(z).adjoint();
  return f;
}

SymbolAG partial_inverse_fourier(const OpSymbol& f) {
  const auto& dual = f.dual();
  const auto n = dual.group().order();
  CMatrix phi = CMatrix::Zero(ix(n), ix(n));
  for (Elem q = 0; q < n; ++q)
    for (Elem z = 0; z < n; ++z) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < dual.size(); ++k) s += dual.weight(k) * (dual.irrep(k)(z) * f(q, k)).trace();
      phi(ix(q), ix(z)) = s;
    }
  return {dual.group_ptr(), std::move(phi)};
}

CMatrix op(const OpSymbol& f, const Cochain& beta, const FiniteTau& tau) {
  return schrodinger(partial_inverse_fourier(f), beta, tau);
}

CMatrix kernel(const OpSymbol& f, const Cochain& beta, const FiniteTau& tau) {
  const auto& dual = f.dual();
  const auto& g = dual.group();
  require_group(g, beta.group());
  require_group(g, tau.group());
  const auto n = g.order();
  CMatrix k(ix(n), ix(n));
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) {
      const Elem z = g.multiply(x, g.inverse(y));
      const Elem p = g.multiply(g.inverse(tau(z)), x);
      cplx s = 0.0;
      for (std::size_t xi = 0; xi < dual.size(); ++xi) s += dual.weight(xi) * (dual.irrep(xi)(z) * f(p, xi)).trace();
      k(ix(x), ix(y)) = beta.at(x, z) * s;
    }
  return k;
}

OpSymbol symbol_of(const CMatrix& t, const Cochain& beta, const FiniteTau& tau, DualPtr dual) {
  const auto& g = dual->group();
  require_group(g, beta.group());
  require_group(g, tau.group());
  const auto n = g.order();
  if (t.rows() != ix(n) || t.cols() != ix(n)) throw BackendMismatch("operator size does not match the group");
  CMatrix phi(ix(n), ix(n));
  for (Elem p = 0; p < n; ++p)
    for (Elem z = 0; z < n; ++z) {
      const Elem x = g.multiply(tau(z), p);
      const Elem y = g.multiply(g.inverse(z), x);
      phi(ix(p), ix(z)) = std::conj(beta.at(x, z)) * t(ix(x), ix(y));
    }
  SymbolAG sym(dual->group_ptr(), std::move(phi));
  return partial_fourier(sym, std::move(dual));
}

OpSymbol compose_symbols(const OpSymbol& f, const OpSymbol& g, const Cochain& beta, const FiniteTau& tau) {
  return symbol_of(op(f, beta, tau) * op(g, beta, tau), beta, tau, f.dual_ptr());
}

OpSymbol involute_symbol(const OpSymbol& f, const Cochain& beta, const FiniteTau& tau) {
  return symbol_of(op(f, beta, tau).adjoint(), beta, tau, f.dual_ptr());
}

CMatrix rank_one(const CVector& u, const CVector& v) { return v * u.adjoint(); }

OpSymbol wigner(const CVector& u, const CVector& v, const Cochain& beta, const FiniteTau& tau, DualPtr dual) {
  const auto& g = dual->group();
  require_group(g, beta.group());
  require_group(g, tau.group());
  const auto n = g.order();
  if (u.size() != ix(n) || v.size() != ix(n)) throw BackendMismatch("vector size does not match the group");
  OpSymbol out(dual);
  for (Elem p = 0; p < n; ++p)
    for (Elem z = 0; z < n; ++z) {
      const Elem x = g.multiply(tau(z), p);
      const cplx c = std::conj(beta.at(x, z)) * v(ix(x)) * std::conj(u(ix(g.multiply(g.inverse(z), x))));
      for (std::size_t k = 0; k < dual->size(); ++k) out(p, k) += c * dual->irrep(k)(z).adjoint();
    }
  return out;
}

DualSideField::DualSideField(DualPtr dual) : dual_(std::move(dual)), nxi_(dual_->size()) {
  const auto n = dual_->group().order();
  for (Elem z = 0; z < n; ++z)
    for (std::size_t k = 0; k < nxi_; ++k) {
      const int d = dual_->irrep(k).dim;
      blocks_.push_back(CMatrix::Zero(d, d));
    }
}

double DualSideField::distance(const DualSideField& other) const {
  if (other.blocks_.size() != blocks_.size()) throw BackendMismatch("fields use different duals");
  double d = 0.0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) d = std::max(d, max_abs_diff(blocks_[i], other.blocks_[i]));
  return d;
}

cplx inner(const DualSideField& a, const DualSideField& b) {
  const auto& dual = a.dual();
  require_group(dual.group(), b.dual().group());
  cplx s = 0.0;
  for (Elem z = 0; z < dual.group().order(); ++z)
    for (std::size_t k = 0; k < dual.size(); ++k)
      s += dual.weight(k) * (a(k, z).array() * b(k, z).array().conjugate()).sum();
  return s;
}

DualSideField fourier_wigner_transform(const OpSymbol& f) {
  const SymbolAG phi = partial_inverse_fourier(f);
  const auto& dual = f.dual();
  const auto n = dual.group().order();
  DualSideField out(f.dual_ptr());
  for (Elem z = 0; z < n; ++z)
    for (std::size_t k = 0; k < dual.size(); ++k)
      for (Elem x = 0; x < n; ++x) out(k, z) += phi(x, z) * dual.irrep(k)(x).adjoint();
  return out;
}

DualSideField fourier_wigner(const CVector& u, const CVector& v, const Cochain& beta, const FiniteTau& tau,
                             DualPtr dual) {
  const auto& g = dual->group();
  require_group(g, beta.group());
  require_group(g, tau.group());
  const auto n = g.order();
  DualSideField out(dual);
  for (Elem x = 0; x < n; ++x)
    for (std::size_t k = 0; k < dual->size(); ++k) {
      const auto& xi = dual->irrep(k);
      CMatrix s = CMatrix::Zero(xi.dim, xi.dim);
      for (Elem y = 0; y < n; ++y)
        s += std::conj(beta.at(y, x)) * v(ix(y)) * std::conj(u(ix(g.multiply(g.inverse(x), y)))) * xi(y).adjoint();
      out(k, x) = s * xi(tau(x));
    }
  return out;
}

CMatrix weyl(const UnitaryDual& dual, std::size_t xi, Elem x, const Cochain& beta, const FiniteTau& tau) {
  const auto& g = dual.group();
  require_group(g, beta.group());
  require_group(g, tau.group());
  const auto& r = dual.irrep(xi);
  const auto n = g.order();
  const int d = r.dim;
  CMatrix w = CMatrix::Zero(ix(n) * d, ix(n) * d);
  const CMatrix& shift = r(tau(x));
  for (Elem y = 0; y < n; ++y) {
    const Elem src = g.multiply(g.inverse(x), y);
    w.block(ix(y) * d, ix(src) * d, d, d) = std::conj(beta.at(y, x)) * r(y).adjoint() * shift;
  }
  return w;
}

CMatrix u_op(Elem x, const Cochain& beta) {
  const auto& g = beta.group();
  const auto n = g.order();
  CMatrix u = CMatrix::Zero(ix(n), ix(n));
  for (Elem y = 0; y < n; ++y) u(ix(y), ix(g.multiply(g.inverse(x), y))) = std::conj(beta.at(y, x));
  return u;
}

CMatrix v_op(const UnitaryDual& dual, std::size_t xi) {
  const auto& r = dual.irrep(xi);
  const auto n = dual.group().order();
  const int d = r.dim;
  CMatrix v = CMatrix::Zero(ix(n) * d, ix(n) * d);
  for (Elem y = 0; y < n; ++y) v.block(ix(y) * d, ix(y) * d, d, d) = r(y).adjoint();
  return v;
}

CVector tensor_vector(const CVector& u, const CVector& phi) {
  CVector out(u.size() * phi.size());
  for (Eigen::Index y = 0; y < u.size(); ++y) out.segment(y * phi.size(), phi.size()) = u(y) * phi;
  return out;
}

CMatrix twisted_convolution(const CVector& w, const Cochain& beta) {
  const auto& g = beta.group();
  const auto n = g.order();
  if (w.size() != ix(n)) throw BackendMismatch("convolution weight has the wrong size");
  CMatrix c = CMatrix::Zero(ix(n), ix(n));
  for (Elem q = 0; q < n; ++q)
    for (Elem z = 0; z < n; ++z) c(ix(q), ix(g.multiply(g.inverse(z), q))) += beta.at(q, z) * w(ix(z));
  return c;
}

Cochain conjugate(const Cochain& c) { return c.inverse(); }

SymmetricReport symmetric_check(const FiniteTau& tau, const Cochain& beta, DualPtr dual, Rng& rng, int trials) {
  const auto& g = dual->group();
  SymmetricReport r;
  r.tau_symmetric = tau.is_symmetric();
  const Cochain gamma = coboundary(beta);
  for (Elem q = 0; q < g.order(); ++q)
    for (Elem z = 0; z < g.order(); ++z)
      r.gamma_inverse_defect = std::max(r.gamma_inverse_defect, std::abs(gamma.at(q, z, g.inverse(z)) - 1.0));
  for (int t = 0; t < trials; ++t) {
    const OpSymbol f = OpSymbol::random(dual, rng);
    r.adjoint_defect = std::max(r.adjoint_defect, max_abs_diff(op(f.star(), beta, tau), op(f, beta, tau).adjoint()));
  }
  return r;
}

nlohmann::json op_symbol_to_json(const OpSymbol& f) {
  const auto& dual = f.dual();
  auto points = nlohmann::json::array();
  for (Elem x = 0; x < dual.group().order(); ++x) {
    auto blocks = nlohmann::json::array();
    for (std::size_t k = 0; k < dual.size(); ++k) {
      auto entries = nlohmann::json::array();
      const auto& b = f(x, k);
      for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) entries.push_back({b(i, j).real(), b(i, j).imag()});
      blocks.push_back(entries);
    }
    points.push_back(blocks);
  }
  return {{"blocks", points}};
}

OpSymbol op_symbol_from_json(DualPtr dual, const nlohmann::json& j) {
  try {
    OpSymbol f(dual);
    const auto& points = j.at("blocks");
    if (points.size() != dual->group().order()) throw ConfigError("symbol needs one entry per group element");
    for (Elem x = 0; x < points.size(); ++x) {
      if (points[x].size() != dual->size()) throw ConfigError("symbol needs one block per irrep");
      for (std::size_t k = 0; k < dual->size(); ++k) {
        const int d = dual->irrep(k).dim;
        const auto& entries = points[x][k];
        if (entries.size() != static_cast<std::size_t>(d * d)) throw ConfigError("symbol block has the wrong size");
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            const auto& e = entries[static_cast<std::size_t>(a * d + b)];
            f(x, k)(a, b) = cplx(e[0].get<double>(), e[1].get<double>());
          }
      }
    }
    return f;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("malformed operator symbol: ") + ex.what());
  }
}

}  // namespace twistquant
