#include "twistquant/crossed_product.hpp"

#include <stdexcept>

#include "twistquant/errors.hpp"

namespace twistquant {

namespace {

Eigen::Index ix(Elem x) { return static_cast<Eigen::Index>(x); }

void require_group(const FiniteGroup& a, const FiniteGroup& b) {
  if (&a != &b && a.cayley() != b.cayley()) throw BackendMismatch("operands live on different groups");
}

}  // namespace

SymbolAG::SymbolAG(FiniteGroupPtr group, CMatrix values) : group_(std::move(group)), values_(std::move(values)) {
  const auto n = ix(group_->order());
  if (values_.rows() != n || values_.cols() != n) throw std::invalid_argument("symbol must be |G| x |G|");
  if (!values_.allFinite()) throw std::invalid_argument("symbol entries must be finite");
}

SymbolAG SymbolAG::zero(FiniteGroupPtr group) {
  const auto n = ix(group->order());
  return {std::move(group), CMatrix::Zero(n, n)};
}

SymbolAG SymbolAG::random(FiniteGroupPtr group, Rng& rng) {
  const auto n = ix(group->order());
  return {std::move(group), random_matrix(rng, n, n)};
}

SymbolAG SymbolAG::delta(FiniteGroupPtr group, Elem x0, const CVector& a) {
  const auto n = ix(group->order());
  CMatrix v = CMatrix::Zero(n, n);
  v.col(ix(x0)) = a;
  return {std::move(group), std::move(v)};
}

double SymbolAG::l1_norm() const { return values_.cwiseAbs().colwise().maxCoeff().sum(); }

double SymbolAG::distance(const SymbolAG& other) const {
  require_group(*group_, *other.group_);
  return max_abs_diff(values_, other.values_);
}

SymbolAG twisted_product(const SymbolAG& phi, const SymbolAG& psi, const Cochain& gamma, const FiniteTau& tau) {
  const auto& g = phi.group();
  require_group(g, psi.group());
  require_group(g, gamma.group());
  require_group(g, tau.group());
  if (gamma.degree() != 2) throw std::invalid_argument("twisted product needs a 2-cochain");
  const auto n = g.order();
  CMatrix out = CMatrix::Zero(ix(n), ix(n));
  for (Elem q = 0; q < n; ++q)
    for (Elem x = 0; x < n; ++x) {
      const Elem tq = g.multiply(tau(x), q);
      cplx s = 0.0;
      for (Elem y = 0; y < n; ++y) {
        const Elem yix = g.multiply(g.inverse(y), x);
        const Elem a = g.multiply(g.inverse(tau(y)), tq);
        const Elem b = g.multiply(g.inverse(tau(yix)), g.multiply(g.inverse(y), tq));
        s += phi(a, y) * psi(b, yix) * gamma.at(tq, y, yix);
      }
      out(ix(q), ix(x)) = s;
    }
  return {phi.group_ptr(), std::move(out)};
}

SymbolAG twisted_involution(const SymbolAG& phi, const Cochain& gamma, const FiniteTau& tau) {
  const auto& g = phi.group();
  require_group(g, gamma.group());
  require_group(g, tau.group());
  const auto n = g.order();
  CMatrix out(ix(n), ix(n));
  for (Elem q = 0; q < n; ++q)
    for (Elem x = 0; x < n; ++x) {
      const Elem xi = g.inverse(x);
      const Elem tq = g.multiply(tau(x), q);
      const Elem arg = g.multiply(g.inverse(tau(xi)), g.multiply(xi, tq));
      out(ix(q), ix(x)) = std::conj(gamma.at(tq, x, xi)) * std::conj(phi(arg, xi));
    }
  return {phi.group_ptr(), std::move(out)};
}

CMatrix schrodinger(const SymbolAG& phi, const Cochain& beta, const FiniteTau& tau) {
  const auto& g = phi.group();
  require_group(g, beta.group());
  require_group(g, tau.group());
  if (beta.degree() != 1) throw std::invalid_argument("Schrodinger representation needs a 1-cochain");
  const auto n = g.order();
  CMatrix k(ix(n), ix(n));
  for (Elem q = 0; q < n; ++q)
    for (Elem y = 0; y < n; ++y) {
      const Elem z = g.multiply(q, g.inverse(y));
      k(ix(q), ix(y)) = beta.at(q, z) * phi(g.multiply(g.inverse(tau(z)), q), z);
    }
  return k;
}

SymbolAG retau(const SymbolAG& phi, const FiniteTau& tau, const FiniteTau& tau_prime) {
  const auto& g = phi.group();
  require_group(g, tau.group());
  require_group(g, tau_prime.group());
  const auto n = g.order();
  CMatrix out(ix(n), ix(n));
  for (Elem q = 0; q < n; ++q)
    for (Elem x = 0; x < n; ++x)
      out(ix(q), ix(x)) = phi(g.multiply(g.inverse(tau_prime(x)), g.multiply(tau(x), q)), x);
  return {phi.group_ptr(), std::move(out)};
}

SymbolAG recocycle(const SymbolAG& phi, const Cochain& beta) {
  const auto& g = phi.group();
  require_group(g, beta.group());
  if (beta.degree() != 1) throw std::invalid_argument("recocycle needs a 1-cochain");
  const auto n = g.order();
  CMatrix out(ix(n), ix(n));
  for (Elem q = 0; q < n; ++q)
    for (Elem x = 0; x < n; ++x) out(ix(q), ix(x)) = phi(q, x) * beta.at(q, x);
  return {phi.group_ptr(), std::move(out)};
}

CMatrix twisted_translation(Elem y, const Cochain& beta) {
  const auto& g = beta.group();
  const auto n = g.order();
  CMatrix t = CMatrix::Zero(ix(n), ix(n));
  for (Elem q = 0; q < n; ++q) t(ix(q), ix(g.multiply(g.inverse(y), q))) = beta.at(q, y);
  return t;
}

CMatrix multiplication(const CVector& a) { return a.asDiagonal(); }

CVector left_translate(const FiniteGroup& g, const CVector& a, Elem x) {
  CVector out(a.size());
  for (Elem q = 0; q < g.order(); ++q) out(ix(q)) = a(ix(g.multiply(g.inverse(x), q)));
  return out;
}

CVector cocycle_slice(const Cochain& gamma, Elem x, Elem y) {
  CVector out(ix(gamma.group().order()));
  for (Elem q = 0; q < gamma.group().order(); ++q) out(ix(q)) = gamma.at(q, x, y);
  return out;
}

CVector cochain_slice(const Cochain& beta, Elem x) {
  CVector out(ix(beta.group().order()));
  for (Elem q = 0; q < beta.group().order(); ++q) out(ix(q)) = beta.at(q, x);
  return out;
}

CVector cochain_values0(const Cochain& a) {
  if (a.degree() != 0) throw std::invalid_argument("expected a 0-cochain");
  return Eigen::Map<const CVector>(a.values().data(), ix(a.size()));
}

SymbolAG symbol_ag_from_json(const FiniteGroupPtr& group, const nlohmann::json& j) {
  try {
    const auto n = group->order();
    const auto& rows = j.is_array() ? j : j.at("values");
    if (rows.size() != n) throw ConfigError("symbol must have |G| rows");
    CMatrix v(ix(n), ix(n));
    for (Elem q = 0; q < n; ++q) {
      if (rows[q].size() != n) throw ConfigError("symbol must have |G| columns");
      for (Elem x = 0; x < n; ++x) v(ix(q), ix(x)) = cplx(rows[q][x][0].get<double>(), rows[q][x][1].get<double>());
    }
    return {group, std::move(v)};
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("malformed symbol: ") + ex.what());
  }
}

nlohmann::json symbol_ag_to_json(const SymbolAG& phi) {
  auto rows = nlohmann::json::array();
  const auto n = phi.group().order();
  for (Elem q = 0; q < n; ++q) {
    auto row = nlohmann::json::array();
    for (Elem x = 0; x < n; ++x) row.push_back({phi(q, x).real(), phi(q, x).imag()});
    rows.push_back(row);
  }
  return {{"values", rows}};
}

}  // namespace twistquant
