#include "twistquant/cochain.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "twistquant/errors.hpp"

namespace twistquant {

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void require_same_group(const Cochain& a, const Cochain& b) {
  if (a.group_ptr() != b.group_ptr() && a.group().cayley() != b.group().cayley())
    throw BackendMismatch("cochains live on different groups");
}

}  // namespace

Cochain::Cochain(FiniteGroupPtr group, int degree, std::vector<cplx> values)
    : group_(std::move(group)), degree_(degree), n_(group_->order()), values_(std::move(values)) {
  if (degree_ < 0) throw std::invalid_argument("cochain degree must be non-negative");
  if (degree_ > 4) throw std::invalid_argument("cochain degree above 4 is not supported");
  if (values_.size() != ipow(n_, degree_ + 1)) throw std::invalid_argument("cochain value count does not match |G|^(n+1)");
  for (const auto& v : values_)
    if (!(std::abs(std::abs(v) - 1.0) <= 1e-12)) throw std::invalid_argument("cochain values must have modulus 1");
}

Cochain Cochain::one(FiniteGroupPtr group, int degree) {
  const std::size_t n = ipow(group->order(), degree + 1);
  return {std::move(group), degree, std::vector<cplx>(n, cplx(1.0, 0.0))};
}

Cochain Cochain::random(FiniteGroupPtr group, int degree, Rng& rng, bool normalized) {
  const Elem e = group->identity();
  return tabulate(std::move(group), degree, [&](Elem, std::span<const Elem> args) {
    const cplx v = random_phase(rng);
    if (normalized)
      for (Elem x : args)
        if (x == e) return cplx(1.0, 0.0);
    return v;
  });
}

std::size_t Cochain::index(Elem q, std::span<const Elem> args) const {
  if (args.size() != static_cast<std::size_t>(degree_)) throw std::invalid_argument("wrong number of cochain arguments");
  std::size_t i = q;
  for (Elem x : args) i = i * n_ + x;
  return i;
}

void Cochain::decode(std::size_t flat, Elem& q, std::vector<Elem>& args) const {
  args.resize(static_cast<std::size_t>(degree_));
  for (int j = degree_ - 1; j >= 0; --j) {
    args[static_cast<std::size_t>(j)] = flat % n_;
    flat /= n_;
  }
  q = flat;
}

Cochain Cochain::operator*(const Cochain& other) const {
  require_same_group(*this, other);
  if (degree_ != other.degree_) throw std::invalid_argument("cochain degrees differ");
  std::vector<cplx> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] * other.values_[i];
  return {group_, degree_, std::move(v)};
}

Cochain Cochain::inverse() const {
  std::vector<cplx> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::conj(values_[i]);
  return {group_, degree_, std::move(v)};
}

double Cochain::normalization_defect() const {
  double d = 0.0;
  std::vector<Elem> args;
  Elem q = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    decode(i, q, args);
    for (Elem x : args)
      if (x == group_->identity()) d = std::max(d, std::abs(values_[i] - 1.0));
  }
  return d;
}

double Cochain::distance(const Cochain& other) const {
  require_same_group(*this, other);
  if (degree_ != other.degree_) throw std::invalid_argument("cochain degrees differ");
  double d = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) d = std::max(d, std::abs(values_[i] - other.values_[i]));
  return d;
}

Cochain coboundary(const Cochain& nu) {
  const auto& g = nu.group();
  const int n = nu.degree();
  std::vector<Elem> inner(static_cast<std::size_t>(n));
  return Cochain::tabulate(nu.group_ptr(), n + 1, [&](Elem q, std::span<const Elem> x) {
    // a_{x1}[nu(x2..x_{n+1})](q)
    for (int j = 0; j < n; ++j) inner[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j) + 1];
    cplx v = nu(g.multiply(g.inverse(x[0]), q), inner);
    // merged products, sign (-1)^j
    for (int j = 1; j <= n; ++j) {
      std::size_t k = 0;
      for (int i = 0; i < n + 1; ++i) {
        if (i == j - 1) {
          inner[k++] = g.multiply(x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i) + 1]);
          ++i;
        } else {
          inner[k++] = x[static_cast<std::size_t>(i)];
        }
      }
      const cplx w = nu(q, inner);
      v *= (j % 2 == 0) ? w : std::conj(w);
    }
    // last factor, sign (-1)^(n+1)
    for (int j = 0; j < n; ++j) inner[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)];
    const cplx last = nu(q, inner);
    v *= ((n + 1) % 2 == 0) ? last : std::conj(last);
    return v;
  });
}

CocycleCheck is_cocycle(const Cochain& nu, double tol) {
  const Cochain d = coboundary(nu);
  CocycleCheck r;
  for (const auto& v : d.values()) r.max_defect = std::max(r.max_defect, std::abs(v - 1.0));
  r.is_cocycle = r.max_defect < tol;
  return r;
}

namespace {

void require_cocycle(const Cochain& nu, double tol, const char* what) {
  const auto check = is_cocycle(nu, tol);
  if (!check.is_cocycle) {
    std::ostringstream msg;
    msg << what << ": input is not a cocycle (defect " << check.max_defect << ")";
    throw NotACocycle(msg.str());
  }
}

}  // namespace

Cochain trivialize(const Cochain& nu, double tol) {
  if (nu.degree() < 1) throw std::invalid_argument("trivialize needs degree >= 1");
  require_cocycle(nu, tol, "trivialize");
  const auto& g = nu.group();
  std::vector<Elem> args(static_cast<std::size_t>(nu.degree()));
  return Cochain::tabulate(nu.group_ptr(), nu.degree() - 1, [&](Elem x, std::span<const Elem> z) {
    args[0] = g.inverse(x);
    for (std::size_t j = 0; j < z.size(); ++j) args[j + 1] = z[j];
    return nu(g.identity(), args);
  });
}

Cochain gauge_between(const Cochain& beta1, const Cochain& beta2, double tol) {
  if (beta1.degree() != 1 || beta2.degree() != 1) throw std::invalid_argument("gauge_between needs 1-cochains");
  const double mismatch = coboundary(beta1).distance(coboundary(beta2));
  if (!(mismatch < tol)) {
    std::ostringstream msg;
    msg << "gauge_between: inputs trivialize different 2-cocycles (defect " << mismatch << ")";
    throw NotACocycle(msg.str());
  }
  return trivialize(beta2 * beta1.inverse(), tol);
}

Cochain pseudo_trivialize(const Cochain& gamma, double tol) {
  if (gamma.degree() != 2) throw std::invalid_argument("pseudo_trivialize needs a 2-cochain");
  require_cocycle(gamma, tol, "pseudo_trivialize");
  const auto& g = gamma.group();
  return Cochain::tabulate(gamma.group_ptr(), 1, [&](Elem q, std::span<const Elem> x) {
    return gamma.at(g.identity(), g.inverse(q), x[0]);
  });
}

Cochain cochain_from_json(const FiniteGroupPtr& group, const nlohmann::json& j) {
  try {
    const int degree = j.at("degree").get<int>();
    std::vector<cplx> values;
    for (const auto& e : j.at("values")) {
      if (!e.is_array() || e.size() != 2) throw ConfigError("cochain values are [re, im] pairs");
      values.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return Cochain(group, degree, std::move(values));
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("malformed cochain: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("malformed cochain: ") + ex.what());
  }
}

nlohmann::json cochain_to_json(const Cochain& c) {
  auto values = nlohmann::json::array();
  for (const auto& v : c.values()) values.push_back({v.real(), v.imag()});
  return {{"degree", c.degree()}, {"values", values}};
}

}  // namespace twistquant
