#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include <json.hpp>

#include "twistquant/group.hpp"
#include "twistquant/types.hpp"

namespace twistquant {

// Unit-modulus function G^n -> (G -> T), stored densely over (q, x1..xn) with
// q varying slowest. The G-module action is left translation: (a_x f)(q) = f(x^-1 q).
class Cochain {
 public:
  // Checks size and unit modulus (1e-12).
  Cochain(FiniteGroupPtr group, int degree, std::vector<cplx> values);

  static Cochain one(FiniteGroupPtr group, int degree);
  // Random phases; for degree >= 1 and normalized, value 1 whenever some x_j = e.
  static Cochain random(FiniteGroupPtr group, int degree, Rng& rng, bool normalized = true);
  // Evaluates f(q, {x1..xn}) at every argument tuple.
  template <class F>
  static Cochain tabulate(FiniteGroupPtr group, int degree, F&& f);

  int degree() const { return degree_; }
  const FiniteGroup& group() const { return *group_; }
  const FiniteGroupPtr& group_ptr() const { return group_; }
  const std::vector<cplx>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(Elem q, std::span<const Elem> args) const;
  cplx operator()(Elem q, std::span<const Elem> args) const { return values_[index(q, args)]; }
  cplx operator()(Elem q, std::initializer_list<Elem> args) const {
    return (*this)(q, std::span<const Elem>(args.begin(), args.size()));
  }
  cplx at(Elem q) const { return values_[q]; }
  cplx at(Elem q, Elem x) const { return values_[q * n_ + x]; }
  cplx at(Elem q, Elem x, Elem y) const { return values_[(q * n_ + x) * n_ + y]; }

  // Decodes a flat index into (q, x1..xn).
  void decode(std::size_t flat, Elem& q, std::vector<Elem>& args) const;

  Cochain operator*(const Cochain& other) const;
  Cochain inverse() const;
  // Largest |value - 1| over tuples with some x_j = e.
  double normalization_defect() const;
  double distance(const Cochain& other) const;

 private:
  FiniteGroupPtr group_;
  int degree_;
  std::size_t n_;
  std::vector<cplx> values_;
};

Cochain coboundary(const Cochain& nu);

struct CocycleCheck {
  bool is_cocycle = false;
  double max_defect = 0.0;
};

CocycleCheck is_cocycle(const Cochain& nu, double tol = 1e-10);

// nu^{n-1}(z1..z_{n-1})(x) = nu^n(x^-1, z1..z_{n-1})(e); throws NotACocycle.
Cochain trivialize(const Cochain& nu, double tol = 1e-10);

// a with beta2 = delta0(a) beta1, normalized by a(q) = (beta2/beta1)(e; q^-1).
// Throws NotACocycle when delta1(beta1) and delta1(beta2) differ.
Cochain gauge_between(const Cochain& beta1, const Cochain& beta2, double tol = 1e-10);

// beta_gamma(q; x) = gamma(e; q^-1, x); throws NotACocycle.
Cochain pseudo_trivialize(const Cochain& gamma, double tol = 1e-10);

Cochain cochain_from_json(const FiniteGroupPtr& group, const nlohmann::json& j);
nlohmann::json cochain_to_json(const Cochain& c);

template <class F>
Cochain Cochain::tabulate(FiniteGroupPtr group, int degree, F&& f) {
  const Cochain shape = one(group, degree);
  std::vector<cplx> values(shape.size());
  std::vector<Elem> args;
  Elem q = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    shape.decode(i, q, args);
    values[i] = f(q, std::span<const Elem>(args));
  }
  return Cochain(std::move(group), degree, std::move(values));
}

}  // namespace twistquant
