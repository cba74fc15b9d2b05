#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "twistquant/types.hpp"

namespace twistquant {

using Elem = std::size_t;

// Finite group given by its Cayley table. Haar measure is counting measure.
class FiniteGroup {
 public:
  // Validates closure, associativity, identity and inverses.
  FiniteGroup(std::string name, std::vector<std::vector<Elem>> cayley,
              std::vector<std::string> labels = {});

  const std::string& name() const { return name_; }
  std::size_t order() const { return order_; }
  Elem identity() const { return identity_; }
  double haar_weight() const { return 1.0; }

  Elem multiply(Elem x, Elem y) const { return table_[x * order_ + y]; }
  Elem inverse(Elem x) const { return inverse_[x]; }
  Elem power(Elem x, long k) const;
  std::size_t element_order(Elem x) const;
  std::size_t exponent() const;

  const std::string& label(Elem x) const { return labels_[x]; }
  std::optional<Elem> find(std::string_view label) const;
  bool contains(Elem x) const { return x < order_; }
  std::vector<std::vector<Elem>> cayley() const;

 private:
  std::string name_;
  std::size_t order_;
  std::vector<Elem> table_;
  std::vector<Elem> inverse_;
  std::vector<std::string> labels_;
  Elem identity_ = 0;
};

// Connected simply connected nilpotent Lie group in exponential coordinates of
// the first kind. Points of the group and of the algebra share coordinates.
class NilpotentLieGroup {
 public:
  struct BracketEntry {
    int i, j, k;
    double c;  // [e_i, e_j] has coefficient c on e_k
  };

  // Missing antisymmetric partners are filled in; Jacobi and nilpotency at
  // `step` are checked. Steps above 4 are rejected (BCH is truncated there).
  NilpotentLieGroup(std::string name, int dim, const std::vector<BracketEntry>& bracket, int step);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  int step() const { return step_; }
  double structure_constant(int i, int j, int k) const { return c_[(i * dim_ + j) * dim_ + k]; }
  bool is_abelian() const { return abelian_; }

  RVector bracket(const RVector& x, const RVector& y) const;
  // log(exp X exp Y), exact for the declared step.
  RVector bch(const RVector& x, const RVector& y) const;
  RVector multiply(const RVector& x, const RVector& y) const { return bch(x, y); }
  RVector inverse(const RVector& x) const { return -x; }
  RVector identity() const { return RVector::Zero(dim_); }
  RVector exp(const RVector& algebra) const { return algebra; }
  RVector log(const RVector& point) const { return point; }
  bool contains(const RVector& x) const;

  double jacobi_defect() const;
  double antisymmetry_defect() const;

 private:
  std::string name_;
  int dim_;
  int step_;
  bool abelian_ = true;
  std::vector<double> c_;
};

using FiniteGroupPtr = std::shared_ptr<const FiniteGroup>;
using LieGroupPtr = std::shared_ptr<const NilpotentLieGroup>;

// Uniform handle on either backend.
using GroupModel = std::variant<FiniteGroupPtr, LieGroupPtr>;

struct GroupElement {
  std::variant<Elem, RVector> value;

  static GroupElement finite(Elem x) { return {x}; }
  static GroupElement lie(RVector x) { return {std::move(x)}; }
  bool is_finite() const { return std::holds_alternative<Elem>(value); }
  Elem index() const;
  const RVector& coords() const;
};

void check_member(const GroupModel& g, const GroupElement& x);
GroupElement multiply(const GroupModel& g, const GroupElement& x, const GroupElement& y);
GroupElement inverse(const GroupModel& g, const GroupElement& x);
GroupElement identity(const GroupModel& g);

// Ordering map on a finite group, stored as a table.
class FiniteTau {
 public:
  FiniteTau(FiniteGroupPtr group, std::vector<Elem> table, std::string name = "table");

  static FiniteTau trivial(FiniteGroupPtr group);
  static FiniteTau identity(FiniteGroupPtr group);
  static FiniteTau constant(FiniteGroupPtr group, Elem x0);
  static FiniteTau power(FiniteGroupPtr group, long k);

  Elem operator()(Elem x) const { return table_[x]; }
  const std::string& name() const { return name_; }
  const FiniteGroup& group() const { return *group_; }
  const FiniteGroupPtr& group_ptr() const { return group_; }
  const std::vector<Elem>& table() const { return table_; }
  bool fixes_identity() const;
  // tau(x) = x tau(x^-1) for all x.
  bool is_symmetric() const;

 private:
  FiniteGroupPtr group_;
  std::vector<Elem> table_;
  std::string name_;
};

// Ordering map on a Lie group (or any coordinate phase space).
class LieTau {
 public:
  enum class Kind { Trivial, Identity, Constant, Half, Custom };

  static LieTau trivial(int dim);
  static LieTau identity(int dim);
  static LieTau constant(RVector x0);
  static LieTau half(int dim);
  static LieTau custom(std::string name, int dim, std::function<RVector(const RVector&)> map);

  RVector operator()(const RVector& x) const;
  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  int dim() const { return dim_; }

 private:
  LieTau(Kind kind, std::string name, int dim, std::function<RVector(const RVector&)> map)
      : kind_(kind), name_(std::move(name)), dim_(dim), map_(std::move(map)) {}
  Kind kind_;
  std::string name_;
  int dim_;
  std::function<RVector(const RVector&)> map_;
};

// tau(x) = exp(log(x)/2), the symmetric choice on nilpotent Lie groups.
LieTau symmetric_tau(const NilpotentLieGroup& g);

struct SymmetricSearch {
  std::optional<FiniteTau> witness;
  std::size_t power_candidates = 0;  // power maps x -> x^k tried first
  bool exhaustive = false;           // full backtracking search was run
};

// Looks for tau with tau(x) = x tau(x^-1): power maps first, then exhaustive
// backtracking. Throws std::invalid_argument when order exceeds max_order.
SymmetricSearch symmetric_search(const FiniteGroupPtr& g, std::size_t max_order = 12);

// Number of symmetric maps, by exhaustive enumeration.
std::size_t count_symmetric_maps(const FiniteGroupPtr& g, std::size_t max_order = 12);

// Catalog. Finite: "Z<n>", "trivial", "S3", "D4", "Q8". Lie: "R1".."R3", "H1".
LieGroupPtr euclidean_group(int dim);
LieGroupPtr heisenberg_group();
LieGroupPtr lie_group(std::string_view name);
bool is_lie_group_name(std::string_view name);

GroupModel group_from_json(const nlohmann::json& j);
nlohmann::json group_to_json(const GroupModel& g);

}  // namespace twistquant
