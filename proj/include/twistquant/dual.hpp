#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "twistquant/group.hpp"
#include "twistquant/types.hpp"

namespace twistquant {

// Irreducible unitary representation, one d x d matrix per group element.
struct Irrep {
  std::string label;
  int dim = 1;
  std::vector<CMatrix> matrices;

  const CMatrix& operator()(Elem x) const { return matrices[x]; }
};

// One d_xi x d_xi block per irrep.
using OperatorField = std::vector<CMatrix>;

class UnitaryDual {
 public:
  // Checks shapes only; use dual_selfcheck for the representation-theoretic data.
  UnitaryDual(FiniteGroupPtr group, std::vector<Irrep> irreps);

  const FiniteGroup& group() const { return *group_; }
  const FiniteGroupPtr& group_ptr() const { return group_; }
  std::size_t size() const { return irreps_.size(); }
  const Irrep& irrep(std::size_t i) const { return irreps_[i]; }
  const std::vector<Irrep>& irreps() const { return irreps_; }
  // Plancherel weight d_xi / |G|.
  double weight(std::size_t i) const { return weights_[i]; }
  std::size_t trivial_index() const;

  OperatorField fourier(std::span<const cplx> u) const;
  CVector inverse_fourier(const OperatorField& phi) const;

  OperatorField zero_field() const;
  OperatorField identity_field() const;
  // sum_xi weight_xi Tr[a(xi) b(xi)^*]
  cplx inner(const OperatorField& a, const OperatorField& b) const;
  void check_field(const OperatorField& phi) const;

 private:
  FiniteGroupPtr group_;
  std::vector<Irrep> irreps_;
  std::vector<double> weights_;
};

using DualPtr = std::shared_ptr<const UnitaryDual>;

struct DualDiagnostics {
  double unitarity = 0.0;
  double multiplicativity = 0.0;
  double schur_orthogonality = 0.0;
  double inequivalence = 0.0;  // 0 when pairwise inequivalent, else 1
  double completeness = 0.0;   // |sum d^2 - |G||
  double max_defect() const;
  bool accepted(double tol = 1e-10) const { return max_defect() < tol; }
};

DualDiagnostics dual_selfcheck(const UnitaryDual& dual);

struct FiniteModel {
  FiniteGroupPtr group;
  DualPtr dual;
};

// Shipped finite groups with their standard duals: "trivial", "Z<n>", "S3",
// "D4", "Q8".
FiniteModel finite_model(std::string_view name);
bool is_finite_group_name(std::string_view name);
std::vector<std::string> shipped_finite_groups();

DualPtr dual_from_json(const FiniteGroupPtr& group, const nlohmann::json& j);
nlohmann::json dual_to_json(const UnitaryDual& dual);

}  // namespace twistquant
