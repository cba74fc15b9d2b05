#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "twistquant/group.hpp"
#include "twistquant/types.hpp"

namespace twistquant {

// Uniform lattice per axis: X_k = (k - N/2) h with h = 2L/N, k = 0..N-1.
// Dual lattice: (m - N/2) pi / L.
struct Grid {
  double half_width;
  int points;

  Grid(double half_width, int points);
  double spacing() const { return 2.0 * half_width / points; }
  double coordinate(int k) const { return (k - points / 2) * spacing(); }
  double dual_coordinate(int m) const { return (m - points / 2) * kPi / half_width; }
};

// Discretized position space with a group law and a dual lattice, both a
// tensor product of identical axes. Point index i has axis 0 varying slowest.
class PhaseSpace {
 public:
  virtual ~PhaseSpace() = default;

  virtual int dim() const = 0;
  virtual int axis_points() const = 0;
  virtual double axis_coordinate(int k) const = 0;
  virtual double axis_dual(int m) const = 0;
  virtual double axis_weight() const = 0;       // position cell per axis
  virtual double axis_dual_weight() const = 0;  // dual cell per axis, including the 1/(2 pi) convention
  // Distance between consecutive axis coordinates.
  virtual double axis_step() const = 0;
  virtual RVector multiply(const RVector& x, const RVector& y) const = 0;
  virtual RVector inverse(const RVector& x) const = 0;
  // Integer axis indices of x if it lies on the (unbounded) lattice.
  virtual std::optional<std::vector<long>> lattice_indices(const RVector& x) const = 0;
  // Periodic spaces have no boundary and every lattice point is in range.
  virtual bool periodic() const = 0;
  virtual bool abelian() const = 0;

  std::size_t size() const;
  RVector point(std::size_t i) const;
  RVector dual_point(std::size_t m) const;
  std::vector<int> axis_indices(std::size_t i) const;
  double position_weight() const;
  double dual_weight() const;
  // Index of x when it is a grid point.
  std::optional<std::size_t> locate(const RVector& x) const;
  // Some axis index is 0 or N-1 (never for periodic spaces).
  bool on_boundary(std::size_t i) const;
  // Every axis coordinate within the given fraction of the half width.
  bool in_interior(std::size_t i, double fraction) const;
  RVector identity() const { return RVector::Zero(dim()); }
};

using PhaseSpacePtr = std::shared_ptr<const PhaseSpace>;

// Truncated lattice on a nilpotent Lie group in exponential coordinates.
class LatticePhaseSpace : public PhaseSpace {
 public:
  LatticePhaseSpace(LieGroupPtr group, Grid grid);

  const NilpotentLieGroup& group() const { return *group_; }
  const LieGroupPtr& group_ptr() const { return group_; }
  const Grid& grid() const { return grid_; }

  int dim() const override { return group_->dim(); }
  int axis_points() const override { return grid_.points; }
  double axis_coordinate(int k) const override { return grid_.coordinate(k); }
  double axis_dual(int m) const override { return grid_.dual_coordinate(m); }
  double axis_weight() const override { return grid_.spacing(); }
  double axis_dual_weight() const override { return 1.0 / (2.0 * grid_.half_width); }
  double axis_step() const override { return grid_.spacing(); }
  RVector multiply(const RVector& x, const RVector& y) const override { return group_->multiply(x, y); }
  RVector inverse(const RVector& x) const override { return group_->inverse(x); }
  std::optional<std::vector<long>> lattice_indices(const RVector& x) const override;
  bool periodic() const override { return false; }
  bool abelian() const override { return group_->is_abelian(); }

 private:
  LieGroupPtr group_;
  Grid grid_;
};

// Z_N with coordinates 0..N-1 and dual characters 2 pi k / N.
class CyclicPhaseSpace : public PhaseSpace {
 public:
  explicit CyclicPhaseSpace(int order);

  int dim() const override { return 1; }
  int axis_points() const override { return order_; }
  double axis_coordinate(int k) const override { return k; }
  double axis_dual(int m) const override { return 2.0 * kPi * m / order_; }
  double axis_weight() const override { return 1.0; }
  double axis_dual_weight() const override { return 1.0 / order_; }
  double axis_step() const override { return 1.0; }
  RVector multiply(const RVector& x, const RVector& y) const override;
  RVector inverse(const RVector& x) const override;
  std::optional<std::vector<long>> lattice_indices(const RVector& x) const override;
  bool periodic() const override { return true; }
  bool abelian() const override { return true; }

 private:
  int order_;
};

// (F u)(chi_m) = sum_i w e^{-i <X_i | chi_m>} u(X_i), applied axis by axis.
CVector scalar_fourier(const PhaseSpace& space, const CVector& u);
// u(X_i) = sum_m w' e^{i <X_i | chi_m>} (F u)(chi_m)
CVector scalar_inverse_fourier(const PhaseSpace& space, const CVector& u_hat);
// sum |u|^2 w and its dual analogue.
double position_norm2(const PhaseSpace& space, const CVector& u);
double dual_norm2(const PhaseSpace& space, const CVector& u_hat);

}  // namespace twistquant
