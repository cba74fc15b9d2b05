#include "twistquant/phase_space.hpp"

#include <cmath>
#include <stdexcept>

#include "twistquant/errors.hpp"

namespace twistquant {

namespace {

constexpr double kLatticeTol = 1e-9;

// Applies a per-axis N x N matrix along every axis of a tensor of shape N^dim.
CVector apply_axes(const CVector& data, int dim, int n, const CMatrix& axis_matrix) {
  CVector cur = data;
  CVector next(cur.size());
  std::size_t stride = 1;
  for (int a = dim - 1; a >= 0; --a) {
    const std::size_t block = stride * static_cast<std::size_t>(n);
    const std::size_t outer = static_cast<std::size_t>(cur.size()) / block;
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t s = 0; s < stride; ++s) {
        const std::size_t base = o * block + s;
        for (int r = 0; r < n; ++r) {
          cplx acc = 0.0;
          for (int c = 0; c < n; ++c) acc += axis_matrix(r, c) * cur(static_cast<Eigen::Index>(base + c * stride));
          next(static_cast<Eigen::Index>(base + r * stride)) = acc;
        }
      }
    cur.swap(next);
    stride = block;
  }
  return cur;
}

void require_size(const PhaseSpace& space, const CVector& u) {
  if (static_cast<std::size_t>(u.size()) != space.size()) throw std::invalid_argument("grid function has the wrong size");
}

}  // namespace

Grid::Grid(double half_width_, int points_) : half_width(half_width_), points(points_) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw ConfigError("grid half-width must be positive");
  if (points < 2 || points % 2 != 0) throw ConfigError("grid point count must be even and at least 2");
}

std::size_t PhaseSpace::size() const {
  std::size_t s = 1;
  for (int a = 0; a < dim(); ++a) s *= static_cast<std::size_t>(axis_points());
  return s;
}

std::vector<int> PhaseSpace::axis_indices(std::size_t i) const {
  const int n = axis_points();
  std::vector<int> idx(static_cast<std::size_t>(dim()));
  for (int a = dim() - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = static_cast<int>(i % static_cast<std::size_t>(n));
    i /= static_cast<std::size_t>(n);
  }
  return idx;
}

RVector PhaseSpace::point(std::size_t i) const {
  const auto idx = axis_indices(i);
  RVector p(dim());
  for (int a = 0; a < dim(); ++a) p(a) = axis_coordinate(idx[static_cast<std::size_t>(a)]);
  return p;
}

RVector PhaseSpace::dual_point(std::size_t m) const {
  const auto idx = axis_indices(m);
  RVector p(dim());
  for (int a = 0; a < dim(); ++a) p(a) = axis_dual(idx[static_cast<std::size_t>(a)]);
  return p;
}

double PhaseSpace::position_weight() const { return std::pow(axis_weight(), dim()); }
double PhaseSpace::dual_weight() const { return std::pow(axis_dual_weight(), dim()); }

std::optional<std::size_t> PhaseSpace::locate(const RVector& x) const {
  if (x.size() != dim()) return std::nullopt;
  const auto idx = lattice_indices(x);
  if (!idx) return std::nullopt;
  std::size_t flat = 0;
  for (long k : *idx) {
    if (k < 0 || k >= axis_points()) return std::nullopt;
    flat = flat * static_cast<std::size_t>(axis_points()) + static_cast<std::size_t>(k);
  }
  return flat;
}

bool PhaseSpace::on_boundary(std::size_t i) const {
  if (periodic()) return false;
  for (int k : axis_indices(i))
    if (k == 0 || k == axis_points() - 1) return true;
  return false;
}

bool PhaseSpace::in_interior(std::size_t i, double fraction) const {
  if (periodic()) return true;
  const double limit = fraction * 0.5 * axis_step() * axis_points() + 1e-12;
  const RVector p = point(i);
  return p.cwiseAbs().maxCoeff() <= limit;
}

LatticePhaseSpace::LatticePhaseSpace(LieGroupPtr group, Grid grid) : group_(std::move(group)), grid_(grid) {
  if (!group_) throw std::invalid_argument("lattice needs a group");
}

std::optional<std::vector<long>> LatticePhaseSpace::lattice_indices(const RVector& x) const {
  std::vector<long> idx(static_cast<std::size_t>(dim()));
  const double h = grid_.spacing();
  for (int a = 0; a < dim(); ++a) {
    const double k = x(a) / h + grid_.points / 2;
    const double r = std::round(k);
    if (!std::isfinite(k) || std::abs(k - r) > kLatticeTol) return std::nullopt;
    idx[static_cast<std::size_t>(a)] = static_cast<long>(r);
  }
  return idx;
}

CyclicPhaseSpace::CyclicPhaseSpace(int order) : order_(order) {
  if (order < 1) throw ConfigError("cyclic order must be positive");
}

RVector CyclicPhaseSpace::multiply(const RVector& x, const RVector& y) const {
  RVector out(1);
  out(0) = std::fmod(x(0) + y(0), static_cast<double>(order_));
  return out;
}

RVector CyclicPhaseSpace::inverse(const RVector& x) const {
  RVector out(1);
  out(0) = std::fmod(order_ - std::fmod(x(0), static_cast<double>(order_)), static_cast<double>(order_));
  return out;
}

std::optional<std::vector<long>> CyclicPhaseSpace::lattice_indices(const RVector& x) const {
  const double r = std::round(x(0));
  if (!std::isfinite(x(0)) || std::abs(x(0) - r) > kLatticeTol) return std::nullopt;
  long k = static_cast<long>(r) % order_;
  if (k < 0) k += order_;
  return std::vector<long>{k};
}

CVector scalar_fourier(const PhaseSpace& space, const CVector& u) {
  require_size(space, u);
  const int n = space.axis_points();
  CMatrix f(n, n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      f(m, k) = space.axis_weight() * unit_phase(-space.axis_coordinate(k) * space.axis_dual(m));
  return apply_axes(u, space.dim(), n, f);
}

CVector scalar_inverse_fourier(const PhaseSpace& space, const CVector& u_hat) {
  require_size(space, u_hat);
  const int n = space.axis_points();
  CMatrix f(n, n);
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m)
      f(k, m) = space.axis_dual_weight() * unit_phase(space.axis_coordinate(k) * space.axis_dual(m));
  return apply_axes(u_hat, space.dim(), n, f);
}

double position_norm2(const PhaseSpace& space, const CVector& u) { return u.squaredNorm() * space.position_weight(); }
double dual_norm2(const PhaseSpace& space, const CVector& u_hat) { return u_hat.squaredNorm() * space.dual_weight(); }

}  // namespace twistquant
