#include "twistquant/scalar_calculus.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "twistquant/errors.hpp"
#include "twistquant/parallel.hpp"

namespace twistquant {

namespace {

constexpr double kOffsetTol = 1e-9;

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

// e^{i z chi_m} for every dual axis index m.
std::vector<cplx> axis_phases(const PhaseSpace& space, double z) {
  std::vector<cplx> out(static_cast<std::size_t>(space.axis_points()));
  for (int m = 0; m < space.axis_points(); ++m) out[static_cast<std::size_t>(m)] = unit_phase(z * space.axis_dual(m));
  return out;
}

}  // namespace

Trivialization trivial_trivialization() {
  return [](const RVector&, const RVector&) { return cplx(1.0, 0.0); };
}

Trivialization magnetic_beta(LieGroupPtr group, OneForm potential, QuadratureRule rule) {
  if (!group) throw std::invalid_argument("magnetic trivialization needs a group");
  return [group = std::move(group), potential = std::move(potential), rule](const RVector& q, const RVector& x) {
    return magnetic_trivialization(*group, potential, q, x, rule);
  };
}

ScalarSymbol::ScalarSymbol(Function f) : form_(std::move(f)) {
  if (!std::get<Function>(form_)) throw std::invalid_argument("empty symbol");
}

ScalarSymbol ScalarSymbol::separable(PositionFactor position, MomentumFactor momentum) {
  if (!position || !momentum) throw std::invalid_argument("empty symbol factor");
  return ScalarSymbol(FormTag{}, std::variant<Function, Separable, Sampled>(Separable{std::move(position), std::move(momentum)}));
}

ScalarSymbol ScalarSymbol::sampled(PhaseSpacePtr space, CMatrix values) {
  if (!space) throw std::invalid_argument("sampled symbol needs a grid");
  const auto n = ix(space->size());
  if (values.rows() != n || values.cols() != n) throw std::invalid_argument("sampled symbol must be grid x dual grid");
  if (!values.allFinite()) throw std::invalid_argument("sampled symbol values must be finite");
  return ScalarSymbol(FormTag{}, std::variant<Function, Separable, Sampled>(Sampled{std::move(space), std::move(values)}));
}

ScalarSymbol ScalarSymbol::gaussian() {
  return separable([](const RVector& p) { return cplx(std::exp(-0.5 * p.squaredNorm()), 0.0); },
                   [](double chi) { return cplx(std::exp(-0.5 * chi * chi), 0.0); });
}

cplx ScalarSymbol::at(const PhaseSpace& space, const RVector& p, std::size_t m) const {
  if (const auto* f = std::get_if<Function>(&form_)) return (*f)(p, space.dual_point(m));
  if (const auto* s = std::get_if<Separable>(&form_)) {
    cplx v = s->position(p);
    for (int k : space.axis_indices(m)) v *= s->momentum(space.axis_dual(k));
    return v;
  }
  const auto& smp = std::get<Sampled>(form_);
  const auto row = smp.space->locate(p);
  if (!row) throw OffLattice("sampled symbol evaluated off the grid");
  return smp.values(ix(*row), ix(m));
}

CMatrix ScalarSymbol::sample(const PhaseSpace& space) const {
  if (const auto* smp = std::get_if<Sampled>(&form_)) {
    if (smp->space->size() != space.size()) throw BackendMismatch("sampled symbol lives on another grid");
    return smp->values;
  }
  const auto n = space.size();
  CMatrix out(ix(n), ix(n));
  parallel_for(n, [&](std::size_t i) {
    const RVector p = space.point(i);
    for (std::size_t m = 0; m < n; ++m) out(ix(i), ix(m)) = at(space, p, m);
  });
  return out;
}

const CMatrix& ScalarSymbol::values() const {
  const auto* smp = std::get_if<Sampled>(&form_);
  if (!smp) throw std::logic_error("symbol is not sampled");
  return smp->values;
}

cplx ScalarSymbol::position_factor(const RVector& p) const {
  const auto* s = std::get_if<Separable>(&form_);
  if (!s) throw std::logic_error("symbol is not separable");
  return s->position(p);
}

cplx ScalarSymbol::momentum_factor(double chi) const {
  const auto* s = std::get_if<Separable>(&form_);
  if (!s) throw std::logic_error("symbol is not separable");
  return s->momentum(chi);
}

double symbol_distance(const ScalarSymbol& a, const ScalarSymbol& b, const PhaseSpace& space) {
  return max_abs_diff(a.sample(space), b.sample(space));
}

ScalarQuantization::ScalarQuantization(PhaseSpacePtr space, Trivialization beta, LieTau tau)
    : space_(std::move(space)), beta_(std::move(beta)), tau_(std::move(tau)) {
  if (!space_) throw std::invalid_argument("quantization needs a grid");
  if (!beta_) throw std::invalid_argument("quantization needs a trivialization");
}

ScalarQuantization::Kernel::Kernel(const ScalarQuantization& quant, const ScalarSymbol& symbol)
    : quant_(quant), symbol_(symbol) {
  const auto& space = quant_.space();
  points_.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) points_.push_back(space.point(i));
  if (symbol_.is_separable()) {
    const int n = space.axis_points();
    offset_origin_ = n;
    offset_table_.resize(static_cast<std::size_t>(2 * n + 1));
    for (long k = -n; k <= n; ++k) {
      const auto phases = axis_phases(space, static_cast<double>(k) * space.axis_step());
      cplx s = 0.0;
      for (int m = 0; m < n; ++m) s += phases[static_cast<std::size_t>(m)] * symbol_.momentum_factor(space.axis_dual(m));
      offset_table_[static_cast<std::size_t>(k + offset_origin_)] = space.axis_dual_weight() * s;
    }
  }
}

cplx ScalarQuantization::Kernel::axis_factor(int axis_points, double z) const {
  const auto& space = quant_.space();
  const double k = z / space.axis_step();
  const double r = std::round(k);
  if (std::abs(k - r) < kOffsetTol && std::abs(r) <= axis_points)
    return offset_table_[static_cast<std::size_t>(static_cast<long>(r) + offset_origin_)];
  cplx s = 0.0;
  for (int m = 0; m < axis_points; ++m) s += unit_phase(z * space.axis_dual(m)) * symbol_.momentum_factor(space.axis_dual(m));
  return space.axis_dual_weight() * s;
}

cplx ScalarQuantization::Kernel::operator()(const RVector& x, const RVector& y) const {
  const auto& space = quant_.space();
  const RVector z = space.multiply(x, space.inverse(y));
  const RVector p = space.multiply(space.inverse(quant_.tau()(z)), x);
  const int n = space.axis_points();
  cplx value;
  if (symbol_.is_separable()) {
    value = symbol_.position_factor(p);
    for (int a = 0; a < space.dim(); ++a) value *= axis_factor(n, z(a));
  } else {
    std::vector<std::vector<cplx>> phases;
    for (int a = 0; a < space.dim(); ++a) phases.push_back(axis_phases(space, z(a)));
    std::optional<std::size_t> row;
    if (symbol_.is_sampled()) {
      row = space.locate(p);
      if (!row) throw OffLattice("kernel needs the sampled symbol off the grid");
    }
    cplx s = 0.0;
    for (std::size_t m = 0; m < space.size(); ++m) {
      cplx phase = 1.0;
      std::size_t rest = m;
      for (int a = space.dim() - 1; a >= 0; --a) {
        phase *= phases[static_cast<std::size_t>(a)][rest % static_cast<std::size_t>(n)];
        rest /= static_cast<std::size_t>(n);
      }
      s += phase * (row ? symbol_.values()(ix(*row), ix(m)) : symbol_.at(space, p, m));
    }
    value = space.dual_weight() * s;
  }
  return quant_.beta()(x, z) * value;
}

cplx ScalarQuantization::Kernel::entry(std::size_t i, std::size_t j) const { return (*this)(points_[i], points_[j]); }

CMatrix ScalarQuantization::kernel(const ScalarSymbol& s) const {
  const auto n = space_->size();
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  return kernel_block(s, all, all);
}

CMatrix ScalarQuantization::kernel_block(const ScalarSymbol& s, const std::vector<std::size_t>& rows,
                                         const std::vector<std::size_t>& cols) const {
  const Kernel k(*this, s);
  CMatrix out(ix(rows.size()), ix(cols.size()));
  parallel_for(rows.size(), [&](std::size_t r) {
    for (std::size_t c = 0; c < cols.size(); ++c) out(ix(r), ix(c)) = k.entry(rows[r], cols[c]);
  });
  return out;
}

CMatrix ScalarQuantization::op_matrix(const ScalarSymbol& s) const { return kernel(s) * space_->position_weight(); }

bool ScalarQuantization::invertible() const {
  if (space_->periodic()) return true;
  const auto kind = tau_.kind();
  return space_->abelian() && (kind == LieTau::Kind::Trivial || kind == LieTau::Kind::Identity);
}

ScalarSymbol ScalarQuantization::symbol_of_kernel(const CMatrix& k) const {
  if (!invertible())
    throw std::domain_error("kernel inversion needs a periodic grid or an abelian lattice with tau trivial or identity");
  const auto& space = *space_;
  const auto n = space.size();
  if (k.rows() != ix(n) || k.cols() != ix(n)) throw std::invalid_argument("kernel must be grid x grid");
  std::vector<RVector> points;
  for (std::size_t i = 0; i < n; ++i) points.push_back(space.point(i));
  std::vector<RVector> duals;
  for (std::size_t m = 0; m < n; ++m) duals.push_back(space.dual_point(m));
  const auto kind = tau_.kind();
  CMatrix values = CMatrix::Zero(ix(n), ix(n));
  parallel_for(n, [&](std::size_t i) {
    const RVector& p = points[i];
    for (std::size_t f = 0; f < n; ++f) {
      RVector x, y, z;
      if (space.periodic()) {
        z = points[f];
        x = space.multiply(tau_(z), p);
        y = space.multiply(space.inverse(z), x);
      } else if (kind == LieTau::Kind::Trivial) {
        x = p;
        y = points[f];
        z = space.multiply(x, space.inverse(y));
      } else {
        x = points[f];
        y = p;
        z = space.multiply(x, space.inverse(y));
      }
      const auto xi = space.locate(x);
      const auto yi = space.locate(y);
      if (!xi || !yi) throw OffLattice("kernel fiber left the grid");
      const cplx term = k(ix(*xi), ix(*yi)) / beta_(x, z) * space.position_weight();
      for (std::size_t m = 0; m < n; ++m) values(ix(i), ix(m)) += unit_phase(-z.dot(duals[m])) * term;
    }
  });
  return ScalarSymbol::sampled(space_, std::move(values));
}

ScalarSymbol ScalarQuantization::compose(const ScalarSymbol& r, const ScalarSymbol& s) const {
  const CMatrix kr = kernel(r);
  const CMatrix ks = kernel(s);
  return symbol_of_kernel(kr * ks * space_->position_weight());
}

ScalarSymbol ScalarQuantization::involution(const ScalarSymbol& s) const {
  return symbol_of_kernel(kernel(s).adjoint());
}

WeylMatrix weyl_matrix(const ScalarQuantization& quant, const RVector& x, const RVector& chi) {
  const auto& space = quant.space();
  const auto n = space.size();
  if (x.size() != space.dim() || chi.size() != space.dim()) throw std::invalid_argument("Weyl arguments have the wrong dimension");
  WeylMatrix w{CMatrix::Zero(ix(n), ix(n)), std::vector<bool>(n, false)};
  const RVector xinv = space.inverse(x);
  const RVector tinv = space.inverse(quant.tau()(x));
  for (std::size_t i = 0; i < n; ++i) {
    const RVector q = space.point(i);
    const RVector src = space.multiply(xinv, q);
    if (!space.lattice_indices(src)) throw OffLattice("translation does not preserve the lattice");
    const auto j = space.locate(src);
    if (!j) {
      w.truncated[i] = true;
      continue;
    }
    w.matrix(ix(i), ix(*j)) = quant.beta()(q, x) * unit_phase(space.multiply(tinv, q).dot(chi));
  }
  return w;
}

WeylMatrix translation_matrix(const ScalarQuantization& quant, const RVector& x) {
  return weyl_matrix(quant, x, RVector::Zero(quant.space().dim()));
}

CMatrix modulation_matrix(const PhaseSpace& space, const RVector& chi) {
  CVector d(ix(space.size()));
  for (std::size_t i = 0; i < space.size(); ++i) d(ix(i)) = unit_phase(space.point(i).dot(chi));
  return d.asDiagonal();
}

CVector commutation_phase(const PhaseSpace& space, const RVector& x, const RVector& chi) {
  CVector d(ix(space.size()));
  const RVector xinv = space.inverse(x);
  for (std::size_t i = 0; i < space.size(); ++i) {
    const RVector q = space.point(i);
    d(ix(i)) = unit_phase((space.multiply(xinv, q) - q).dot(chi));
  }
  return d;
}

GridFunction weyl_apply(const ScalarQuantization& quant, const RVector& x, const RVector& chi, GridFunction u) {
  const auto& space = quant.space();
  const RVector xinv = space.inverse(x);
  const RVector tinv = space.inverse(quant.tau()(x));
  return [quant, x, chi, xinv, tinv, u = std::move(u)](const RVector& q) {
    const auto& sp = quant.space();
    return quant.beta()(q, x) * unit_phase(sp.multiply(tinv, q).dot(chi)) * u(sp.multiply(xinv, q));
  };
}

double boundary_mass(const PhaseSpace& space, const ScalarSymbol& s) {
  const auto n = space.size();
  double edge = 0.0;
  double total = 0.0;
  if (s.is_separable()) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v = std::norm(s.position_factor(space.point(i)));
      total += v;
      if (space.on_boundary(i)) edge += v;
    }
    return total > 0.0 ? edge / total : 0.0;
  }
  // Strided over the dual grid so that at most ~4M samples are taken.
  const std::size_t budget = std::size_t{1} << 22;
  const std::size_t stride = std::max<std::size_t>(1, n * n / budget);
  for (std::size_t i = 0; i < n; ++i) {
    const RVector p = space.point(i);
    double row = 0.0;
    for (std::size_t m = 0; m < n; m += stride) row += std::norm(s.at(space, p, m));
    total += row;
    if (space.on_boundary(i)) edge += row;
  }
  return total > 0.0 ? edge / total : 0.0;
}

ScalarQuantization magnetic_quantization(std::shared_ptr<const LatticePhaseSpace> space, OneForm potential,
                                         QuadratureRule rule) {
  if (!space) throw std::invalid_argument("magnetic quantization needs a grid");
  auto beta = potential ? magnetic_beta(space->group_ptr(), std::move(potential), rule) : trivial_trivialization();
  auto tau = symmetric_tau(space->group());
  return ScalarQuantization(std::move(space), std::move(beta), std::move(tau));
}

CMatrix magnetic_op(std::shared_ptr<const LatticePhaseSpace> space, OneForm potential, const ScalarSymbol& s,
                    QuadratureRule rule) {
  constexpr double kLeakThreshold = 1e-6;
  const double leak = boundary_mass(*space, s);
  if (leak > kLeakThreshold)
    std::clog << "warning: symbol carries " << leak << " of its mass on the grid boundary\n";
  return magnetic_quantization(std::move(space), std::move(potential), rule).op_matrix(s);
}

double gaussian_weyl_kernel(const RVector& x, const RVector& y) {
  const double n = static_cast<double>(x.size());
  return std::pow(2.0 * kPi, -0.5 * n) * std::exp(-(x + y).squaredNorm() / 8.0 - (x - y).squaredNorm() / 2.0);
}

}  // namespace twistquant
