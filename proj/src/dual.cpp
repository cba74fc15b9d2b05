#include "twistquant/dual.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <charconv>
#include <cmath>
#include <deque>
#include <functional>
#include <stdexcept>

#include "twistquant/errors.hpp"

namespace twistquant {

UnitaryDual::UnitaryDual(FiniteGroupPtr group, std::vector<Irrep> irreps)
    : group_(std::move(group)), irreps_(std::move(irreps)) {
  if (irreps_.empty()) throw ConfigError("dual must contain at least one irrep");
  const auto n = group_->order();
  for (const auto& r : irreps_) {
    if (r.dim <= 0) throw ConfigError("irrep dimension must be positive");
    if (r.matrices.size() != n) throw ConfigError("irrep " + r.label + " has the wrong number of matrices");
    for (const auto& m : r.matrices)
      if (m.rows() != r.dim || m.cols() != r.dim) throw ConfigError("irrep " + r.label + " has a mis-sized matrix");
    weights_.push_back(static_cast<double>(r.dim) / static_cast<double>(n));
  }
}

std::size_t UnitaryDual::trivial_index() const {
  for (std::size_t i = 0; i < irreps_.size(); ++i) {
    if (irreps_[i].dim != 1) continue;
    bool trivial = true;
    for (const auto& m : irreps_[i].matrices) trivial = trivial && std::abs(m(0, 0) - 1.0) < 1e-12;
    if (trivial) return i;
  }
  throw std::logic_error("dual has no trivial representation");
}

OperatorField UnitaryDual::fourier(std::span<const cplx> u) const {
  if (u.size() != group_->order()) throw BackendMismatch("function size does not match the dual's group");
  OperatorField out = zero_field();
  for (std::size_t k = 0; k < irreps_.size(); ++k)
    for (Elem x = 0; x < u.size(); ++x)
      if (u[x] != 0.0) out[k] += u[x] * irreps_[k].matrices[x].adjoint();
  return out;
}

CVector UnitaryDual::inverse_fourier(const OperatorField& phi) const {
  check_field(phi);
  CVector u = CVector::Zero(static_cast<Eigen::Index>(group_->order()));
  for (Elem x = 0; x < group_->order(); ++x) {
    cplx s = 0.0;
    for (std::size_t k = 0; k < irreps_.size(); ++k)
      s += weights_[k] * (irreps_[k].matrices[x] * phi[k]).trace();
    u(static_cast<Eigen::Index>(x)) = s;
  }
  return u;
}

OperatorField UnitaryDual::zero_field() const {
  OperatorField f;
  for (const auto& r : irreps_) f.push_back(CMatrix::Zero(r.dim, r.dim));
  return f;
}

OperatorField UnitaryDual::identity_field() const {
  OperatorField f;
  for (const auto& r : irreps_) f.push_back(CMatrix::Identity(r.dim, r.dim));
  return f;
}

cplx UnitaryDual::inner(const OperatorField& a, const OperatorField& b) const {
  check_field(a);
  check_field(b);
  cplx s = 0.0;
  for (std::size_t k = 0; k < irreps_.size(); ++k) s += weights_[k] * (a[k].array() * b[k].array().conjugate()).sum();
  return s;
}

void UnitaryDual::check_field(const OperatorField& phi) const {
  if (phi.size() != irreps_.size()) throw BackendMismatch("operator field does not match the dual");
  for (std::size_t k = 0; k < irreps_.size(); ++k)
    if (phi[k].rows() != irreps_[k].dim || phi[k].cols() != irreps_[k].dim)
      throw BackendMismatch("operator field block has the wrong size");
}

double DualDiagnostics::max_defect() const {
  double m = 0.0;
  for (double v : {unitarity, multiplicativity, schur_orthogonality, inequivalence, completeness}) {
    if (std::isnan(v)) return v;
    m = std::max(m, v);
  }
  return m;
}

DualDiagnostics dual_selfcheck(const UnitaryDual& dual) {
  const auto& g = dual.group();
  const auto n = g.order();
  DualDiagnostics d;
  std::size_t dim_sq = 0;
  for (const auto& r : dual.irreps()) {
    dim_sq += static_cast<std::size_t>(r.dim * r.dim);
    const CMatrix id = CMatrix::Identity(r.dim, r.dim);
    for (Elem x = 0; x < n; ++x) {
      d.unitarity = std::max(d.unitarity, max_abs_diff(r(x).adjoint() * r(x), id));
      for (Elem y = 0; y < n; ++y)
        d.multiplicativity = std::max(d.multiplicativity, max_abs_diff(r(x) * r(y), r(g.multiply(x, y))));
    }
  }
  // Schur: sum_x xi(x)_{ij} conj(eta(x)_{kl}) = |G|/d delta(xi,eta) delta_ik delta_jl.
  const auto& irreps = dual.irreps();
  for (std::size_t a = 0; a < irreps.size(); ++a)
    for (std::size_t b = 0; b < irreps.size(); ++b) {
      const auto& ra = irreps[a];
      const auto& rb = irreps[b];
      for (int i = 0; i < ra.dim; ++i)
        for (int j = 0; j < ra.dim; ++j)
          for (int k = 0; k < rb.dim; ++k)
            for (int l = 0; l < rb.dim; ++l) {
              cplx s = 0.0;
              for (Elem x = 0; x < n; ++x) s += ra(x)(i, j) * std::conj(rb(x)(k, l));
              const double expected = (a == b && i == k && j == l) ? static_cast<double>(n) / ra.dim : 0.0;
              d.schur_orthogonality = std::max(d.schur_orthogonality, std::abs(s - expected) / static_cast<double>(n));
            }
    }
  // Characters of inequivalent irreps are orthogonal; equal characters mean equivalence.
  for (std::size_t a = 0; a < irreps.size(); ++a)
    for (std::size_t b = a + 1; b < irreps.size(); ++b) {
      if (irreps[a].dim != irreps[b].dim) continue;
      cplx s = 0.0;
      for (Elem x = 0; x < n; ++x) s += irreps[a](x).trace() * std::conj(irreps[b](x).trace());
      if (std::abs(s / static_cast<double>(n)) > 0.5) d.inequivalence = 1.0;
    }
  d.completeness = std::abs(static_cast<double>(dim_sq) - static_cast<double>(n));
  return d;
}

namespace {

struct IrrepImages {
  std::string label;
  std::vector<CMatrix> generators;
};

struct Presentation {
  std::string name;
  std::vector<CMatrix> faithful;  // generator images in a faithful unitary representation
  std::vector<IrrepImages> irreps;
  std::function<std::string(const CMatrix&, const std::string&)> label;  // (faithful matrix, word) -> label
};

bool same_matrix(const CMatrix& a, const CMatrix& b) { return max_abs_diff(a, b) < 1e-9; }

// Closes the generators breadth first; element 0 is the identity and every
// element remembers a parent and the generator that reached it.
FiniteModel close_presentation(const Presentation& p) {
  const auto dim = p.faithful.front().rows();
  std::vector<CMatrix> elements{CMatrix::Identity(dim, dim)};
  std::vector<std::string> words{""};
  std::vector<std::pair<std::size_t, std::size_t>> parent{{0, 0}};
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const auto x = queue.front();
    queue.pop_front();
    for (std::size_t s = 0; s < p.faithful.size(); ++s) {
      CMatrix m = elements[x] * p.faithful[s];
      if (std::any_of(elements.begin(), elements.end(), [&](const CMatrix& e) { return same_matrix(e, m); })) continue;
      elements.push_back(m);
      words.push_back(words[x] + static_cast<char>('a' + s));
      parent.emplace_back(x, s);
      queue.push_back(elements.size() - 1);
    }
  }
  const auto n = elements.size();
  auto locate = [&](const CMatrix& m) {
    for (std::size_t i = 0; i < n; ++i)
      if (same_matrix(elements[i], m)) return i;
    throw std::logic_error("presentation is not closed");
  };
  std::vector<std::vector<Elem>> cayley(n, std::vector<Elem>(n));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) cayley[x][y] = locate(elements[x] * elements[y]);

  std::vector<std::string> labels;
  for (std::size_t x = 0; x < n; ++x) labels.push_back(p.label(elements[x], words[x]));
  auto group = std::make_shared<const FiniteGroup>(p.name, std::move(cayley), std::move(labels));

  std::vector<Irrep> irreps;
  for (const auto& spec : p.irreps) {
    const auto d = spec.generators.front().rows();
    Irrep r{spec.label, static_cast<int>(d), std::vector<CMatrix>(n)};
    r.matrices[0] = CMatrix::Identity(d, d);
    for (std::size_t x = 1; x < n; ++x) r.matrices[x] = r.matrices[parent[x].first] * spec.generators[parent[x].second];
    irreps.push_back(std::move(r));
  }
  return {group, std::make_shared<const UnitaryDual>(group, std::move(irreps))};
}

CMatrix scalar(cplx v) {
  CMatrix m(1, 1);
  m(0, 0) = v;
  return m;
}

CMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

FiniteModel cyclic_model(int n) {
  Presentation p;
  p.name = "Z" + std::to_string(n);
  if (n == 1) {
    auto group = std::make_shared<const FiniteGroup>("trivial", std::vector<std::vector<Elem>>{{0}},
                                                     std::vector<std::string>{"e"});
    std::vector<Irrep> irreps{{"chi0", 1, {CMatrix::Identity(1, 1)}}};
    return {group, std::make_shared<const UnitaryDual>(group, std::move(irreps))};
  }
  p.faithful = {scalar(unit_phase(2.0 * kPi / n))};
  for (int k = 0; k < n; ++k) p.irreps.push_back({"chi" + std::to_string(k), {scalar(unit_phase(2.0 * kPi * k / n))}});
  p.label = [](const CMatrix&, const std::string& word) {
    if (word.empty()) return std::string("e");
    if (word.size() == 1) return std::string("g");
    return "g^" + std::to_string(word.size());
  };
  return close_presentation(p);
}

// Permutation matrices act by P e_i = e_{sigma(i)}; labels use cycle notation on {1,2,3}.
FiniteModel s3_model() {
  auto perm = [](std::array<int, 3> sigma) {
    CMatrix m = CMatrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) m(sigma[static_cast<std::size_t>(i)], i) = 1.0;
    return m;
  };
  const CMatrix t12 = perm({1, 0, 2});
  const CMatrix t23 = perm({0, 2, 1});
  // Orthonormal basis of the sum-zero plane.
  CMatrix basis(3, 2);
  basis << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0), -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0), 0.0,
      -2.0 / std::sqrt(6.0);
  auto standard = [&](const CMatrix& p) -> CMatrix { return basis.adjoint() * p * basis; };

  Presentation p;
  p.name = "S3";
  p.faithful = {t12, t23};
  p.irreps = {{"trivial", {scalar(1.0), scalar(1.0)}},
              {"sign", {scalar(-1.0), scalar(-1.0)}},
              {"standard", {standard(t12), standard(t23)}}};
  p.label = [](const CMatrix& m, const std::string&) {
    std::array<int, 3> sigma{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (std::abs(m(j, i)) > 0.5) sigma[static_cast<std::size_t>(i)] = j;
    std::string out;
    std::array<bool, 3> seen{};
    for (int start = 0; start < 3; ++start) {
      if (seen[static_cast<std::size_t>(start)] || sigma[static_cast<std::size_t>(start)] == start) continue;
      out += "(";
      for (int i = start; !seen[static_cast<std::size_t>(i)]; i = sigma[static_cast<std::size_t>(i)]) {
        seen[static_cast<std::size_t>(i)] = true;
        out += static_cast<char>('1' + i);
      }
      out += ")";
    }
    return out.empty() ? std::string("e") : out;
  };
  return close_presentation(p);
}

// r = rotation by a quarter turn, s = reflection diag(1,-1).
FiniteModel d4_model() {
  const CMatrix r = mat2(0.0, -1.0, 1.0, 0.0);
  const CMatrix s = mat2(1.0, 0.0, 0.0, -1.0);
  Presentation p;
  p.name = "D4";
  p.faithful = {r, s};
  p.irreps = {{"trivial", {scalar(1.0), scalar(1.0)}},
              {"r+s-", {scalar(1.0), scalar(-1.0)}},
              {"r-s+", {scalar(-1.0), scalar(1.0)}},
              {"r-s-", {scalar(-1.0), scalar(-1.0)}},
              {"standard", {r, s}}};
  p.label = [r, s](const CMatrix& m, const std::string&) {
    CMatrix rot = CMatrix::Identity(2, 2);
    for (int k = 0; k < 4; ++k) {
      const std::string rk = k == 0 ? "" : (k == 1 ? "r" : "r^" + std::to_string(k));
      if (same_matrix(m, rot)) return k == 0 ? std::string("e") : rk;
      if (same_matrix(m, rot * s)) return rk + "s";
      rot = rot * r;
    }
    throw std::logic_error("unrecognized D4 element");
  };
  return close_presentation(p);
}

// i -> diag(i, -i), j -> [[0,1],[-1,0]].
FiniteModel q8_model() {
  const cplx I(0.0, 1.0);
  const CMatrix qi = mat2(I, 0.0, 0.0, -I);
  const CMatrix qj = mat2(0.0, 1.0, -1.0, 0.0);
  const CMatrix qk = qi * qj;
  Presentation p;
  p.name = "Q8";
  p.faithful = {qi, qj};
  p.irreps = {{"trivial", {scalar(1.0), scalar(1.0)}},
              {"i+j-", {scalar(1.0), scalar(-1.0)}},
              {"i-j+", {scalar(-1.0), scalar(1.0)}},
              {"i-j-", {scalar(-1.0), scalar(-1.0)}},
              {"spin", {qi, qj}}};
  p.label = [qi, qj, qk](const CMatrix& m, const std::string&) {
    const CMatrix id = CMatrix::Identity(2, 2);
    const std::vector<std::pair<std::string, CMatrix>> named{{"1", id}, {"-1", -id}, {"i", qi}, {"-i", -qi},
                                                             {"j", qj}, {"-j", -qj}, {"k", qk}, {"-k", -qk}};
    for (const auto& [name, value] : named)
      if (same_matrix(m, value)) return name;
    throw std::logic_error("unrecognized Q8 element");
  };
  return close_presentation(p);
}

std::optional<int> cyclic_order(std::string_view name) {
  if (name.size() < 2 || name[0] != 'Z') return std::nullopt;
  int n = 0;
  const auto* end = name.data() + name.size();
  auto [ptr, ec] = std::from_chars(name.data() + 1, end, n);
  if (ec != std::errc() || ptr != end || n < 1) return std::nullopt;
  return n;
}

}  // namespace

bool is_finite_group_name(std::string_view name) {
  return name == "trivial" || name == "S3" || name == "D4" || name == "Q8" || cyclic_order(name).has_value();
}

std::vector<std::string> shipped_finite_groups() { return {"Z2", "Z3", "Z6", "S3", "D4", "Q8"}; }

FiniteModel finite_model(std::string_view name) {
  if (name == "trivial") return cyclic_model(1);
  if (name == "S3") return s3_model();
  if (name == "D4") return d4_model();
  if (name == "Q8") return q8_model();
  if (auto n = cyclic_order(name)) {
    if (*n > 4096) throw ConfigError("cyclic group order too large");
    return cyclic_model(*n);
  }
  throw ConfigError("unknown finite group: " + std::string(name));
}

namespace {

CMatrix matrix_from_json(const nlohmann::json& j, int d) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(d * d))
    throw ConfigError("irrep matrix must list d*d complex entries");
  CMatrix m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const auto& e = j[static_cast<std::size_t>(r * d + c)];
      if (!e.is_array() || e.size() != 2) throw ConfigError("complex entries are [re, im] pairs");
      m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  return m;
}

}  // namespace

DualPtr dual_from_json(const FiniteGroupPtr& group, const nlohmann::json& j) {
  try {
    const auto& list = j.is_array() ? j : j.at("irreps");
    std::vector<Irrep> irreps;
    for (const auto& item : list) {
      Irrep r;
      r.label = item.value("label", "irrep" + std::to_string(irreps.size()));
      r.dim = item.at("dim").get<int>();
      if (r.dim <= 0) throw ConfigError("irrep dimension must be positive");
      for (const auto& m : item.at("matrices")) r.matrices.push_back(matrix_from_json(m, r.dim));
      irreps.push_back(std::move(r));
    }
    return std::make_shared<const UnitaryDual>(group, std::move(irreps));
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("malformed dual definition: ") + ex.what());
  }
}

nlohmann::json dual_to_json(const UnitaryDual& dual) {
  auto list = nlohmann::json::array();
  for (const auto& r : dual.irreps()) {
    auto mats = nlohmann::json::array();
    for (const auto& m : r.matrices) {
      auto entries = nlohmann::json::array();
      for (int a = 0; a < r.dim; ++a)
        for (int b = 0; b < r.dim; ++b) entries.push_back({m(a, b).real(), m(a, b).imag()});
      mats.push_back(entries);
    }
    list.push_back({{"label", r.label}, {"dim", r.dim}, {"matrices", mats}});
  }
  return {{"irreps", list}};
}

}  // namespace twistquant
