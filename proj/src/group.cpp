#include "twistquant/group.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "twistquant/errors.hpp"

namespace twistquant {

FiniteGroup::FiniteGroup(std::string name, std::vector<std::vector<Elem>> cayley,
                         std::vector<std::string> labels)
    : name_(std::move(name)), order_(cayley.size()) {
  if (order_ == 0) throw ConfigError("finite group must be non-empty");
  table_.reserve(order_ * order_);
  for (const auto& row : cayley) {
    if (row.size() != order_) throw ConfigError("Cayley table must be square");
    for (Elem v : row) {
      if (v >= order_) throw ConfigError("Cayley table entry out of range");
      table_.push_back(v);
    }
  }

  std::optional<Elem> e;
  for (Elem x = 0; x < order_ && !e; ++x) {
    bool neutral = true;
    for (Elem y = 0; y < order_ && neutral; ++y)
      neutral = multiply(x, y) == y && multiply(y, x) == y;
    if (neutral) e = x;
  }
  if (!e) throw ConfigError("Cayley table has no two-sided identity");
  identity_ = *e;

  inverse_.assign(order_, order_);
  for (Elem x = 0; x < order_; ++x)
    for (Elem y = 0; y < order_; ++y)
      if (multiply(x, y) == identity_ && multiply(y, x) == identity_) inverse_[x] = y;
  if (std::find(inverse_.begin(), inverse_.end(), order_) != inverse_.end())
    throw ConfigError("Cayley table lacks inverses");

  for (Elem x = 0; x < order_; ++x)
    for (Elem y = 0; y < order_; ++y)
      for (Elem z = 0; z < order_; ++z)
        if (multiply(multiply(x, y), z) != multiply(x, multiply(y, z)))
          throw ConfigError("Cayley table is not associative");

  if (labels.empty()) {
    for (Elem x = 0; x < order_; ++x) labels.push_back(std::to_string(x));
  }
  if (labels.size() != order_) throw ConfigError("label count does not match group order");
  labels_ = std::move(labels);
}

Elem FiniteGroup::power(Elem x, long k) const {
  Elem base = k < 0 ? inverse(x) : x;
  unsigned long n = k < 0 ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  Elem result = identity_;
  while (n > 0) {
    if (n & 1UL) result = multiply(result, base);
    base = multiply(base, base);
    n >>= 1;
  }
  return result;
}

std::size_t FiniteGroup::element_order(Elem x) const {
  std::size_t k = 1;
  for (Elem y = x; y != identity_; y = multiply(y, x)) ++k;
  return k;
}

std::size_t FiniteGroup::exponent() const {
  std::size_t e = 1;
  for (Elem x = 0; x < order_; ++x) e = std::lcm(e, element_order(x));
  return e;
}

std::optional<Elem> FiniteGroup::find(std::string_view label) const {
  for (Elem x = 0; x < order_; ++x)
    if (labels_[x] == label) return x;
  return std::nullopt;
}

std::vector<std::vector<Elem>> FiniteGroup::cayley() const {
  std::vector<std::vector<Elem>> rows(order_);
  for (Elem x = 0; x < order_; ++x)
    rows[x].assign(table_.begin() + static_cast<std::ptrdiff_t>(x * order_),
                   table_.begin() + static_cast<std::ptrdiff_t>((x + 1) * order_));
  return rows;
}

NilpotentLieGroup::NilpotentLieGroup(std::string name, int dim, const std::vector<BracketEntry>& bracket,
                                     int step)
    : name_(std::move(name)), dim_(dim), step_(step) {
  if (dim <= 0) throw ConfigError("Lie algebra dimension must be positive");
  if (step <= 0) throw ConfigError("nilpotency step must be positive");
  if (step > 4) throw ConfigError("BCH product is only implemented up to step 4");
  const auto n = static_cast<std::size_t>(dim);
  c_.assign(n * n * n, 0.0);
  std::vector<bool> given(n * n * n, false);
  auto slot = [&](int i, int j, int k) { return static_cast<std::size_t>((i * dim + j) * dim + k); };
  for (const auto& b : bracket) {
    if (b.i < 0 || b.j < 0 || b.k < 0 || b.i >= dim || b.j >= dim || b.k >= dim)
      throw ConfigError("bracket index out of range");
    if (!std::isfinite(b.c)) throw ConfigError("bracket coefficient is not finite");
    c_[slot(b.i, b.j, b.k)] = b.c;
    given[slot(b.i, b.j, b.k)] = true;
  }
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        if (given[slot(i, j, k)] && !given[slot(j, i, k)]) c_[slot(j, i, k)] = -c_[slot(i, j, k)];
  abelian_ = std::all_of(c_.begin(), c_.end(), [](double v) { return v == 0.0; });

  if (antisymmetry_defect() > 1e-12) throw ConfigError("bracket is not antisymmetric");
  if (jacobi_defect() > 1e-12) throw ConfigError("bracket violates the Jacobi identity");

  // Every iterated bracket of step+1 basis vectors must vanish.
  std::vector<RVector> level;
  for (int i = 0; i < dim; ++i) level.push_back(RVector::Unit(dim, i));
  for (int len = 2; len <= step + 1; ++len) {
    std::vector<RVector> next;
    for (int i = 0; i < dim; ++i)
      for (const auto& v : level) {
        RVector w = this->bracket(RVector::Unit(dim, i), v);
        if (w.norm() > 0.0) next.push_back(w);
      }
    level = std::move(next);
    if (level.empty()) break;
  }
  if (!level.empty()) throw ConfigError("bracket is not nilpotent of the declared step");
}

RVector NilpotentLieGroup::bracket(const RVector& x, const RVector& y) const {
  RVector z = RVector::Zero(dim_);
  if (abelian_) return z;
  for (int i = 0; i < dim_; ++i) {
    if (x(i) == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      const double xy = x(i) * y(j);
      if (xy == 0.0) continue;
      for (int k = 0; k < dim_; ++k) z(k) += structure_constant(i, j, k) * xy;
    }
  }
  return z;
}

RVector NilpotentLieGroup::bch(const RVector& x, const RVector& y) const {
  RVector z = x + y;
  if (abelian_ || step_ < 2) return z;
  const RVector xy = bracket(x, y);
  z += 0.5 * xy;
  if (step_ < 3) return z;
  const RVector xxy = bracket(x, xy);
  z += (xxy - bracket(y, xy)) / 12.0;
  if (step_ < 4) return z;
  z -= bracket(y, xxy) / 24.0;
  return z;
}

bool NilpotentLieGroup::contains(const RVector& x) const {
  return x.size() == dim_ && x.allFinite();
}

double NilpotentLieGroup::antisymmetry_defect() const {
  double d = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        d = std::max(d, std::abs(structure_constant(i, j, k) + structure_constant(j, i, k)));
  return d;
}

double NilpotentLieGroup::jacobi_defect() const {
  double d = 0.0;
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b)
      for (int c = 0; c < dim_; ++c) {
        const RVector ea = RVector::Unit(dim_, a), eb = RVector::Unit(dim_, b), ec = RVector::Unit(dim_, c);
        const RVector s = bracket(ea, bracket(eb, ec)) + bracket(eb, bracket(ec, ea)) + bracket(ec, bracket(ea, eb));
        d = std::max(d, s.cwiseAbs().maxCoeff());
      }
  return d;
}

Elem GroupElement::index() const {
  if (const auto* x = std::get_if<Elem>(&value)) return *x;
  throw BackendMismatch("expected a finite-group element");
}

const RVector& GroupElement::coords() const {
  if (const auto* x = std::get_if<RVector>(&value)) return *x;
  throw BackendMismatch("expected a Lie-group element");
}

void check_member(const GroupModel& g, const GroupElement& x) {
  if (const auto* f = std::get_if<FiniteGroupPtr>(&g)) {
    if (!(*f)->contains(x.index())) throw std::out_of_range("element index exceeds group order");
  } else {
    const auto& lie = *std::get<LieGroupPtr>(g);
    if (!lie.contains(x.coords())) throw std::invalid_argument("coordinates are not a finite vector of the group dimension");
  }
}

GroupElement multiply(const GroupModel& g, const GroupElement& x, const GroupElement& y) {
  check_member(g, x);
  check_member(g, y);
  if (const auto* f = std::get_if<FiniteGroupPtr>(&g)) return GroupElement::finite((*f)->multiply(x.index(), y.index()));
  return GroupElement::lie(std::get<LieGroupPtr>(g)->multiply(x.coords(), y.coords()));
}

GroupElement inverse(const GroupModel& g, const GroupElement& x) {
  check_member(g, x);
  if (const auto* f = std::get_if<FiniteGroupPtr>(&g)) return GroupElement::finite((*f)->inverse(x.index()));
  return GroupElement::lie(-x.coords());
}

GroupElement identity(const GroupModel& g) {
  if (const auto* f = std::get_if<FiniteGroupPtr>(&g)) return GroupElement::finite((*f)->identity());
  return GroupElement::lie(std::get<LieGroupPtr>(g)->identity());
}

FiniteTau::FiniteTau(FiniteGroupPtr group, std::vector<Elem> table, std::string name)
    : group_(std::move(group)), table_(std::move(table)), name_(std::move(name)) {
  if (table_.size() != group_->order()) throw std::invalid_argument("tau table size does not match group order");
  for (Elem v : table_)
    if (v >= group_->order()) throw std::invalid_argument("tau table entry out of range");
}

FiniteTau FiniteTau::trivial(FiniteGroupPtr group) {
  std::vector<Elem> t(group->order(), group->identity());
  return {std::move(group), std::move(t), "trivial"};
}

FiniteTau FiniteTau::identity(FiniteGroupPtr group) {
  std::vector<Elem> t(group->order());
  std::iota(t.begin(), t.end(), Elem{0});
  return {std::move(group), std::move(t), "identity"};
}

FiniteTau FiniteTau::constant(FiniteGroupPtr group, Elem x0) {
  std::vector<Elem> t(group->order(), x0);
  return {std::move(group), std::move(t), "constant:" + std::to_string(x0)};
}

FiniteTau FiniteTau::power(FiniteGroupPtr group, long k) {
  std::vector<Elem> t(group->order());
  for (Elem x = 0; x < t.size(); ++x) t[x] = group->power(x, k);
  return {std::move(group), std::move(t), "power:" + std::to_string(k)};
}

bool FiniteTau::fixes_identity() const { return table_[group_->identity()] == group_->identity(); }

bool FiniteTau::is_symmetric() const {
  const auto& g = *group_;
  for (Elem x = 0; x < g.order(); ++x)
    if (table_[x] != g.multiply(x, table_[g.inverse(x)])) return false;
  return true;
}

LieTau LieTau::trivial(int dim) {
  return {Kind::Trivial, "trivial", dim, [dim](const RVector&) { return RVector::Zero(dim).eval(); }};
}

LieTau LieTau::identity(int dim) {
  return {Kind::Identity, "identity", dim, [](const RVector& x) { return x; }};
}

LieTau LieTau::constant(RVector x0) {
  const int dim = static_cast<int>(x0.size());
  return {Kind::Constant, "constant", dim, [x0](const RVector&) { return x0; }};
}

LieTau LieTau::half(int dim) {
  return {Kind::Half, "half", dim, [](const RVector& x) { return (0.5 * x).eval(); }};
}

LieTau LieTau::custom(std::string name, int dim, std::function<RVector(const RVector&)> map) {
  return {Kind::Custom, std::move(name), dim, std::move(map)};
}

RVector LieTau::operator()(const RVector& x) const { return map_(x); }

LieTau symmetric_tau(const NilpotentLieGroup& g) { return LieTau::half(g.dim()); }

namespace {

// Backtracking over tau values in element order; the pair constraint
// tau(x) = x tau(x^-1) is checked as soon as both values are assigned.
class SymmetricEnumerator {
 public:
  explicit SymmetricEnumerator(const FiniteGroup& g) : g_(g), tau_(g.order(), 0) {}

  template <class Visit>
  bool run(Visit&& visit) {
    return descend(0, visit);
  }

  const std::vector<Elem>& current() const { return tau_; }

 private:
  template <class Visit>
  bool descend(Elem x, Visit& visit) {
    if (x == g_.order()) return visit(tau_);
    const Elem xi = g_.inverse(x);
    for (Elem v = 0; v < g_.order(); ++v) {
      tau_[x] = v;
      if (xi <= x && tau_[x] != g_.multiply(x, tau_[xi])) continue;
      if (xi <= x && tau_[xi] != g_.multiply(xi, tau_[x])) continue;
      if (descend(x + 1, visit)) return true;
    }
    return false;
  }

  const FiniteGroup& g_;
  std::vector<Elem> tau_;
};

void check_search_size(const FiniteGroup& g, std::size_t max_order) {
  if (g.order() > max_order) {
    std::ostringstream msg;
    msg << "symmetric search on a group of order " << g.order() << " exceeds the cap " << max_order;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

SymmetricSearch symmetric_search(const FiniteGroupPtr& g, std::size_t max_order) {
  check_search_size(*g, max_order);
  SymmetricSearch result;
  const auto e = static_cast<long>(g->exponent());
  for (long k = 1; k <= e; ++k) {
    ++result.power_candidates;
    auto tau = FiniteTau::power(g, k);
    if (tau.is_symmetric()) {
      result.witness = std::move(tau);
      return result;
    }
  }
  result.exhaustive = true;
  SymmetricEnumerator search(*g);
  std::vector<Elem> found;
  if (search.run([&](const std::vector<Elem>& t) {
        if (t[g->identity()] != g->identity()) return false;
        found = t;
        return true;
      }))
    result.witness = FiniteTau(g, found, "searched");
  return result;
}

std::size_t count_symmetric_maps(const FiniteGroupPtr& g, std::size_t max_order) {
  check_search_size(*g, max_order);
  std::size_t count = 0;
  SymmetricEnumerator search(*g);
  search.run([&](const std::vector<Elem>&) {
    ++count;
    return false;
  });
  return count;
}

LieGroupPtr euclidean_group(int dim) {
  return std::make_shared<NilpotentLieGroup>("R" + std::to_string(dim), dim,
                                             std::vector<NilpotentLieGroup::BracketEntry>{}, 1);
}

LieGroupPtr heisenberg_group() {
  return std::make_shared<NilpotentLieGroup>("H1", 3, std::vector<NilpotentLieGroup::BracketEntry>{{0, 1, 2, 1.0}},
                                             2);
}

bool is_lie_group_name(std::string_view name) {
  return name == "R1" || name == "R2" || name == "R3" || name == "H1";
}

LieGroupPtr lie_group(std::string_view name) {
  if (name == "H1") return heisenberg_group();
  if (name == "R1") return euclidean_group(1);
  if (name == "R2") return euclidean_group(2);
  if (name == "R3") return euclidean_group(3);
  throw ConfigError("unknown Lie group: " + std::string(name));
}

GroupModel group_from_json(const nlohmann::json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    const std::string name = j.value("name", type == "finite" ? "custom-finite" : "custom-nilpotent");
    if (type == "finite") {
      auto cayley = j.at("cayley").get<std::vector<std::vector<Elem>>>();
      std::vector<std::string> labels;
      if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
      return std::make_shared<const FiniteGroup>(name, std::move(cayley), std::move(labels));
    }
    if (type == "nilpotent") {
      std::vector<NilpotentLieGroup::BracketEntry> entries;
      for (const auto& row : j.value("bracket", nlohmann::json::array())) {
        if (!row.is_array() || row.size() != 4) throw ConfigError("bracket entries are [i, j, k, c]");
        entries.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<int>(), row[3].get<double>()});
      }
      return std::make_shared<const NilpotentLieGroup>(name, j.at("dim").get<int>(), entries, j.at("step").get<int>());
    }
    throw ConfigError("group type must be \"finite\" or \"nilpotent\"");
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("malformed group definition: ") + ex.what());
  }
}

nlohmann::json group_to_json(const GroupModel& g) {
  nlohmann::json j;
  if (const auto* f = std::get_if<FiniteGroupPtr>(&g)) {
    j["type"] = "finite";
    j["name"] = (*f)->name();
    j["cayley"] = (*f)->cayley();
    std::vector<std::string> labels;
    for (Elem x = 0; x < (*f)->order(); ++x) labels.push_back((*f)->label(x));
    j["labels"] = labels;
    return j;
  }
  const auto& lie = *std::get<LieGroupPtr>(g);
  j["type"] = "nilpotent";
  j["name"] = lie.name();
  j["dim"] = lie.dim();
  j["step"] = lie.step();
  auto rows = nlohmann::json::array();
  for (int i = 0; i < lie.dim(); ++i)
    for (int jj = i + 1; jj < lie.dim(); ++jj)
      for (int k = 0; k < lie.dim(); ++k)
        if (lie.structure_constant(i, jj, k) != 0.0) rows.push_back({i, jj, k, lie.structure_constant(i, jj, k)});
  j["bracket"] = rows;
  return j;
}

}  // namespace twistquant
