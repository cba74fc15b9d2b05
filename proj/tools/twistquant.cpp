#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "twistquant/cochain.hpp"
#include "twistquant/dual.hpp"
#include "twistquant/errors.hpp"
#include "twistquant/opcalc.hpp"
#include "twistquant/report.hpp"
#include "twistquant/scalar_calculus.hpp"
#include "twistquant/suites.hpp"

using namespace twistquant;
using nlohmann::json;

namespace {

enum ExitCode : int { kPass = 0, kFail = 1, kBadConfig = 2, kBackend = 3 };

struct Settings {
  std::optional<std::string> group;
  std::optional<double> grid_l;
  std::optional<int> grid_n;
  std::optional<int> order;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<int> instances;
  std::optional<std::string> tau;
  std::optional<double> field;  // constant magnetic field strength
  std::string out;
  std::string config;
  bool no_timing = false;
  // subcommand specific
  std::string check_file;
  std::string trivialize_file;
  std::string symbol_file;
  std::string left_file;
  std::string right_file;
  std::string beta_file;
  bool geometry_only = false;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw ConfigError(path + ": " + ex.what());
  }
}

// Config values fill in whatever was not given on the command line.
void merge_config(Settings& s) {
  if (s.config.empty()) return;
  const json c = read_json(s.config);
  if (!c.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, value] : c.items()) {
      if (key == "group") {
        if (!s.group) s.group = value.get<std::string>();
      } else if (key == "grid") {
        for (const auto& [gk, gv] : value.items()) {
          if (gk == "L") {
            if (!s.grid_l) s.grid_l = gv.get<double>();
          } else if (gk == "N") {
            if (!s.grid_n) s.grid_n = gv.get<int>();
          } else {
            throw ConfigError("unknown grid key " + gk);
          }
        }
      } else if (key == "order") {
        if (!s.order) s.order = value.get<int>();
      } else if (key == "tolerance") {
        if (!s.tol) s.tol = value.get<double>();
      } else if (key == "seed") {
        if (!s.seed) s.seed = value.get<std::uint64_t>();
      } else if (key == "instances") {
        if (!s.instances) s.instances = value.get<int>();
      } else if (key == "tau") {
        if (!s.tau) s.tau = value.get<std::string>();
      } else if (key == "field") {
        if (!s.field) s.field = value.get<double>();
      } else {
        throw ConfigError("unknown config key " + key);
      }
    }
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("config value has the wrong type: ") + ex.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

int finish(const SuiteReport& report, const Settings& s) {
  write_text(s.out, report.to_json(!s.no_timing).dump(2) + "\n");
  std::cerr << report.failure_summary();
  std::cerr << report.records().size() - report.failures() << " passed, " << report.failures() << " failed\n";
  return report.all_pass() ? kPass : kFail;
}

std::string csv(const CMatrix& m) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j).real() << ',' << m(i, j).imag();
    }
    out << '\n';
  }
  return out.str();
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  if (path.empty() || path == "-") return {};
  return path + suffix;
}

FiniteTau finite_tau(const FiniteGroupPtr& g, const std::string& spec) {
  if (spec == "trivial") return FiniteTau::trivial(g);
  if (spec == "identity") return FiniteTau::identity(g);
  if (spec.rfind("power:", 0) == 0) return FiniteTau::power(g, std::stol(spec.substr(6)));
  if (spec.rfind("constant:", 0) == 0) {
    const auto x0 = g->find(spec.substr(9));
    if (!x0) throw ConfigError("unknown element in " + spec);
    return FiniteTau::constant(g, *x0);
  }
  if (spec == "symmetric") {
    const auto found = symmetric_search(g);
    if (!found.witness) throw ConfigError("no symmetric tau on " + g->name());
    return *found.witness;
  }
  throw ConfigError("unknown tau " + spec + " (trivial, identity, power:k, constant:<label>, symmetric)");
}

LieTau lie_tau(const NilpotentLieGroup& g, const std::string& spec) {
  if (spec == "trivial") return LieTau::trivial(g.dim());
  if (spec == "identity") return LieTau::identity(g.dim());
  if (spec == "half" || spec == "symmetric") return symmetric_tau(g);
  throw ConfigError("unknown tau " + spec + " (trivial, identity, half)");
}

std::shared_ptr<const LatticePhaseSpace> lattice(const Settings& s, double l, int n) {
  return std::make_shared<const LatticePhaseSpace>(lie_group(*s.group), Grid(s.grid_l.value_or(l), s.grid_n.value_or(n)));
}

int verify_finite(const Settings& s) {
  SuiteReport report(*s.seed);
  Rng rng(*s.seed);
  FiniteSuiteOptions options;
  if (s.group) {
    if (!is_finite_group_name(*s.group)) throw ConfigError("not a finite group: " + *s.group);
    options.groups = {*s.group};
  }
  if (s.instances) options.instances = *s.instances;
  if (s.tol) options.tolerance = *s.tol;
  run_finite_suite(report, options, rng);
  if (!s.group) {
    SymmetricSuiteOptions sym;
    if (s.instances) sym.instances = *s.instances;
    if (s.tol) sym.tolerance = *s.tol;
    run_symmetric_suite(report, sym, rng);
    CrossBackendOptions cross;
    if (s.tol) cross.tolerance = *s.tol;
    run_cross_backend_suite(report, cross, rng);
  }
  return finish(report, s);
}

int verify_magnetic(const Settings& s) {
  SuiteReport report(*s.seed);
  Rng rng(*s.seed);
  MagneticGeometryOptions geometry;
  MagneticOperatorOptions operators;
  if (s.group) {
    if (*s.group != "R2" && *s.group != "H1") throw ConfigError("magnetic suites run on R2 or H1");
    geometry.groups = operators.groups = {*s.group};
  }
  if (s.order) geometry.order = operators.order = *s.order;
  if (s.tol) operators.tolerance = *s.tol;
  if (s.grid_l || s.grid_n) {
    operators.plane = Grid(s.grid_l.value_or(operators.plane.half_width), s.grid_n.value_or(operators.plane.points));
    operators.heisenberg =
        Grid(s.grid_l.value_or(operators.heisenberg.half_width), s.grid_n.value_or(operators.heisenberg.points));
  }
  run_magnetic_geometry_suite(report, geometry, rng);
  if (!s.geometry_only) run_magnetic_operator_suite(report, operators, rng);
  return finish(report, s);
}

int quantize(const Settings& s) {
  SuiteReport report(*s.seed);
  Rng rng(*s.seed);
  const double tol = s.tol.value_or(1e-12);
  CMatrix matrix;
  if (is_finite_group_name(*s.group)) {
    const auto model = finite_model(*s.group);
    const auto f = s.symbol_file.empty() ? OpSymbol::random(model.dual, rng) : op_symbol_from_json(model.dual, read_json(s.symbol_file));
    const auto beta = s.beta_file.empty() ? Cochain::one(model.group, 1) : cochain_from_json(model.group, read_json(s.beta_file));
    const auto tau = finite_tau(model.group, s.tau.value_or("trivial"));
    matrix = op(f, beta, tau);
    report.run("quantize", "quantize.hilbert_schmidt", "Frobenius norm of Op(f) equals the symbol norm", tol,
               [&](json&) { return std::abs(matrix.norm() - norm(f)); });
    report.run("quantize", "quantize.kernel_formula", "direct kernel formula agrees with the Schrodinger route", tol,
               [&](json&) { return max_abs_diff(kernel(f, beta, tau), matrix); });
  } else if (is_lie_group_name(*s.group)) {
    const auto space = lattice(s, 6.0, 16);
    const auto& g = space->group();
    const double b = s.field.value_or(0.0);
    const auto tau = lie_tau(g, s.tau.value_or("half"));
    Trivialization beta = trivial_trivialization();
    if (b != 0.0) {
      if (g.dim() < 2) throw ConfigError("a magnetic field needs dimension at least 2");
      RMatrix b0 = RMatrix::Zero(g.dim(), g.dim());
      b0(0, 1) = b;
      b0(1, 0) = -b;
      beta = magnetic_beta(space->group_ptr(), PolynomialOneForm::linear_potential(b0, RVector::Zero(g.dim())).as_one_form(),
                           QuadratureRule(s.order.value_or(8), s.order.value_or(8)));
    }
    const ScalarQuantization quant(space, beta, tau);
    const auto symbol = ScalarSymbol::gaussian();
    matrix = quant.op_matrix(symbol);
    report.run("quantize", "quantize.boundary_mass", "fraction of the symbol mass on the grid boundary", 1e-6,
               [&](json&) { return boundary_mass(*space, symbol); });
    if (tau.kind() == LieTau::Kind::Half)
      report.run("quantize", "quantize.hermitian", "real symbol with tau = x/2 gives a Hermitian operator",
                 s.tol.value_or(1e-10), [&](json&) { return max_abs_diff(matrix, CMatrix(matrix.adjoint())); });
  } else {
    throw ConfigError("unknown group " + *s.group);
  }
  const std::string kernel_path = with_suffix(s.out, ".csv");
  if (kernel_path.empty()) {
    std::cout << csv(matrix);
    std::cerr << report.to_json(!s.no_timing).dump(2) << "\n";
    return report.all_pass() ? kPass : kFail;
  }
  write_text(kernel_path, csv(matrix));
  return finish(report, s);
}

int compose(const Settings& s) {
  SuiteReport report(*s.seed);
  Rng rng(*s.seed);
  const double tol = s.tol.value_or(1e-11);
  if (!is_finite_group_name(*s.group)) throw ConfigError("compose runs on finite groups");
  const auto model = finite_model(*s.group);
  const auto load = [&](const std::string& path) {
    return path.empty() ? OpSymbol::random(model.dual, rng) : op_symbol_from_json(model.dual, read_json(path));
  };
  const auto f = load(s.left_file);
  const auto g = load(s.right_file);
  const auto beta = s.beta_file.empty() ? Cochain::one(model.group, 1) : cochain_from_json(model.group, read_json(s.beta_file));
  const auto tau = finite_tau(model.group, s.tau.value_or("trivial"));
  const auto product = compose_symbols(f, g, beta, tau);
  report.run("compose", "compose.multiplicative", "Op(f # g) = Op(f) Op(g)", tol,
             [&](json&) { return max_abs_diff(op(product, beta, tau), op(f, beta, tau) * op(g, beta, tau)); });
  const std::string symbol_path = with_suffix(s.out, ".symbol.json");
  if (symbol_path.empty()) {
    std::cout << op_symbol_to_json(product).dump() << "\n";
    std::cerr << report.to_json(!s.no_timing).dump(2) << "\n";
    return report.all_pass() ? kPass : kFail;
  }
  write_text(symbol_path, op_symbol_to_json(product).dump() + "\n");
  return finish(report, s);
}

int cocycle(const Settings& s) {
  if (s.check_file.empty() == s.trivialize_file.empty()) throw ConfigError("give exactly one of --check or --trivialize");
  SuiteReport report(*s.seed);
  const double tol = s.tol.value_or(1e-10);
  const auto model = finite_model(s.group.value_or("Z2"));
  const std::string path = s.check_file.empty() ? s.trivialize_file : s.check_file;
  const json j = read_json(path);
  if (j.contains("group") && !s.group) throw ConfigError("pass --group matching the cochain file");
  const Cochain c = cochain_from_json(model.group, j);
  if (!s.check_file.empty()) {
    report.run("cocycle", "cocycle.check", "delta(c) = 1", tol, [&](json& detail) {
      const auto r = is_cocycle(c, tol);
      detail = {{"degree", c.degree()}};
      return r.max_defect;
    });
    return finish(report, s);
  }
  const auto check = is_cocycle(c, tol);
  if (!check.is_cocycle) throw NotACocycle("input is not a cocycle (defect " + std::to_string(check.max_defect) + ")");
  const Cochain beta = trivialize(c, tol);
  report.run("cocycle", "cocycle.trivialize", "delta(trivialize(c)) = c", tol,
             [&](json&) { return coboundary(beta).distance(c); });
  const std::string beta_path = with_suffix(s.out, ".trivialization.json");
  if (beta_path.empty())
    std::cerr << cochain_to_json(beta).dump() << "\n";
  else
    write_text(beta_path, cochain_to_json(beta).dump() + "\n");
  return finish(report, s);
}

int demo_landau(const Settings& s) {
  SuiteReport report(*s.seed);
  Rng rng(*s.seed);
  const double b = s.field.value_or(1.0);
  const auto space = std::make_shared<const LatticePhaseSpace>(euclidean_group(2), Grid(s.grid_l.value_or(6.0), s.grid_n.value_or(24)));
  const QuadratureRule rule(s.order.value_or(8), s.order.value_or(8));
  const RMatrix b0 = planar_field(b);
  const auto potential = PolynomialOneForm::linear_potential(b0, RVector::Zero(2));
  const auto quant = magnetic_quantization(space, potential.as_one_form(), rule);
  const double tol = s.tol.value_or(1e-10);
  const CMatrix hamiltonian_like = magnetic_op(space, potential.as_one_form(), ScalarSymbol::gaussian(), rule);

  report.run("landau", "landau.hermitian", "Op_A of a real Gaussian is Hermitian", tol,
             [&](json&) { return max_abs_diff(hamiltonian_like, CMatrix(hamiltonian_like.adjoint())); });

  report.run("landau", "landau.cocycle", "gamma(q; x, y) = exp(i B(x, y) / 2) for the constant field", 1e-12, [&](json&) {
    double d = 0.0;
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int t = 0; t < 100; ++t) {
      RVector q(2), x(2), y(2);
      q << u(rng), u(rng);
      x << u(rng), u(rng);
      y << u(rng), u(rng);
      d = std::max(d, std::abs(magnetic_cocycle(space->group(), constant_field(b0), q, x, y, rule) - unit_phase(0.5 * x.dot(b0 * y))));
    }
    return d;
  });

  report.run("landau", "landau.magnetic_translations", "U(x) U(y) = gamma(x, y) U(x + y) on interior rows", tol, [&](json&) {
    const double h = space->grid().spacing();
    RVector x(2), y(2);
    x << 2 * h, -h;
    y << -h, 3 * h;
    const auto ux = translation_matrix(quant, x);
    const auto uy = translation_matrix(quant, y);
    const auto uxy = translation_matrix(quant, x + y);
    const CMatrix lhs = ux.matrix * uy.matrix;
    const cplx gamma = unit_phase(0.5 * x.dot(b0 * y));
    double d = 0.0;
    for (std::size_t i = 0; i < space->size(); ++i) {
      const auto j = space->locate(space->point(i) - x);
      if (ux.truncated[i] || uxy.truncated[i] || !j || uy.truncated[*j]) continue;
      const auto r = static_cast<Eigen::Index>(i);
      d = std::max(d, max_abs_diff(lhs.row(r), gamma * uxy.matrix.row(r)));
    }
    return d;
  });

  report.run("landau", "landau.gauge", "Op_{A + d psi} = M^* Op_A M for a random cubic psi", tol, [&](json&) {
    const auto psi = Polynomial::random(2, 3, rng, 0.05);
    const CMatrix moved =
        magnetic_op(space, (potential + PolynomialOneForm::gradient(psi)).as_one_form(), ScalarSymbol::gaussian(), rule);
    CVector phase(static_cast<Eigen::Index>(space->size()));
    for (std::size_t i = 0; i < space->size(); ++i) phase(static_cast<Eigen::Index>(i)) = unit_phase(psi(space->point(i)));
    return max_abs_diff(moved, CMatrix(phase.conjugate().asDiagonal() * hamiltonian_like * phase.asDiagonal()));
  });

  const std::string kernel_path = with_suffix(s.out, ".csv");
  if (!kernel_path.empty()) write_text(kernel_path, csv(hamiltonian_like));
  return finish(report, s);
}

void add_common(CLI::App* cmd, Settings& s) {
  cmd->add_option("--group", s.group, "group name (Z<n>, S3, D4, Q8, R1..R3, H1)");
  cmd->add_option("--grid-l", s.grid_l, "grid half-width per axis");
  cmd->add_option("--grid-n", s.grid_n, "grid points per axis (even)");
  cmd->add_option("--order", s.order, "Gauss-Legendre order");
  cmd->add_option("--tol", s.tol, "tolerance override");
  cmd->add_option("--seed", s.seed, "RNG seed (default 1)");
  cmd->add_option("--out", s.out, "output path for the JSON report");
  cmd->add_option("--config", s.config, "JSON config file");
  cmd->add_option("--instances", s.instances, "random instances per identity");
  cmd->add_option("--tau", s.tau, "ordering map");
  cmd->add_option("--field", s.field, "constant magnetic field strength");
  cmd->add_flag("--no-timing", s.no_timing, "omit wall times from the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twisted pseudo-differential calculus on groups: verification and experiments"};
  app.require_subcommand(1);
  Settings s;

  auto* vf = app.add_subcommand("verify-finite", "all finite-group identities");
  auto* vm = app.add_subcommand("verify-magnetic", "magnetic identities on R2 and H1");
  auto* qz = app.add_subcommand("quantize", "dump the operator of a symbol");
  auto* cp = app.add_subcommand("compose", "dump the product of two symbols");
  auto* cc = app.add_subcommand("cocycle", "certify or trivialize a cochain file");
  auto* dl = app.add_subcommand("demo-landau", "constant field on R2 end to end");
  for (auto* cmd : {vf, vm, qz, cp, cc, dl}) add_common(cmd, s);
  vm->add_flag("--geometry-only", s.geometry_only, "skip the operator suite");
  qz->add_option("--symbol", s.symbol_file, "operator-valued symbol JSON");
  qz->add_option("--beta", s.beta_file, "1-cochain JSON");
  cp->add_option("--left", s.left_file, "left symbol JSON");
  cp->add_option("--right", s.right_file, "right symbol JSON");
  cp->add_option("--beta", s.beta_file, "1-cochain JSON");
  cc->add_option("--check", s.check_file, "cochain JSON to certify");
  cc->add_option("--trivialize", s.trivialize_file, "cocycle JSON to trivialize");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kBadConfig;
  }

  try {
    merge_config(s);
    if (!s.seed) s.seed = 1;
    if ((qz->parsed() || cp->parsed()) && !s.group) throw ConfigError("--group is required");
    if (vf->parsed()) return verify_finite(s);
    if (vm->parsed()) return verify_magnetic(s);
    if (qz->parsed()) return quantize(s);
    if (cp->parsed()) return compose(s);
    if (cc->parsed()) return cocycle(s);
    return demo_landau(s);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return kBackend;
  }
}
