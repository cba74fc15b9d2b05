#pragma once

#include <string>
#include <vector>

#include "twistquant/phase_space.hpp"
#include "twistquant/report.hpp"
#include "twistquant/types.hpp"

namespace twistquant {

struct FiniteSuiteOptions {
  std::vector<std::string> groups = {"Z2", "Z3", "Z6", "S3", "D4", "Q8"};
  int instances = 20;
  double tolerance = 1e-12;
};

// Exact identities of the finite backend, one record per group and identity.
void run_finite_suite(SuiteReport& report, const FiniteSuiteOptions& options, Rng& rng);

struct SymmetricSuiteOptions {
  int instances = 20;
  double tolerance = 1e-12;
  double witness_threshold = 1e-3;
};

// Symmetric maps on Z2 and Z3 and the adjoint identity they buy.
void run_symmetric_suite(SuiteReport& report, const SymmetricSuiteOptions& options, Rng& rng);

struct MagneticGeometryOptions {
  std::vector<std::string> groups = {"R2", "H1"};
  int order = 8;
  int samples = 200;
  double exact_tolerance = 1e-12;
  double cocycle_tolerance = 1e-8;
  std::vector<int> refinement = {4, 8, 16};
  // Residuals below this are roundoff; refinement is judged above it.
  double roundoff_floor = 1e-13;
};

void run_magnetic_geometry_suite(SuiteReport& report, const MagneticGeometryOptions& options, Rng& rng);

struct MagneticOperatorOptions {
  std::vector<std::string> groups = {"R2", "H1"};
  Grid plane{8.0, 64};
  Grid heisenberg{6.0, 32};
  int order = 8;
  double tolerance = 1e-10;
  double kernel_tolerance = 1e-8;
  // H1 checks run on every pair of interior points taken with this stride per axis.
  int heisenberg_stride = 2;
};

void run_magnetic_operator_suite(SuiteReport& report, const MagneticOperatorOptions& options, Rng& rng);

struct CrossBackendOptions {
  int order = 8;
  int pairs = 10;
  double tolerance = 1e-12;
};

// Character calculus on Z_N against the scalar calculus on the same group.
void run_cross_backend_suite(SuiteReport& report, const CrossBackendOptions& options, Rng& rng);

}  // namespace twistquant
