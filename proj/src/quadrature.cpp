#include "twistquant/quadrature.hpp"

#include <memory>
#include <stdexcept>

#include <gsl/gsl_integration.h>

namespace twistquant {

GaussLegendre::GaussLegendre(int order) {
  if (order < 1 || order > 1024) throw std::invalid_argument("Gauss-Legendre order must be in [1, 1024]");
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(order)), &gsl_integration_glfixed_table_free);
  if (!table) throw std::runtime_error("GSL could not allocate a Gauss-Legendre table");
  nodes_.resize(static_cast<std::size_t>(order));
  weights_.resize(static_cast<std::size_t>(order));
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    gsl_integration_glfixed_point(0.0, 1.0, i, &nodes_[i], &weights_[i], table.get());
}

QuadratureRule::QuadratureRule(int segment_order, int triangle_order)
    : segment_(segment_order), triangle_(triangle_order) {}

}  // namespace twistquant
