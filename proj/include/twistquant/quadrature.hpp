#pragma once

#include <vector>

namespace twistquant {

// Gauss-Legendre nodes and weights on [0, 1].
class GaussLegendre {
 public:
  explicit GaussLegendre(int order);

  int order() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(nodes_[i]);
    return s;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// Segment rule on [0,1] and collapsed tensor rule on {0 <= s <= t <= 1}:
// int_0^1 dt int_0^t ds f(t, s) = int_0^1 dt t int_0^1 du f(t, t u).
class QuadratureRule {
 public:
  explicit QuadratureRule(int segment_order = 8, int triangle_order = 6);
  static QuadratureRule uniform(int order) { return QuadratureRule(order, order); }

  int segment_order() const { return segment_.order(); }
  int triangle_order() const { return triangle_.order(); }
  std::size_t triangle_points() const { return static_cast<std::size_t>(triangle_.order() * triangle_.order()); }

  template <class F>
  double segment(F&& f) const {
    return segment_.integrate(f);
  }

  template <class F>
  double triangle(F&& f) const {
    const auto& x = triangle_.nodes();
    const auto& w = triangle_.weights();
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double inner = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) inner += w[j] * f(x[i], x[i] * x[j]);
      s += w[i] * x[i] * inner;
    }
    return s;
  }

 private:
  GaussLegendre segment_;
  GaussLegendre triangle_;
};

}  // namespace twistquant
