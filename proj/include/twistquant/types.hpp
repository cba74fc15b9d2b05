#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace twistquant {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

using Rng = std::mt19937_64;

inline constexpr double kPi = 3.14159265358979323846;

inline cplx unit_phase(double angle) { return std::polar(1.0, angle); }

inline cplx random_phase(Rng& rng) {
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  return unit_phase(angle(rng));
}

inline cplx random_gaussian(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

inline CVector random_vector(Rng& rng, Eigen::Index n) {
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = random_gaussian(rng);
  return v;
}

inline CMatrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = random_gaussian(rng);
  return m;
}

// Largest entrywise modulus of a - b.
template <class A, class B>
double max_abs_diff(const A& a, const B& b) {
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace twistquant
