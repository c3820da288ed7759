#pragma once

#include "ewcert/hermitian.hpp"

#include <cstdint>
#include <random>

namespace ewcert {

using Rng = std::mt19937_64;

/// Vector of independent standard complex Gaussian entries.
inline Vector random_gaussian_vector(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

/// Haar-uniform unit vector on C^n.
inline Vector random_unit_vector(int n, Rng& rng) {
  Vector v = random_gaussian_vector(n, rng);
  while (v.norm() < 1e-300) v = random_gaussian_vector(n, rng);
  return v / v.norm();
}

inline Matrix random_ginibre(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  for (int c = 0; c < cols; ++c) g.col(c) = random_gaussian_vector(rows, rng);
  return g;
}

/// GUE-like Hermitian operator scaled so typical eigenvalues are O(1).
inline HermitianOperator random_hermitian(const Dims& dims, Rng& rng) {
  const int d = dims.total();
  Matrix g = random_ginibre(d, d, rng);
  Matrix h = (g + g.adjoint()) / (2.0 * std::sqrt(static_cast<double>(d)));
  return {dims, h};
}

/// Trace-one PSD operator of the given rank (Wishart construction).
inline HermitianOperator random_density_matrix(const Dims& dims, int rank, Rng& rng) {
  const int d = dims.total();
  if (rank < 1 || rank > d) throw RejectedInput("random_density_matrix: rank out of range");
  Matrix g = random_ginibre(d, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return {dims, rho};
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix with
/// the phases of R's diagonal divided out.
inline Matrix random_unitary(int n, Rng& rng) {
  Matrix g = random_ginibre(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    const double m = std::abs(d);
    if (m > 0.0) q.col(i) *= d / m;
  }
  return q;
}

/// Product of independent Haar-random unitaries, one per subsystem.
inline Matrix random_local_unitary(const Dims& dims, Rng& rng) {
  std::vector<Matrix> factors;
  for (int n : dims.subsystems()) factors.push_back(random_unitary(n, rng));
  return tensor(factors);
}

}  // namespace ewcert
