#pragma once

#include "ewcert/hermitian.hpp"
#include "ewcert/random.hpp"

#include <cstdint>
#include <vector>

namespace ewcert {

/// Pure product state |e1> (x) ... (x) |ek>, one unit vector per subsystem.
class PureProductState {
 public:
  static constexpr double kNormTol = 1e-10;

  PureProductState(Dims dims, std::vector<Vector> factors) : dims_(std::move(dims)), factors_(std::move(factors)) {
    if (factors_.size() != dims_.count()) {
      throw RejectedInput("PureProductState: " + std::to_string(factors_.size()) + " factors for " +
                          std::to_string(dims_.count()) + " subsystems");
    }
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (factors_[i].size() != dims_[i]) {
        throw RejectedInput("PureProductState: factor " + std::to_string(i) + " has length " +
                            std::to_string(factors_[i].size()) + ", expected " + std::to_string(dims_[i]));
      }
      if (std::abs(factors_[i].norm() - 1.0) > kNormTol) {
        throw RejectedInput("PureProductState: factor " + std::to_string(i) + " has norm " +
                            std::to_string(factors_[i].norm()));
      }
    }
  }

  /// Normalizes each factor before validating; rejects zero vectors.
  static PureProductState normalized(Dims dims, std::vector<Vector> factors) {
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const double n = factors[i].norm();
      if (!(n > 1e-300)) throw RejectedInput("PureProductState: factor " + std::to_string(i) + " is zero");
      factors[i] /= n;
    }
    return {std::move(dims), std::move(factors)};
  }

  const Dims& dims() const { return dims_; }
  const std::vector<Vector>& factors() const { return factors_; }
  const Vector& factor(std::size_t i) const { return factors_.at(i); }

  /// The full state vector in the canonical product basis.
  Vector vector() const { return tensor_vectors(factors_); }

 private:
  Dims dims_;
  std::vector<Vector> factors_;
};

/// |<e|f>|^2 for unit vectors.
inline double fidelity(const Vector& e, const Vector& f) { return std::norm(e.dot(f)); }

/// Product of per-factor fidelities, i.e. |<p|q>|^2 of the full vectors.
inline double product_fidelity(const PureProductState& p, const PureProductState& q) {
  if (!(p.dims() == q.dims())) throw RejectedInput("product_fidelity: dimension mismatch");
  double f = 1.0;
  for (std::size_t i = 0; i < p.factors().size(); ++i) f *= fidelity(p.factor(i), q.factor(i));
  return f;
}

/// Physical equality: every factor agrees up to a global phase.
inline bool same_state(const PureProductState& p, const PureProductState& q, double tol = 1e-9) {
  if (!(p.dims() == q.dims())) return false;
  for (std::size_t i = 0; i < p.factors().size(); ++i) {
    if (!(fidelity(p.factor(i), q.factor(i)) > 1.0 - tol)) return false;
  }
  return true;
}

inline HermitianOperator product_projector(const PureProductState& p) {
  return HermitianOperator::projector(p.dims(), p.vector());
}

/// <e|a|e> for the product vector e, computed without forming the projector.
inline double expectation(const HermitianOperator& a, const PureProductState& p) {
  if (!(a.dims() == p.dims())) {
    throw RejectedInput("expectation: operator dims " + a.dims().str() + " vs state dims " + p.dims().str());
  }
  const Vector v = p.vector();
  return v.dot(a.matrix() * v).real();
}

/// Haar-uniform factors drawn from `rng`.
inline PureProductState random_product_state(const Dims& dims, Rng& rng) {
  std::vector<Vector> factors;
  factors.reserve(dims.count());
  for (int n : dims.subsystems()) factors.push_back(random_unit_vector(n, rng));
  return {dims, std::move(factors)};
}

/// Deterministic under a fixed seed.
inline PureProductState random_product_state(const Dims& dims, std::uint64_t seed) {
  Rng rng(seed);
  return random_product_state(dims, rng);
}

/// Convex mixture of pure product states.
class SeparableEnsemble {
 public:
  static constexpr double kLoadTol = 1e-6;

  /// Weights summing to one within 1e-6 are renormalized; anything else is rejected.
  SeparableEnsemble(std::vector<double> weights, std::vector<PureProductState> members)
      : weights_(std::move(weights)), members_(std::move(members)) {
    if (members_.empty()) throw RejectedInput("SeparableEnsemble: no members");
    if (weights_.size() != members_.size()) {
      throw RejectedInput("SeparableEnsemble: " + std::to_string(weights_.size()) + " weights for " +
                          std::to_string(members_.size()) + " members");
    }
    double sum = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0)) throw RejectedInput("SeparableEnsemble: negative weight " + std::to_string(w));
      sum += w;
    }
    if (std::abs(sum - 1.0) > kLoadTol) {
      throw RejectedInput("SeparableEnsemble: weights sum to " + std::to_string(sum));
    }
    for (double& w : weights_) w /= sum;
    for (const auto& m : members_) {
      if (!(m.dims() == members_.front().dims())) throw RejectedInput("SeparableEnsemble: mixed dims");
    }
  }

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<PureProductState>& members() const { return members_; }
  const Dims& dims() const { return members_.front().dims(); }

  HermitianOperator density_matrix() const {
    const int d = dims().total();
    Matrix rho = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < members_.size(); ++i) {
      const Vector v = members_[i].vector();
      rho += weights_[i] * (v * v.adjoint());
    }
    return {dims(), rho};
  }

 private:
  std::vector<double> weights_;
  std::vector<PureProductState> members_;
};

// Qubit Bloch picture, with the textbook Pauli matrices.

struct BlochVector {
  double h1 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;

  double norm() const { return std::sqrt(h1 * h1 + h2 * h2 + h3 * h3); }
};

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}
inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

/// (I + h . sigma) / 2
inline HermitianOperator qubit_state_from_bloch(const BlochVector& v) {
  Matrix m = 0.5 * (Matrix::Identity(2, 2) + v.h1 * pauli_x() + v.h2 * pauli_y() + v.h3 * pauli_z());
  return {Dims{2}, m};
}

/// Inverse of qubit_state_from_bloch; requires a trace-one 2x2 Hermitian.
inline BlochVector bloch_from_qubit_state(const HermitianOperator& h) {
  if (h.dim() != 2) throw RejectedInput("bloch_from_qubit_state: operator is not 2x2");
  if (std::abs(h.trace() - 1.0) > 1e-10) {
    throw RejectedInput("bloch_from_qubit_state: trace is " + std::to_string(h.trace()) + ", expected 1");
  }
  const Matrix& m = h.matrix();
  // Tr(h sigma_j) = h_j for trace-one h.
  return {(m * pauli_x()).trace().real(), (m * pauli_y()).trace().real(), (m * pauli_z()).trace().real()};
}

}  // namespace ewcert
