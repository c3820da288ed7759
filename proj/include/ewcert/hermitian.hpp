#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ewcert {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Thrown whenever an operation receives input that violates its contract
/// (dimension mismatch, non-Hermitian data, out-of-range index, ...).
class RejectedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Local dimensions n_1, ..., n_k of a multipartite Hilbert space.
class Dims {
 public:
  Dims(std::vector<int> subsystem_dims) : dims_(std::move(subsystem_dims)) {
    if (dims_.empty()) throw RejectedInput("Dims: at least one subsystem is required");
    for (int n : dims_) {
      if (n < 2) throw RejectedInput("Dims: every subsystem dimension must be >= 2, got " + std::to_string(n));
    }
    total_ = std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<>());
  }
  Dims(std::initializer_list<int> subsystem_dims) : Dims(std::vector<int>(subsystem_dims)) {}

  const std::vector<int>& subsystems() const { return dims_; }
  std::size_t count() const { return dims_.size(); }
  int operator[](std::size_t i) const { return dims_.at(i); }
  int total() const { return total_; }

  /// Product of the dimensions of subsystems [begin, end).
  int product(std::size_t begin, std::size_t end) const {
    int p = 1;
    for (std::size_t i = begin; i < end; ++i) p *= dims_[i];
    return p;
  }

  std::string str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < dims_.size(); ++i) os << (i ? "," : "") << dims_[i];
    os << ']';
    return os.str();
  }

  friend bool operator==(const Dims& a, const Dims& b) { return a.dims_ == b.dims_; }

 private:
  std::vector<int> dims_;
  int total_ = 1;
};

/// Largest entrywise deviation |m(i,j) - conj(m(j,i))| and where it occurs.
struct HermiticityDefect {
  double value = 0.0;
  Eigen::Index row = 0;
  Eigen::Index col = 0;
};

inline HermiticityDefect hermiticity_defect(const Matrix& m) {
  HermiticityDefect worst;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      const double d = std::abs(m(i, j) - std::conj(m(j, i)));
      if (d > worst.value) worst = {d, i, j};
    }
  }
  return worst;
}

/// A Hermitian operator on the space described by its Dims. The matrix is
/// checked at construction (entrywise tolerance 1e-12, scaled by the largest
/// entry when that exceeds one) and then symmetrized as (m + m^dagger) / 2.
class HermitianOperator {
 public:
  static constexpr double kHermiticityTol = 1e-12;

  HermitianOperator(Dims dims, Matrix m) : dims_(std::move(dims)), m_(std::move(m)) {
    if (m_.rows() != dims_.total() || m_.cols() != dims_.total()) {
      throw RejectedInput("HermitianOperator: matrix is " + std::to_string(m_.rows()) + "x" +
                          std::to_string(m_.cols()) + " but dims " + dims_.str() + " require " +
                          std::to_string(dims_.total()) + "x" + std::to_string(dims_.total()));
    }
    const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
    const HermiticityDefect defect = hermiticity_defect(m_);
    if (!(defect.value <= kHermiticityTol * scale)) {
      std::ostringstream os;
      os << "HermitianOperator: not Hermitian, worst entry (" << defect.row << "," << defect.col
         << ") deviates from the conjugate of (" << defect.col << "," << defect.row << ") by "
         << defect.value;
      throw RejectedInput(os.str());
    }
    Matrix sym = (m_ + m_.adjoint()) * 0.5;
    m_ = std::move(sym);
  }

  static HermitianOperator identity(const Dims& dims) {
    return {dims, Matrix::Identity(dims.total(), dims.total())};
  }
  static HermitianOperator zero(const Dims& dims) {
    return {dims, Matrix::Zero(dims.total(), dims.total())};
  }
  /// Rank-one projector |v><v| (v is used as given, not normalized).
  static HermitianOperator projector(const Dims& dims, const Vector& v) {
    return {dims, v * v.adjoint()};
  }

  const Dims& dims() const { return dims_; }
  const Matrix& matrix() const { return m_; }
  int dim() const { return dims_.total(); }
  double trace() const { return m_.trace().real(); }
  double max_abs() const { return m_.cwiseAbs().maxCoeff(); }

  HermitianOperator operator-() const { return {dims_, -m_}; }
  friend HermitianOperator operator*(double s, const HermitianOperator& a) { return {a.dims_, s * a.m_}; }
  friend HermitianOperator operator*(const HermitianOperator& a, double s) { return s * a; }
  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
    a.require_same_dims(b, "operator+");
    return {a.dims_, a.m_ + b.m_};
  }
  friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
    a.require_same_dims(b, "operator-");
    return {a.dims_, a.m_ - b.m_};
  }

  void require_same_dims(const HermitianOperator& other, const char* where) const {
    if (!(dims_ == other.dims_)) {
      throw RejectedInput(std::string(where) + ": dimension mismatch " + dims_.str() + " vs " +
                          other.dims_.str());
    }
  }

 private:
  Dims dims_;
  Matrix m_;
};

/// Hilbert-Schmidt inner product Tr(a^dagger b); real for Hermitian arguments.
inline double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) {
    throw RejectedInput("hs_inner: dimension mismatch " + std::to_string(a.dim()) + " vs " +
                        std::to_string(b.dim()));
  }
  return (a.matrix().array().conjugate() * b.matrix().array()).sum().real();
}

inline double hs_norm(const HermitianOperator& a) { return std::sqrt(std::max(0.0, hs_inner(a, a))); }

/// Kronecker product in list order.
inline Matrix tensor(std::span<const Matrix> factors) {
  if (factors.empty()) throw RejectedInput("tensor: empty factor list");
  Matrix out = factors.front();
  for (std::size_t f = 1; f < factors.size(); ++f) {
    const Matrix& b = factors[f];
    Matrix next(out.rows() * b.rows(), out.cols() * b.cols());
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      for (Eigen::Index j = 0; j < out.cols(); ++j) {
        next.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = out(i, j) * b;
      }
    }
    out = std::move(next);
  }
  return out;
}

inline Matrix tensor(std::initializer_list<Matrix> factors) {
  return tensor(std::span<const Matrix>(factors.begin(), factors.size()));
}

/// Tensor product of state vectors, first factor most significant.
inline Vector tensor_vectors(std::span<const Vector> factors) {
  if (factors.empty()) throw RejectedInput("tensor_vectors: empty factor list");
  Vector out = factors.front();
  for (std::size_t f = 1; f < factors.size(); ++f) {
    const Vector& b = factors[f];
    Vector next(out.size() * b.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) next.segment(i * b.size(), b.size()) = out(i) * b;
    out = std::move(next);
  }
  return out;
}

/// Places h on subsystem i (zero-based) with identities on every other factor.
inline HermitianOperator embed_local(const HermitianOperator& h, std::size_t i, const Dims& dims) {
  if (i >= dims.count()) {
    throw RejectedInput("embed_local: subsystem index " + std::to_string(i) + " out of range for dims " +
                        dims.str());
  }
  if (h.dim() != dims[i]) {
    throw RejectedInput("embed_local: operator has dimension " + std::to_string(h.dim()) +
                        " but subsystem " + std::to_string(i) + " has dimension " + std::to_string(dims[i]));
  }
  const int left = dims.product(0, i);
  const int right = dims.product(i + 1, dims.count());
  std::vector<Matrix> factors;
  if (left > 1) factors.push_back(Matrix::Identity(left, left));
  factors.push_back(h.matrix());
  if (right > 1) factors.push_back(Matrix::Identity(right, right));
  return {dims, tensor(factors)};
}

enum class PauliKind { X = 1, Y = 2, Z = 3 };

/// Generalized Pauli matrices on C^n supported on rows/columns l < m
/// (zero-based):
///   X(lm)_ij = d_li d_mj + d_lj d_mi
///   Y(lm)_ij = i d_li d_mj - i d_lj d_mi     (so entry (l,m) is +i)
///   Z(lm)_ij = d_li d_lj - d_mi d_mj
/// For n = 2 the Y entry signs are opposite to the textbook sigma_y.
inline HermitianOperator generalized_pauli(PauliKind kind, int l, int m, int n) {
  if (n < 2 || l < 0 || !(l < m) || m >= n) {
    throw RejectedInput("generalized_pauli: need 0 <= l < m < n, got l=" + std::to_string(l) +
                        " m=" + std::to_string(m) + " n=" + std::to_string(n));
  }
  Matrix s = Matrix::Zero(n, n);
  switch (kind) {
    case PauliKind::X:
      s(l, m) = 1.0;
      s(m, l) = 1.0;
      break;
    case PauliKind::Y:
      s(l, m) = Complex(0.0, 1.0);
      s(m, l) = Complex(0.0, -1.0);
      break;
    case PauliKind::Z:
      s(l, l) = 1.0;
      s(m, m) = -1.0;
      break;
  }
  return {Dims{n}, s};
}

/// Transposes tensor factor `subsystem` (zero-based) in the canonical product basis.
inline HermitianOperator partial_transpose(const HermitianOperator& a, std::size_t subsystem) {
  const Dims& dims = a.dims();
  if (subsystem >= dims.count()) {
    throw RejectedInput("partial_transpose: subsystem " + std::to_string(subsystem) +
                        " out of range for dims " + dims.str());
  }
  const int n = dims[subsystem];
  const int right = dims.product(subsystem + 1, dims.count());
  const int d = dims.total();
  const Matrix& src = a.matrix();
  Matrix out(d, d);
  // index = (left * n + s) * right + r
  for (int row = 0; row < d; ++row) {
    const int rs = (row / right) % n;
    for (int col = 0; col < d; ++col) {
      const int cs = (col / right) % n;
      const int new_row = row + (cs - rs) * right;
      const int new_col = col + (rs - cs) * right;
      out(new_row, new_col) = src(row, col);
    }
  }
  return {dims, out};
}

struct Eigenpair {
  double value = 0.0;
  Vector vector;
  /// Distance to the next eigenvalue; zero (within roundoff) means the
  /// minimum is degenerate and the vector is one of several choices.
  double gap = 0.0;
};

/// Fixes the global phase so the first entry of largest modulus is real positive.
inline void canonicalize_phase(Vector& v) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = std::abs(v(i));
    if (m > best_abs * (1.0 + 1e-12) + 1e-15) {
      best_abs = m;
      best = i;
    }
  }
  if (best_abs > 0.0) v *= std::conj(v(best)) / best_abs;
}

inline Eigen::VectorXd eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

inline Eigen::VectorXd eigenvalues(const HermitianOperator& a) { return eigenvalues(a.matrix()); }

/// Smallest eigenvalue of a Hermitian matrix with a unit eigenvector. Ties go
/// to the first column of the solver's ascending output.
inline Eigenpair min_eigen(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) throw std::runtime_error("min_eigen: eigensolver failed");
  Eigenpair out;
  out.value = solver.eigenvalues()(0);
  out.vector = solver.eigenvectors().col(0);
  out.vector.normalize();
  canonicalize_phase(out.vector);
  out.gap = m.rows() > 1 ? solver.eigenvalues()(1) - out.value : 0.0;
  return out;
}

inline Eigenpair min_eigen(const HermitianOperator& a) { return min_eigen(a.matrix()); }

inline double min_eigenvalue(const Matrix& m) { return eigenvalues(m)(0); }

inline bool is_psd(const HermitianOperator& a, double tol) {
  if (tol < 0.0) throw RejectedInput("is_psd: tolerance must be non-negative");
  return eigenvalues(a)(0) >= -tol;
}

/// Ordered Hermitian operators on one Dims, optionally flagged orthogonal.
class OperatorBasis {
 public:
  static constexpr double kOrthogonalityTol = 1e-10;

  OperatorBasis(std::vector<HermitianOperator> elements, bool orthogonal = false)
      : elements_(std::move(elements)), orthogonal_(orthogonal) {
    for (std::size_t i = 1; i < elements_.size(); ++i) {
      elements_[i].require_same_dims(elements_[0], "OperatorBasis");
    }
    if (orthogonal_) {
      for (std::size_t i = 0; i < elements_.size(); ++i) {
        for (std::size_t j = i + 1; j < elements_.size(); ++j) {
          if (std::abs(hs_inner(elements_[i], elements_[j])) > kOrthogonalityTol) {
            throw RejectedInput("OperatorBasis: elements " + std::to_string(i) + " and " + std::to_string(j) +
                                " are flagged orthogonal but are not");
          }
        }
      }
    }
  }

  const std::vector<HermitianOperator>& elements() const { return elements_; }
  bool orthogonal() const { return orthogonal_; }
  std::size_t size() const { return elements_.size(); }

 private:
  std::vector<HermitianOperator> elements_;
  bool orthogonal_;
};

/// Incrementally maintained HS-orthonormal set. Each insertion runs modified
/// Gram-Schmidt twice; a candidate whose residual norm is at or below
/// drop_tol is rejected.
class OrthonormalSet {
 public:
  explicit OrthonormalSet(double drop_tol = 1e-10) : drop_tol_(drop_tol) {}

  /// Residual of `m` after removing its component along the current span.
  Matrix residual(const Matrix& m) const {
    Matrix r = m;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Matrix& q : basis_) r -= (q.array().conjugate() * r.array()).sum().real() * q;
    }
    return r;
  }

  /// Returns true if `m` extended the span.
  bool insert(const Matrix& m) {
    Matrix r = residual(m);
    const double norm = r.norm();
    if (!(norm > drop_tol_)) return false;
    basis_.push_back(r / norm);
    return true;
  }

  Matrix project(const Matrix& m) const {
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    for (const Matrix& q : basis_) out += (q.array().conjugate() * m.array()).sum().real() * q;
    return out;
  }

  std::size_t size() const { return basis_.size(); }
  const std::vector<Matrix>& vectors() const { return basis_; }

 private:
  double drop_tol_;
  std::vector<Matrix> basis_;
};

/// HS-orthogonal projection of `a` onto the real span of `basis`. Dependent
/// elements are absorbed by Gram-Schmidt with drop threshold 1e-10.
inline HermitianOperator project_onto_subspace(const HermitianOperator& a, const OperatorBasis& basis) {
  OrthonormalSet span(1e-10);
  for (const HermitianOperator& b : basis.elements()) {
    a.require_same_dims(b, "project_onto_subspace");
    span.insert(b.matrix());
  }
  return {a.dims(), span.project(a.matrix())};
}

/// Numerical rank of a set of operators, counting singular values above
/// rel_tol times the largest one.
inline int numerical_rank(std::span<const HermitianOperator> ops, double rel_tol = 1e-9) {
  if (ops.empty()) return 0;
  const Eigen::Index d2 = ops.front().matrix().size();
  Eigen::MatrixXd stacked(2 * d2, static_cast<Eigen::Index>(ops.size()));
  for (std::size_t c = 0; c < ops.size(); ++c) {
    const Matrix& m = ops[c].matrix();
    if (m.size() != d2) throw RejectedInput("numerical_rank: operators of different sizes");
    for (Eigen::Index k = 0; k < d2; ++k) {
      stacked(k, c) = m(k).real();
      stacked(d2 + k, c) = m(k).imag();
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * s(0)) ++rank;
  }
  return rank;
}

/// i[p, t] = i(pt - tp), Hermitian whenever p and t are.
inline HermitianOperator i_commutator(const HermitianOperator& p, const HermitianOperator& t) {
  p.require_same_dims(t, "i_commutator");
  const Complex i(0.0, 1.0);
  return {p.dims(), i * (p.matrix() * t.matrix() - t.matrix() * p.matrix())};
}

}  // namespace ewcert
