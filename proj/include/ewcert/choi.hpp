#pragma once

#include "ewcert/certifier.hpp"
#include "ewcert/hermitian.hpp"
#include "ewcert/seesaw.hpp"

#include <functional>
#include <vector>

namespace ewcert {

/// Kraus operators K_j; the induced map is x -> sum_j K_j x K_j^dagger.
struct KrausSet {
  std::vector<Matrix> operators;
};

/// Linear map on n x n matrices, stored as its Choi matrix
///   C = (L (x) id)(|alpha><alpha|) = sum_ij L(E_ij) (x) E_ij,
/// with |alpha> = sum_i |i>|i> unnormalized. The map acts on tensor factor 1,
/// so C((a,i),(b,j)) = L(E_ij)(a,b) in the product basis of dims [n, n].
class OperatorMap {
 public:
  static constexpr double kHermiticityTol = 1e-12;

  static OperatorMap from_choi(int n, Matrix choi) {
    if (n < 2) throw RejectedInput("OperatorMap: dimension must be >= 2");
    if (choi.rows() != n * n || choi.cols() != n * n) {
      throw RejectedInput("OperatorMap: Choi matrix must be " + std::to_string(n * n) + "x" + std::to_string(n * n));
    }
    return OperatorMap(n, std::move(choi));
  }

  /// Evaluates `action` on every matrix unit E_ij.
  static OperatorMap from_action(int n, const std::function<Matrix(const Matrix&)>& action) {
    if (n < 2) throw RejectedInput("OperatorMap: dimension must be >= 2");
    Matrix choi = Matrix::Zero(n * n, n * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Matrix unit = Matrix::Zero(n, n);
        unit(i, j) = 1.0;
        const Matrix image = action(unit);
        if (image.rows() != n || image.cols() != n) throw RejectedInput("OperatorMap: action changes dimension");
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) choi(a * n + i, b * n + j) = image(a, b);
        }
      }
    }
    return OperatorMap(n, std::move(choi));
  }

  static OperatorMap from_kraus(const KrausSet& kraus) {
    if (kraus.operators.empty()) throw RejectedInput("OperatorMap: empty Kraus set");
    const auto n = static_cast<int>(kraus.operators.front().rows());
    for (const Matrix& k : kraus.operators) {
      if (k.rows() != n || k.cols() != n) throw RejectedInput("OperatorMap: Kraus operators must be square and equal-sized");
    }
    return from_action(n, [&](const Matrix& x) {
      Matrix y = Matrix::Zero(n, n);
      for (const Matrix& k : kraus.operators) y += k * x * k.adjoint();
      return y;
    });
  }

  static OperatorMap identity(int n) {
    return from_action(n, [](const Matrix& x) { return x; });
  }
  static OperatorMap transposition(int n) {
    return from_action(n, [](const Matrix& x) { return Matrix(x.transpose()); });
  }

  int in_dim() const { return n_; }
  int out_dim() const { return n_; }
  const Matrix& choi_matrix() const { return choi_; }
  bool hermiticity_preserving() const { return hermitian_; }

  /// Choi matrix as an observable on dims [n, n]; requires a Hermiticity-preserving map.
  HermitianOperator choi() const {
    require_hermiticity_preserving("OperatorMap::choi");
    return {Dims{n_, n_}, choi_};
  }

  Matrix apply(const Matrix& x) const {
    if (x.rows() != n_ || x.cols() != n_) throw RejectedInput("OperatorMap::apply: input has wrong size");
    Matrix y = Matrix::Zero(n_, n_);
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b) {
        Complex s = 0.0;
        for (int i = 0; i < n_; ++i) {
          for (int j = 0; j < n_; ++j) s += choi_(a * n_ + i, b * n_ + j) * x(i, j);
        }
        y(a, b) = s;
      }
    }
    return y;
  }

  void require_hermiticity_preserving(const char* where) const {
    if (!hermitian_) {
      const HermiticityDefect d = hermiticity_defect(choi_);
      throw RejectedInput(std::string(where) + ": map is not Hermiticity-preserving (Choi entry (" +
                          std::to_string(d.row) + "," + std::to_string(d.col) + ") off by " + std::to_string(d.value) +
                          ")");
    }
  }

 private:
  OperatorMap(int n, Matrix choi) : n_(n), choi_(std::move(choi)) {
    const double scale = std::max(1.0, choi_.cwiseAbs().maxCoeff());
    hermitian_ = hermiticity_defect(choi_).value <= kHermiticityTol * scale;
  }

  int n_;
  Matrix choi_;
  bool hermitian_ = false;
};

/// sum_i |i>|i>, left unnormalized (squared norm n).
inline Vector max_entangled_vector(int n) {
  if (n < 2) throw RejectedInput("max_entangled_vector: n must be >= 2");
  Vector v = Vector::Zero(n * n);
  for (int i = 0; i < n; ++i) v(i * n + i) = 1.0;
  return v;
}

/// (L (x) id)(|alpha><alpha|), computed block by block: the (i,j) block of
/// |alpha><alpha| in the second factor is E_ij on the first.
inline HermitianOperator witness_from_map(const OperatorMap& m) {
  m.require_hermiticity_preserving("witness_from_map");
  const int n = m.in_dim();
  const Vector alpha = max_entangled_vector(n);
  const Matrix projector = alpha * alpha.adjoint();
  Matrix w = Matrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // First-factor slice of |alpha><alpha| paired with E_ij on the second factor.
      Matrix slice(n, n);
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) slice(a, b) = projector(a * n + i, b * n + j);
      }
      const Matrix image = m.apply(slice);
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) w(a * n + i, b * n + j) = image(a, b);
      }
    }
  }
  return {Dims{n, n}, w};
}

/// Inverse of witness_from_map under the unnormalized |alpha> convention.
inline OperatorMap map_from_witness(const HermitianOperator& w) {
  const Dims& dims = w.dims();
  if (dims.count() != 2 || dims[0] != dims[1]) {
    throw RejectedInput("map_from_witness: expected dims [n,n], got " + dims.str());
  }
  return OperatorMap::from_choi(dims[0], w.matrix());
}

/// Choi's criterion: CP iff the Choi matrix is PSD within tol.
inline bool is_completely_positive(const OperatorMap& m, double tol = 1e-10) {
  if (tol < 0.0) throw RejectedInput("is_completely_positive: tolerance must be >= 0");
  if (!m.hermiticity_preserving()) return false;
  return is_psd(m.choi(), tol);
}

/// Positivity of the map is positivity of its Choi observable on pure
/// product states: <f (x) g|C|f (x) g> = <f|L(|conj g><conj g|)|f>. Decided by
/// the see-saw minimum against -zero_tol.
inline bool is_positive_map(const OperatorMap& m, const SeesawConfig& config = {}) {
  m.require_hermiticity_preserving("is_positive_map");
  return seesaw_minimize(m.choi(), config).min_value >= -config.zero_tol;
}

/// P + Q^{T_2}: nonnegative on every separable state when P and Q are PSD.
inline HermitianOperator decomposable_witness(const HermitianOperator& p, const HermitianOperator& q,
                                              double psd_tol = 1e-10) {
  p.require_same_dims(q, "decomposable_witness");
  if (p.dims().count() < 2) throw RejectedInput("decomposable_witness: needs at least two subsystems");
  if (!is_psd(p, psd_tol)) throw RejectedInput("decomposable_witness: P is not positive semidefinite");
  if (!is_psd(q, psd_tol)) throw RejectedInput("decomposable_witness: Q is not positive semidefinite");
  return p + partial_transpose(q, 1);
}

}  // namespace ewcert
