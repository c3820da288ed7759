#pragma once

#include "ewcert/hermitian.hpp"
#include "ewcert/product_states.hpp"

#include <span>
#include <vector>

namespace ewcert {

/// Traceless Hermitian basis of C^n built from the generalized Pauli
/// matrices. Candidates are taken in (l,m) order as X, Y, Z; a candidate is
/// kept, unmodified, only if it is independent of the ones already kept, so
/// the redundant Z(lm) are dropped and n^2 - 1 elements remain.
inline std::vector<HermitianOperator> local_traceless_basis(int n) {
  std::vector<HermitianOperator> out;
  OrthonormalSet span(1e-10);
  for (int l = 0; l < n; ++l) {
    for (int m = l + 1; m < n; ++m) {
      for (PauliKind kind : {PauliKind::X, PauliKind::Y, PauliKind::Z}) {
        HermitianOperator s = generalized_pauli(kind, l, m, n);
        if (span.insert(s.matrix())) out.push_back(std::move(s));
      }
    }
  }
  return out;
}

/// Generators of local unitaries: traceless operators on each subsystem,
/// embedded with identities elsewhere, grouped by subsystem.
struct LocalGeneratorBasis {
  Dims dims;
  std::vector<HermitianOperator> generators;
  /// subsystem[j] is the subsystem that generators[j] acts on.
  std::vector<std::size_t> subsystem;
};

inline LocalGeneratorBasis local_generator_basis(const Dims& dims) {
  LocalGeneratorBasis out{dims, {}, {}};
  for (std::size_t i = 0; i < dims.count(); ++i) {
    for (const HermitianOperator& h : local_traceless_basis(dims[i])) {
      out.generators.push_back(embed_local(h, i, dims));
      out.subsystem.push_back(i);
    }
  }
  return out;
}

/// sum_i 2 (n_i - 1): the real dimension of the product-state manifold.
inline int expected_tangent_rank(const Dims& dims) {
  int r = 0;
  for (int n : dims.subsystems()) r += 2 * (n - 1);
  return r;
}

/// The operators i[P, t] for every local generator t, where P is the
/// projector of the base point.
struct TangentSpanningSet {
  PureProductState base_point;
  std::vector<HermitianOperator> elements;
  int rank = 0;
};

/// Rank threshold: singular values above 1e-9 of the largest.
inline TangentSpanningSet tangent_spanning_set(const PureProductState& p) {
  const HermitianOperator proj = product_projector(p);
  const LocalGeneratorBasis tau = local_generator_basis(p.dims());
  TangentSpanningSet out{p, {}, 0};
  out.elements.reserve(tau.generators.size());
  for (const HermitianOperator& t : tau.generators) out.elements.push_back(i_commutator(proj, t));
  out.rank = numerical_rank(out.elements, 1e-9);
  return out;
}

struct TangentCheck {
  bool holds = true;
  double worst_violation = 0.0;
};

/// Whether every tangent direction at p is HS-orthogonal to a, within tol.
inline TangentCheck tangent_condition(const HermitianOperator& a, const PureProductState& p, double tol = 1e-8) {
  if (!(tol > 0.0)) throw RejectedInput("tangent_condition: tolerance must be positive");
  if (!(a.dims() == p.dims())) {
    throw RejectedInput("tangent_condition: operator dims " + a.dims().str() + " vs state dims " + p.dims().str());
  }
  TangentCheck out;
  for (const HermitianOperator& c : tangent_spanning_set(p).elements) {
    out.worst_violation = std::max(out.worst_violation, std::abs(hs_inner(c, a)));
  }
  out.holds = out.worst_violation <= tol;
  return out;
}

/// Greedy subset whose projectors are linearly independent and span every
/// input projector: a state is kept iff its projector leaves a residual of HS
/// norm above `tol` after projection onto the kept ones.
inline std::vector<PureProductState> reduce_independent(std::span<const PureProductState> states,
                                                        double tol = 1e-8) {
  std::vector<PureProductState> kept;
  OrthonormalSet span(tol);
  for (const PureProductState& p : states) {
    if (!kept.empty() && !(p.dims() == kept.front().dims())) {
      throw RejectedInput("reduce_independent: states have different dims");
    }
    if (span.insert(product_projector(p).matrix())) kept.push_back(p);
  }
  return kept;
}

}  // namespace ewcert
