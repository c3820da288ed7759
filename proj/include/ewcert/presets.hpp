#pragma once

#include "ewcert/choi.hpp"
#include "ewcert/hermitian.hpp"
#include "ewcert/random.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace ewcert {

/// Flip operator on C^n (x) C^n: |i>|j> -> |j>|i>.
inline HermitianOperator swap_operator(int n) {
  Matrix s = Matrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) s(j * n + i, i * n + j) = 1.0;
  }
  return {Dims{n, n}, s};
}

/// (|00> + |11>) / sqrt 2 projector, partially transposed on the second qubit.
inline HermitianOperator bell_pt_witness() {
  Vector psi = max_entangled_vector(2) / std::sqrt(2.0);
  return partial_transpose(HermitianOperator::projector(Dims{2, 2}, psi), 1);
}

/// Splits a total dimension into local dimensions: m*m becomes [m, m], other
/// composites [f, d/f] with f the smallest factor, primes stay [d].
inline Dims default_dims_for(int d) {
  if (d < 2) throw RejectedInput("preset dimension must be >= 2");
  for (int m = 2; m * m <= d; ++m) {
    if (m * m == d) return Dims{m, m};
  }
  for (int f = 2; f * f <= d; ++f) {
    if (d % f == 0) return Dims{f, d / f};
  }
  return Dims{d};
}

/// Random decomposable observable s P + (|psi><psi|)^{T_2}: P a rank-one
/// random projector with weight s in [0, 0.5), |psi> a Haar-random pure
/// state. Nonnegative on separable states and usually not PSD.
inline HermitianOperator random_decomposable_witness(const Dims& dims, Rng& rng) {
  if (dims.count() != 2) throw RejectedInput("random_decomposable_witness: needs two subsystems");
  std::uniform_real_distribution<double> weight(0.0, 0.5);
  const double s = weight(rng);
  const HermitianOperator p = HermitianOperator::projector(dims, random_unit_vector(dims.total(), rng));
  const HermitianOperator q = HermitianOperator::projector(dims, random_unit_vector(dims.total(), rng));
  return decomposable_witness(s * p, q);
}

/// Named fixtures: swap-NxN, bell-pt-2x2, decomposable-random, identity-D,
/// negident-D. `dims` overrides the default layout of identity-D,
/// negident-D and decomposable-random (default [2,2]).
inline HermitianOperator make_preset(const std::string& name, std::uint64_t seed,
                                     const std::optional<Dims>& dims = std::nullopt) {
  auto parse_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || v < 2) throw RejectedInput("unknown preset '" + name + "'");
    return v;
  };
  auto with_dims = [&](int d) {
    if (!dims) return default_dims_for(d);
    if (dims->total() != d) throw RejectedInput("preset '" + name + "' does not match dims " + dims->str());
    return *dims;
  };

  if (name == "bell-pt-2x2") return bell_pt_witness();
  if (name == "decomposable-random") {
    Rng rng(seed);
    return random_decomposable_witness(dims.value_or(Dims{2, 2}), rng);
  }
  if (name.rfind("swap-", 0) == 0) {
    const std::string rest = name.substr(5);
    const auto x = rest.find('x');
    if (x == std::string::npos) throw RejectedInput("unknown preset '" + name + "'");
    const int n = parse_int(rest.substr(0, x));
    if (parse_int(rest.substr(x + 1)) != n) throw RejectedInput("swap preset needs equal sizes: '" + name + "'");
    return swap_operator(n);
  }
  if (name.rfind("identity-", 0) == 0) return HermitianOperator::identity(with_dims(parse_int(name.substr(9))));
  if (name.rfind("negident-", 0) == 0) return -HermitianOperator::identity(with_dims(parse_int(name.substr(9))));
  throw RejectedInput("unknown preset '" + name + "'");
}

}  // namespace ewcert
