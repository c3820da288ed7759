#include "test_support.hpp"

using namespace ewcert;
using namespace ewcert::testing;

namespace {

SeesawConfig zs_config(std::uint64_t seed, int starts = 32) {
  SeesawConfig c;
  c.seed = seed;
  c.multistarts = starts;
  return c;
}

// Local unitary conjugation U a U^dagger.
HermitianOperator conjugate(const HermitianOperator& a, const Matrix& u) {
  return {a.dims(), u * a.matrix() * u.adjoint()};
}

}  // namespace

TEST(FindZeroStates, SwapZerosHaveOrthogonalFactors) {
  const auto zs = find_zero_states(swap4(), zs_config(1, 64), false);
  ASSERT_FALSE(zs.states.empty());
  for (const auto& p : zs.states) {
    EXPECT_LE(std::abs(expectation(swap4(), p)), 1e-7);
    EXPECT_NEAR(fidelity(p.factor(0), p.factor(1)), 0.0, 1e-7);
  }
  for (std::size_t i = 0; i < zs.states.size(); ++i) {
    for (std::size_t j = i + 1; j < zs.states.size(); ++j) {
      EXPECT_LT(product_fidelity(zs.states[i], zs.states[j]), 1.0 - 1e-6);
    }
  }
}

TEST(FindZeroStates, SwapCanonicalPairsAreZerosWithTangentCondition) {
  // The six canonical orthogonal pairs all lie on the zero set and satisfy
  // the tangent condition; the reduced set found numerically spans them.
  const std::vector<PureProductState> canonical{
      product({ket0(), ket1()}),         product({ket1(), ket0()}),
      product({ket_plus(), ket_minus()}), product({ket_minus(), ket_plus()}),
      product({ket_plus_i(), ket_minus_i()}), product({ket_minus_i(), ket_plus_i()})};
  const auto zs = find_zero_states(swap4(), zs_config(2, 64), true);
  std::vector<HermitianOperator> span;
  for (const auto& p : zs.states) span.push_back(product_projector(p));
  const OperatorBasis basis(span);
  for (const auto& p : canonical) {
    EXPECT_NEAR(expectation(swap4(), p), 0.0, 1e-15);
    EXPECT_TRUE(tangent_condition(swap4(), p).holds);
    const auto proj = product_projector(p);
    EXPECT_LT(hs_norm(proj - project_onto_subspace(proj, basis)), 1e-6);
  }
  EXPECT_TRUE(zs.reduced);
  EXPECT_LE(zs.states.size(), zs.discovered);
}

TEST(FindZeroStates, Examples) {
  EXPECT_TRUE(find_zero_states(HermitianOperator::identity(Dims{2, 2}), zs_config(3)).states.empty());

  const HermitianOperator q(Dims{2}, ket1() * ket1().adjoint());
  const auto zs = find_zero_states(q, zs_config(4));
  ASSERT_EQ(zs.states.size(), 1u);
  EXPECT_NEAR(fidelity(zs.states[0].factor(0), ket0()), 1.0, 1e-12);

  EXPECT_THROW(find_zero_states(-HermitianOperator::identity(Dims{2}), zs_config(5)), RejectedInput);
}

TEST(FindZeroStates, ClosureProbingAddsSuperpositions) {
  // |1><1| (x) I vanishes on every (|0>, f). Two endpoints differing only in
  // f are handed over directly; their superpositions must be probed.
  const HermitianOperator a(Dims{2, 2}, tensor({Matrix(ket1() * ket1().adjoint()), Matrix(Matrix::Identity(2, 2))}));
  std::vector<StartRecord> starts;
  for (const Vector& f : {ket0(), ket1()}) {
    const auto p = product({ket0(), f});
    starts.push_back(StartRecord{0, p, expectation(a, p), true, 1, 0.0, {}});
  }
  const SeesawResult run{0.0, starts[0].endpoint, 0, starts};
  const auto zs = find_zero_states(a, run, zs_config(6), false);
  // The midpoint sample t = pi/2 reproduces the second endpoint.
  EXPECT_EQ(zs.closure_added, static_cast<std::size_t>(kClosureSamples - 1));
  EXPECT_EQ(zs.states.size(), 1u + kClosureSamples);
  for (const auto& p : zs.states) {
    EXPECT_LE(std::abs(expectation(a, p)), 1e-7);
    EXPECT_TRUE(tangent_condition(a, p).holds);
  }
  EXPECT_EQ(find_zero_states(a, run, zs_config(6), true).states.size(), 3u);
}

TEST(SignConsistency, Examples) {
  const HermitianOperator sz(Dims{2}, pauli_z());
  const std::vector<PureProductState> pair{product({ket0()}), product({ket1()})};
  const auto bad = check_sign_consistency(sz, pair);
  EXPECT_FALSE(bad.consistent);
  ASSERT_TRUE(bad.offending.has_value());
  EXPECT_EQ(bad.offending->first, 0u);
  EXPECT_EQ(bad.offending->second, 1u);

  Rng rng(50);
  std::vector<PureProductState> samples;
  for (int t = 0; t < 200; ++t) samples.push_back(random_product_state(Dims{2, 2}, rng));
  EXPECT_TRUE(check_sign_consistency(swap4(), samples).consistent);
  EXPECT_TRUE(check_sign_consistency(HermitianOperator::identity(Dims{2, 2}), samples).consistent);
  EXPECT_THROW(check_sign_consistency(swap4(), std::vector<PureProductState>{}), RejectedInput);
}

TEST(Verdict, StringRoundTrip) {
  for (Verdict v : {Verdict::EntanglementWitness, Verdict::PositiveOnSeparableButPsd, Verdict::NotPositiveOnSeparable,
                    Verdict::Indeterminate}) {
    EXPECT_EQ(verdict_from_string(to_string(v)), v);
  }
  EXPECT_THROW(verdict_from_string("MAYBE"), RejectedInput);
}

TEST(Certify, SwapIsWitness) {
  const auto cert = certify(swap4(), quick_config(0, 64));
  EXPECT_EQ(cert.verdict, Verdict::EntanglementWitness);
  EXPECT_TRUE(cert.condition1.holds);
  EXPECT_NEAR(cert.condition1.max_value, 1.0, 1e-8);
  EXPECT_TRUE(cert.condition2.holds);
  EXPECT_TRUE(cert.condition3.holds);
  EXPECT_NEAR(cert.condition3.min_eigenvalue, -1.0, 1e-10);
  const auto singlet = HermitianOperator::projector(Dims{2, 2}, cert.condition3.eigenvector);
  EXPECT_NEAR(hs_inner(swap4(), singlet), -1.0, 1e-10);
  EXPECT_NEAR(fidelity(cert.condition3.eigenvector, ket({0.0, kInvSqrt2, -kInvSqrt2, 0.0})), 1.0, 1e-12);
}

TEST(Certify, ControlsAndEdgeCases) {
  EXPECT_EQ(certify(HermitianOperator::identity(Dims{2, 2}), quick_config(1)).verdict,
            Verdict::PositiveOnSeparableButPsd);
  EXPECT_EQ(certify(-HermitianOperator::identity(Dims{2, 2}), quick_config(2)).verdict,
            Verdict::NotPositiveOnSeparable);

  // Indefinite on product states: condition 2 fails with a crossing zero state.
  const HermitianOperator zi(Dims{2, 2}, tensor({pauli_z(), Matrix(Matrix::Identity(2, 2))}));
  const auto c = certify(zi, quick_config(3));
  EXPECT_EQ(c.verdict, Verdict::NotPositiveOnSeparable);
  EXPECT_FALSE(c.condition2.holds);
  ASSERT_TRUE(c.condition2.worst_state.has_value());
  EXPECT_NEAR(expectation(zi, *c.condition2.worst_state), 0.0, 1e-9);
  EXPECT_GT(c.condition2.worst_violation, 1e-8);

  // Vanishing identically on product states cannot be decided.
  const auto zero = certify(HermitianOperator::zero(Dims{2, 2}), quick_config(4));
  EXPECT_EQ(zero.verdict, Verdict::Indeterminate);
  EXPECT_FALSE(zero.condition1.holds);
}

TEST(Certify, RejectsBadConfig) {
  CertifierConfig c;
  c.tangent_tol = 0.0;
  EXPECT_THROW(certify(swap4(), c), RejectedInput);
}

TEST(Certify, EwVerdictImpliesTangentConditionEverywhere) {
  Rng rng(52);
  int checked = 0;
  for (int t = 0; t < 10; ++t) {
    const auto base = random_decomposable_witness(Dims{2, 2}, rng);
    const auto cert = certify(base, quick_config(60 + t));
    if (cert.verdict != Verdict::EntanglementWitness) continue;
    ++checked;
    for (const auto& p : cert.condition2.zero_states) EXPECT_TRUE(tangent_condition(base, p, 1e-8).holds);
  }
  const auto sw = certify(swap_operator(3), quick_config(70));
  ASSERT_EQ(sw.verdict, Verdict::EntanglementWitness);
  for (const auto& p : sw.condition2.zero_states) EXPECT_TRUE(tangent_condition(swap_operator(3), p, 1e-8).holds);
  EXPECT_GT(checked, 0);
}

TEST(Certify, TangentPassImpliesNoSignChange) {
  // Randomized falsification of sufficiency: when every discovered zero state
  // passes and some expectation is positive, 500 random product states never
  // see a negative expectation.
  Rng rng(53);
  for (int t = 0; t < 10; ++t) {
    auto a = random_hermitian(Dims{2, 2}, rng);
    const double shift = seesaw_minimize(a, zs_config(80 + t)).min_value;
    a = a - shift * HermitianOperator::identity(Dims{2, 2});
    const auto cert = certify(a, quick_config(80 + t));
    if (!(cert.condition1.holds && cert.condition2.holds)) continue;
    std::vector<PureProductState> samples;
    for (int s = 0; s < 500; ++s) samples.push_back(random_product_state(Dims{2, 2}, rng));
    for (const auto& p : samples) EXPECT_GE(expectation(a, p), -1e-7);
    EXPECT_TRUE(check_sign_consistency(a, samples).consistent);
  }
}

TEST(Certify, ScalingInvariance) {
  for (const auto& a : {swap4(), bell_pt_witness(), HermitianOperator::identity(Dims{2, 2})}) {
    const auto base = certify(a, quick_config(90));
    for (double lambda : {1e-3, 1.0, 1e3}) {
      const auto scaled = certify(lambda * a, quick_config(90));
      EXPECT_EQ(scaled.verdict, base.verdict) << "lambda " << lambda;
      ASSERT_EQ(scaled.condition2.zero_states.size(), base.condition2.zero_states.size());
      for (std::size_t k = 0; k < base.condition2.zero_states.size(); ++k) {
        EXPECT_GT(product_fidelity(scaled.condition2.zero_states[k], base.condition2.zero_states[k]), 1.0 - 1e-6);
      }
    }
  }
}

TEST(Certify, LocalUnitaryCovariance) {
  Rng rng(54);
  for (const auto& a : {swap4(), bell_pt_witness(), -HermitianOperator::identity(Dims{2, 2})}) {
    const auto base = certify(a, quick_config(100));
    for (int t = 0; t < 5; ++t) {
      const auto rotated = certify(conjugate(a, random_local_unitary(a.dims(), rng)), quick_config(101 + t));
      EXPECT_EQ(rotated.verdict, base.verdict);
      EXPECT_NEAR(rotated.min_product_expectation, base.min_product_expectation, 1e-8);
    }
  }
}

TEST(Certify, ReducedAndFullZeroSetsAgree) {
  CertifierConfig reduced = quick_config(110);
  CertifierConfig full = reduced;
  full.reduce_zero_states = false;
  for (const auto& a : {swap4(), swap_operator(3), bell_pt_witness()}) {
    const auto r = certify(a, reduced);
    const auto f = certify(a, full);
    EXPECT_EQ(r.verdict, f.verdict);
    EXPECT_LE(r.condition2.zero_state_count, f.condition2.zero_state_count);
  }
}

TEST(Certify, PptWitnessOnTwoQutritState) {
  // Entangled rank-one state on [2,3]; its PT-projector witness detects it.
  const Dims dims{2, 3};
  Vector psi = Vector::Zero(6);
  psi(0) = psi(4) = kInvSqrt2;
  const auto rho = HermitianOperator::projector(dims, psi);
  const auto lowest = min_eigen(partial_transpose(rho, 1));
  ASSERT_LT(lowest.value, -1e-9);
  const auto w = partial_transpose(HermitianOperator::projector(dims, lowest.vector), 1);
  EXPECT_NEAR(hs_inner(w, rho), lowest.value, 1e-12);
  EXPECT_EQ(certify(w, quick_config(120)).verdict, Verdict::EntanglementWitness);
}
