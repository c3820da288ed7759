#include "test_support.hpp"

using namespace ewcert;
using namespace ewcert::testing;

namespace {

Matrix unit(int n, int i, int j) {
  Matrix e = Matrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

OperatorMap random_hp_map(int n, Rng& rng) {
  return OperatorMap::from_choi(n, random_hermitian(Dims{n, n}, rng).matrix());
}

}  // namespace

TEST(MaxEntangledVector, Examples) {
  EXPECT_EQ(max_entangled_vector(2), ket({1.0, 0.0, 0.0, 1.0}));
  EXPECT_EQ(max_entangled_vector(3)(4), Complex(1.0));
  for (int n = 2; n <= 5; ++n) EXPECT_DOUBLE_EQ(max_entangled_vector(n).squaredNorm(), n);
  EXPECT_THROW(max_entangled_vector(1), RejectedInput);
}

TEST(WitnessFromMap, Examples) {
  const Vector alpha = max_entangled_vector(2);
  EXPECT_EQ(witness_from_map(OperatorMap::identity(2)).matrix(), Matrix(alpha * alpha.adjoint()));
  // (T (x) 1) sum_ij |ii><jj| = sum_ij |ji><ij|, the flip.
  EXPECT_LT(max_abs_diff(witness_from_map(OperatorMap::transposition(2)).matrix(), swap4_literal()), 1e-12);
  const auto scaled = OperatorMap::from_action(3, [](const Matrix& x) { return Matrix(2.5 * x); });
  const Vector a3 = max_entangled_vector(3);
  EXPECT_LT(max_abs_diff(witness_from_map(scaled).matrix(), 2.5 * a3 * a3.adjoint()), 1e-15);
}

TEST(WitnessFromMap, RejectsNonHermiticityPreserving) {
  const auto m = OperatorMap::from_action(2, [](const Matrix& x) { return Matrix(Complex(0.0, 1.0) * x); });
  EXPECT_FALSE(m.hermiticity_preserving());
  EXPECT_THROW(witness_from_map(m), RejectedInput);
  EXPECT_FALSE(is_completely_positive(m));
}

TEST(OperatorMap, ChoiLayoutMatchesAction) {
  // C((a,i),(b,j)) = L(E_ij)(a,b).
  Rng rng(60);
  const auto m = random_hp_map(3, rng);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Matrix img = m.apply(unit(3, i, j));
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) EXPECT_EQ(img(a, b), m.choi_matrix()(a * 3 + i, b * 3 + j));
    }
}

TEST(MapFromWitness, Examples) {
  const auto t = map_from_witness(swap4());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_LT(max_abs_diff(t.apply(unit(2, i, j)), unit(2, j, i)), 1e-15);

  const Vector alpha = max_entangled_vector(3);
  const auto id = map_from_witness(HermitianOperator(Dims{3, 3}, alpha * alpha.adjoint()));
  Rng rng(61);
  const Matrix x = random_ginibre(3, 3, rng);
  EXPECT_LT(max_abs_diff(id.apply(x), x), 1e-14);

  EXPECT_THROW(map_from_witness(HermitianOperator::identity(Dims{2, 3})), RejectedInput);
  EXPECT_THROW(map_from_witness(HermitianOperator::identity(Dims{2, 2, 2})), RejectedInput);
}

TEST(ChoiJamiolkowski, Bijection) {
  Rng rng(62);
  for (int n : {2, 3}) {
    for (int t = 0; t < 25; ++t) {
      const auto w = random_hermitian(Dims{n, n}, rng);
      EXPECT_LT(max_abs_diff(witness_from_map(map_from_witness(w)).matrix(), w.matrix()), 1e-10);
      const auto m = random_hp_map(n, rng);
      const auto back = map_from_witness(witness_from_map(m));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) EXPECT_LT(max_abs_diff(back.apply(unit(n, i, j)), m.apply(unit(n, i, j))), 1e-10);
    }
  }
}

TEST(CompletelyPositive, Examples) {
  EXPECT_TRUE(is_completely_positive(OperatorMap::identity(2)));
  EXPECT_FALSE(is_completely_positive(OperatorMap::transposition(2)));
  EXPECT_NEAR(min_eigenvalue(OperatorMap::transposition(2).choi_matrix()), -1.0, 1e-14);
  Rng rng(63);
  for (int t = 0; t < 10; ++t) {
    KrausSet k;
    for (int r = 0; r < 3; ++r) k.operators.push_back(random_ginibre(3, 3, rng));
    const auto m = OperatorMap::from_kraus(k);
    EXPECT_TRUE(m.hermiticity_preserving());
    EXPECT_TRUE(is_completely_positive(m));
  }
  EXPECT_THROW(is_completely_positive(OperatorMap::identity(2), -1.0), RejectedInput);
}

TEST(PositiveMap, Examples) {
  SeesawConfig c;
  c.multistarts = 16;
  EXPECT_TRUE(is_positive_map(OperatorMap::transposition(2), c));
  EXPECT_TRUE(is_positive_map(OperatorMap::identity(2), c));
  EXPECT_FALSE(is_positive_map(OperatorMap::from_action(2, [](const Matrix& x) { return Matrix(-x); }), c));
}

TEST(DecomposableWitness, Examples) {
  const Dims dims{2, 2};
  const Vector psi_plus = max_entangled_vector(2) / std::sqrt(2.0);
  const auto zero = HermitianOperator::zero(dims);
  const auto bell = HermitianOperator::projector(dims, psi_plus);
  EXPECT_LT(max_abs_diff(decomposable_witness(zero, bell).matrix(), 0.5 * swap4_literal()), 1e-15);
  const auto id = HermitianOperator::identity(dims);
  EXPECT_EQ(decomposable_witness(id, zero).matrix(), id.matrix());
  EXPECT_THROW(decomposable_witness(swap4(), zero), RejectedInput);
  EXPECT_THROW(decomposable_witness(zero, swap4()), RejectedInput);
}

TEST(DecomposableWitness, PositiveOnSeparableStates) {
  Rng rng(64);
  for (int t = 0; t < 30; ++t) {
    const Dims dims = (t % 2 == 0) ? Dims{2, 2} : Dims{2, 3};
    std::uniform_int_distribution<int> rank(1, dims.total());
    const auto p = random_density_matrix(dims, rank(rng), rng);
    const auto q = random_density_matrix(dims, rank(rng), rng);
    const auto w = decomposable_witness((t % 3 == 0) ? HermitianOperator::zero(dims) : p, q);
    const auto cert = certify(w, quick_config(200 + t));
    EXPECT_GE(cert.min_product_expectation, -1e-8);
    EXPECT_TRUE(cert.condition1.holds);
    EXPECT_TRUE(cert.condition2.holds) << cert.condition2.detail;
  }
}

TEST(PositiveNotCp, TranspositionVersusIdentity) {
  SeesawConfig c;
  c.multistarts = 32;
  const auto t = OperatorMap::transposition(2);
  EXPECT_TRUE(is_positive_map(t, c));
  EXPECT_FALSE(is_completely_positive(t));
  EXPECT_EQ(certify(witness_from_map(t), quick_config(300)).verdict, Verdict::EntanglementWitness);

  const auto id = OperatorMap::identity(2);
  EXPECT_TRUE(is_completely_positive(id));
  EXPECT_NE(certify(witness_from_map(id), quick_config(301)).verdict, Verdict::EntanglementWitness);
}
