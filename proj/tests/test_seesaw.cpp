#include "test_support.hpp"

using namespace ewcert;
using namespace ewcert::testing;

namespace {

SeesawConfig small_config(std::uint64_t seed, int starts = 16) {
  SeesawConfig c;
  c.seed = seed;
  c.multistarts = starts;
  return c;
}

}  // namespace

TEST(SeesawConfig, Validation) {
  SeesawConfig c;
  EXPECT_NO_THROW(c.validate());
  c.multistarts = 0;
  EXPECT_THROW(c.validate(), RejectedInput);
  c = {};
  c.zero_tol = 0.0;
  EXPECT_THROW(c.validate(), RejectedInput);
}

TEST(EffectiveOperator, ReproducesObjective) {
  Rng rng(40);
  const Dims dims{2, 3, 2};
  for (int t = 0; t < 10; ++t) {
    const auto a = random_hermitian(dims, rng);
    const auto p = random_product_state(dims, rng);
    for (std::size_t i = 0; i < dims.count(); ++i) {
      const Matrix m = effective_operator(a, p.factors(), i);
      EXPECT_NEAR((p.factor(i).adjoint() * m * p.factor(i))(0).real(), expectation(a, p), 1e-12);
      EXPECT_LT(max_abs_diff(m, m.adjoint()), 1e-14);
    }
  }
}

TEST(Seesaw, Examples) {
  const auto sw = seesaw_minimize(swap4(), small_config(1));
  EXPECT_NEAR(sw.min_value, 0.0, 1e-8);
  EXPECT_NEAR(fidelity(sw.argmin.factor(0), sw.argmin.factor(1)), 0.0, 1e-8);

  EXPECT_NEAR(seesaw_minimize(HermitianOperator::identity(Dims{2, 2}), small_config(2)).min_value, 1.0, 1e-14);
  EXPECT_NEAR(seesaw_minimize(bell_pt_witness(), small_config(3)).min_value, 0.0, 1e-8);
}

TEST(Seesaw, HistoriesNeverIncrease) {
  Rng rng(41);
  for (const Dims& dims : {Dims{2, 2}, Dims{2, 3}, Dims{2, 2, 2}}) {
    const auto run = seesaw_minimize(random_hermitian(dims, rng), small_config(7, 8));
    for (const auto& s : run.starts) {
      ASSERT_FALSE(s.history.empty());
      for (std::size_t k = 1; k < s.history.size(); ++k) EXPECT_LE(s.history[k], s.history[k - 1] + 1e-12);
      EXPECT_NEAR(s.history.back(), s.value, 1e-12);
    }
  }
}

TEST(Seesaw, EndpointsAreStationary) {
  Rng rng(42);
  const auto a = random_hermitian(Dims{2, 3}, rng);
  const auto run = seesaw_minimize(a, small_config(8, 8));
  for (const auto& s : run.starts) {
    EXPECT_TRUE(s.converged);
    EXPECT_LT(s.gradient_norm, 1e-7);
  }
}

TEST(Seesaw, ArgminIsBestStartWithLowestIndexOnTies) {
  const auto run = seesaw_minimize(HermitianOperator::identity(Dims{2, 2}), small_config(9, 5));
  EXPECT_EQ(run.best_start, 0u);
  Rng rng(43);
  const auto r2 = seesaw_minimize(random_hermitian(Dims{3, 3}, rng), small_config(10, 12));
  for (const auto& s : r2.starts) EXPECT_GE(s.value, r2.min_value);
  EXPECT_EQ(r2.starts[r2.best_start].value, r2.min_value);
}

TEST(Seesaw, DeterministicAndThreadIndependent) {
  Rng rng(44);
  const auto a = random_hermitian(Dims{2, 3}, rng);
  SeesawConfig c1 = small_config(77, 12);
  c1.threads = 1;
  SeesawConfig c4 = c1;
  c4.threads = 4;
  const auto r1 = seesaw_minimize(a, c1);
  const auto r1b = seesaw_minimize(a, c1);
  const auto r4 = seesaw_minimize(a, c4);
  EXPECT_EQ(r1.min_value, r1b.min_value);
  EXPECT_EQ(r1.min_value, r4.min_value);
  EXPECT_EQ(r1.best_start, r4.best_start);
  EXPECT_EQ(r1.argmin.vector(), r4.argmin.vector());
  for (std::size_t j = 0; j < r1.starts.size(); ++j) {
    EXPECT_EQ(r1.starts[j].seed, 77u + j);
    EXPECT_EQ(r1.starts[j].history, r4.starts[j].history);
  }
}

TEST(GridOracle, Examples) {
  EXPECT_LE(grid_oracle_min(swap4(), 24), 1e-3);
  EXPECT_NEAR(grid_oracle_min(-HermitianOperator::identity(Dims{2, 2}), 5), -1.0, 1e-15);
  const HermitianOperator iz(Dims{2, 2}, tensor({Matrix(Matrix::Identity(2, 2)), pauli_z()}));
  EXPECT_NEAR(grid_oracle_min(iz, 24), -1.0, 1e-3);
}

TEST(GridOracle, CostGuard) {
  EXPECT_THROW(grid_oracle_min(HermitianOperator::identity(Dims{6, 7}), 4), RejectedInput);
  EXPECT_THROW(grid_oracle_min(HermitianOperator::identity(Dims{2, 2, 2, 2}), 4), RejectedInput);
  try {
    grid_oracle_min(HermitianOperator::identity(Dims{5, 5}), 100);
    FAIL() << "expensive grid accepted";
  } catch (const RejectedInput& e) {
    EXPECT_NE(std::string(e.what()).find("2000000"), std::string::npos) << e.what();
  }
}

TEST(GridOracle, UpperBoundsSeesaw) {
  Rng rng(45);
  for (const Dims& dims : {Dims{2, 2}, Dims{2, 3}, Dims{2}, Dims{2, 2, 2}}) {
    for (int t = 0; t < 4; ++t) {
      const auto a = random_hermitian(dims, rng);
      const double grid = grid_oracle_min(a, 12);
      const double see = seesaw_minimize(a, small_config(t)).min_value;
      EXPECT_LE(see, grid + 1e-6) << dims.str();
    }
  }
}

TEST(GridOracle, SingleSubsystemIsMinEigenvalue) {
  Rng rng(46);
  const auto a = random_hermitian(Dims{4}, rng);
  EXPECT_NEAR(grid_oracle_min(a, 3), min_eigenvalue(a.matrix()), 1e-12);
}
