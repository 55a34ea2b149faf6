#include <cmath>
#include <cstdlib>

#include <gtest/gtest.h>

#include "qreach/error.hpp"
#include "qreach/linalg.hpp"
#include "testing.hpp"

namespace qreach {
namespace {

using testing::ket_bra;
using testing::pure;

CMatrix pauli_x() {
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

double dist(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

TEST(Vec, StacksRows) {
  CMatrix x(2, 2);
  x << 1.0, 2.0, 3.0, 4.0;
  const CVector v = vec(x);
  EXPECT_EQ(v(1), Complex(2.0));
  EXPECT_EQ(v(2), Complex(3.0));
  EXPECT_EQ(unvec(v, 2), x);
}

TEST(MatrixRepresentation, IdentityChannel) {
  EXPECT_LT(dist(matrix_representation(Channel::identity(2)), CMatrix::Identity(4, 4)), 1e-15);
}

TEST(MatrixRepresentation, NotChannelIsXKronX) {
  const CMatrix x = pauli_x();
  CMatrix xx = CMatrix::Zero(4, 4);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) xx.block(2 * i, 2 * j, 2, 2) = x(i, j) * x;
  EXPECT_LT(dist(matrix_representation(Channel{2, {x}}), xx), 1e-15);
}

TEST(MatrixRepresentation, ResetChannelMapsToTraceTimesGround) {
  const Channel reset{2, {ket_bra(2, 0, 0), ket_bra(2, 0, 1)}};
  testing::Rng rng(7);
  const CMatrix rho = testing::random_density(2, rng);
  const CMatrix out = apply_representation(matrix_representation(reset), rho);
  EXPECT_LT(dist(out, rho.trace() * pure(2, 0)), 1e-14);
}

TEST(ApplySuperop, ExampleOneAlphaOnFirstState) {
  const auto ex = generate_example("example-nondeterministic");
  const CMatrix out = apply_superop(ex.model.action("alpha").channel, pure(4, 0));
  CMatrix expect = CMatrix::Zero(4, 4);
  expect(0, 0) = expect(1, 1) = 0.5;
  EXPECT_LT(dist(out, expect), 1e-15);
}

TEST(ApplySuperop, ExampleCycleBMovesFirstToSecond) {
  const auto ex = generate_example("example-cycle");
  EXPECT_LT(dist(apply_superop(ex.model.action("b").channel, pure(3, 0)), pure(3, 1)), 1e-15);
}

TEST(DualSuperop, UnitaryDualIsInverse) {
  testing::Rng rng(3);
  const CMatrix u = testing::random_unitary(3, rng);
  const Channel dual = dual_superop(Channel{3, {u}});
  ASSERT_EQ(dual.ops.size(), 1u);
  EXPECT_LT(dist(dual.ops[0], u.adjoint()), 1e-15);
}

TEST(DualSuperop, UnitalOnCompleteKraus) {
  testing::Rng rng(4);
  const Channel e = testing::random_channel(3, 3, rng);
  EXPECT_LT(dist(apply_superop(dual_superop(e), CMatrix::Identity(3, 3)), CMatrix::Identity(3, 3)), 1e-12);
}

TEST(DualSuperop, ExampleCycleAOnTarget) {
  const auto ex = generate_example("example-cycle");
  const CMatrix out = apply_superop(dual_superop(ex.model.action("a").channel), pure(3, 2));
  EXPECT_LT(dist(out, pure(3, 0) + pure(3, 2)), 1e-15);
}

TEST(Support, DiagonalHalfHalf) {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = 0.5;
  EXPECT_TRUE(support(m).equals(Subspace::span_of_basis(4, {0, 1})));
}

TEST(Support, ZeroMatrixIsZeroSubspace) { EXPECT_TRUE(support(CMatrix::Zero(3, 3)).is_zero()); }

TEST(Support, PlusState) {
  CVector plus(2);
  plus << 1.0, 1.0;
  plus /= std::sqrt(2.0);
  const Subspace s = support(plus * plus.adjoint());
  ASSERT_EQ(s.dim(), 1);
  EXPECT_NEAR(std::abs(s.basis().col(0).dot(plus)), 1.0, 1e-14);
}

TEST(KernelPsd, Examples) {
  CMatrix m = CMatrix::Zero(3, 3);
  m(0, 0) = 1.0;
  m(2, 2) = 2.0;
  EXPECT_TRUE(kernel_psd(m).equals(Subspace::span_of_basis(3, {1})));
  EXPECT_TRUE(kernel_psd(CMatrix::Identity(3, 3)).is_zero());
  CMatrix tiny = CMatrix::Zero(2, 2);
  tiny(0, 0) = 1.0;
  tiny(1, 1) = 1e-15;
  EXPECT_TRUE(kernel_psd(tiny).equals(Subspace::span_of_basis(2, {1})));
}

TEST(SubspaceAlgebra, JoinComplementContains) {
  const Subspace e1 = Subspace::span_of_basis(2, {0});
  const Subspace e2 = Subspace::span_of_basis(2, {1});
  EXPECT_TRUE(subspace_join(e1, e2).equals(Subspace::full(2)));
  EXPECT_TRUE(subspace_join(e1, Subspace::zero(2)).equals(e1));
  EXPECT_TRUE(subspace_complement(e1).equals(e2));
  EXPECT_TRUE(subspace_contains(Subspace::full(2), e1));
  CMatrix plus(2, 1);
  plus << 1.0, 1.0;
  EXPECT_FALSE(subspace_contains(e1, Subspace::span(plus)));
  EXPECT_TRUE(subspace_contains(e1, Subspace::zero(2)));
}

TEST(SpectralNorm, Examples) {
  testing::Rng rng(5);
  EXPECT_NEAR(spectral_norm(testing::random_unitary(4, rng)), 1.0, 1e-12);
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = 0.2;
  EXPECT_NEAR(spectral_norm(d), 0.5, 1e-15);
}

TEST(CesaroLimit, Examples) {
  EXPECT_LT(dist(cesaro_limit_map(CMatrix::Identity(3, 3)), CMatrix::Identity(3, 3)), 1e-12);
  const CMatrix half = CMatrix::Constant(2, 2, 0.5);
  EXPECT_LT(dist(cesaro_limit_map(pauli_x()), half), 1e-12);
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 0.5;
  EXPECT_LT(dist(cesaro_limit_map(d), pure(2, 0)), 1e-12);
}

TEST(CesaroLimit, MatchesAveragedPowersForUnitaryChannel) {
  // Averaging N powers directly converges like 1/N; a period-2 channel makes
  // the even-N average exact.
  const CMatrix m = matrix_representation(Channel{2, {pauli_x()}});
  CMatrix sum = CMatrix::Zero(4, 4), p = CMatrix::Identity(4, 4);
  for (int i = 0; i < 200; ++i) {
    sum += p;
    p = m * p;
  }
  EXPECT_LT(dist(cesaro_limit_map(m), sum / 200.0), 1e-12);
}

TEST(CesaroLimit, RejectsExpandingMap) {
  try {
    cesaro_limit_map(2.0 * CMatrix::Identity(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDivergentCesaro);
  }
}

TEST(CesaroLimit, RejectsJordanBlockOnUnitCircle) {
  CMatrix j = CMatrix::Identity(2, 2);
  j(0, 1) = 1.0;
  EXPECT_THROW(cesaro_limit_map(j), Error);
}

TEST(NullSpace, RankDeficient) {
  CMatrix a(2, 3);
  a << 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
  const CMatrix n = null_space(a);
  ASSERT_EQ(n.cols(), 1);
  EXPECT_NEAR(std::abs(n(2, 0)), 1.0, 1e-14);
}

TEST(Tolerances, CheckAndEnvironment) {
  Tolerances t;
  EXPECT_NO_THROW(t.check());
  t.rank = 0.0;
  EXPECT_THROW(t.check(), Error);
  ::setenv("QREACH_EPS_CONV", "1e-5", 1);
  EXPECT_DOUBLE_EQ(Tolerances::from_environment().conv, 1e-5);
  ::unsetenv("QREACH_EPS_CONV");
  EXPECT_DOUBLE_EQ(Tolerances::from_environment().conv, 1e-8);
}

TEST(ChannelThen, CompositionOrder) {
  const Channel to1{2, {ket_bra(2, 1, 0), ket_bra(2, 1, 1)}};
  const Channel flip{2, {pauli_x()}};
  // first reset to |1>, then flip: ends in |0>.
  EXPECT_LT(dist(apply_superop(to1.then(flip), pure(2, 0)), pure(2, 0)), 1e-15);
  EXPECT_LT(dist(apply_superop(flip.then(to1), pure(2, 0)), pure(2, 1)), 1e-15);
}

}  // namespace
}  // namespace qreach
