#include <gtest/gtest.h>

#include "qreach/error.hpp"
#include "qreach/invariants.hpp"
#include "qreach/termination.hpp"
#include "testing.hpp"

namespace qreach {
namespace {

using testing::pure;

double dist(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

CMatrix pauli_x() {
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

const CMatrix kGuard = pure(2, 1);

TEST(BuildLoopModel, NotLoopAbsorbsDiagonalStates) {
  const LoopProgram lp = build_loop_model(kGuard, {pauli_x()});
  ASSERT_EQ(lp.model.actions().size(), 1u);
  EXPECT_EQ(lp.model.actions()[0].name, "1");
  const Channel& e = lp.model.actions()[0].channel;
  const CMatrix rho = 0.3 * pure(2, 0) + 0.7 * pure(2, 1);
  EXPECT_LT(dist(apply_superop(e, rho), pure(2, 1)), 1e-15);
  EXPECT_TRUE(lp.exit.equals(Subspace::span_of_basis(2, {1})));
}

TEST(BuildLoopModel, IdentityBodyFixesBasisStates) {
  const LoopProgram lp = build_loop_model(kGuard, {CMatrix::Identity(2, 2)});
  const Channel& e = lp.model.actions()[0].channel;
  EXPECT_LT(dist(apply_superop(e, pure(2, 0)), pure(2, 0)), 1e-15);
  EXPECT_LT(dist(apply_superop(e, pure(2, 1)), pure(2, 1)), 1e-15);
}

TEST(BuildLoopModel, TwoProcesses) {
  const LoopProgram lp = build_loop_model(kGuard, {CMatrix::Identity(2, 2), pauli_x()});
  EXPECT_EQ(lp.model.names(), (Word{"1", "2"}));
  EXPECT_TRUE(validate_model(lp.model).empty());
}

TEST(BuildLoopModel, Errors) {
  CMatrix bad_guard = CMatrix::Identity(2, 2) * 0.5;
  try {
    build_loop_model(bad_guard, {pauli_x()});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotProjective);
  }
  try {
    build_loop_model(kGuard, {2.0 * pauli_x()});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotUnitary);
  }
  EXPECT_THROW(build_loop_model(kGuard, {CMatrix::Identity(3, 3)}), Error);
}

TEST(EInfinity, NotLoop) {
  const LoopProgram lp = build_loop_model(kGuard, {pauli_x()});
  const Channel& e = lp.model.actions()[0].channel;
  const CMatrix einf = e_infinity(e);
  EXPECT_LT(dist(einf, matrix_representation(e)), 1e-12);
  EXPECT_LT(dist(apply_representation(einf, CMatrix::Identity(2, 2)), 2.0 * pure(2, 1)), 1e-12);
}

TEST(EInfinity, IdentityLoopAndIdentityChannel) {
  const LoopProgram lp = build_loop_model(kGuard, {CMatrix::Identity(2, 2)});
  const CMatrix einf = e_infinity(lp.model.actions()[0].channel);
  EXPECT_LT(dist(apply_representation(einf, CMatrix::Identity(2, 2)), CMatrix::Identity(2, 2)), 1e-12);
  EXPECT_LT(dist(e_infinity(Channel::identity(3)), CMatrix::Identity(9, 9)), 1e-12);
}

TEST(EInfinity, Idempotent) {
  testing::Rng rng(12);
  for (int i = 0; i < 5; ++i) {
    const Channel e = testing::random_channel(3, 2, rng);
    const CMatrix r = e_infinity(e);
    EXPECT_LT(dist(r * r, r), 1e-8);
  }
}

TEST(TerminationProbability, LoopNot) {
  const LoopProgram lp = build_loop_model(kGuard, {pauli_x()});
  const TerminationReport r = termination_probability(lp, pure(2, 0));
  EXPECT_TRUE(r.trapped_restricted.is_zero());
  EXPECT_NEAR(r.probability, 1.0, 1e-12);
  EXPECT_NEAR(r.simulated, 1.0, 1e-6);
}

TEST(TerminationProbability, LoopId) {
  const LoopProgram lp = build_loop_model(kGuard, {CMatrix::Identity(2, 2)});
  const TerminationReport r = termination_probability(lp, pure(2, 0));
  EXPECT_TRUE(r.trapped_restricted.equals(Subspace::span_of_basis(2, {0})));
  EXPECT_NEAR(r.probability, 0.0, 1e-12);
  EXPECT_NEAR(r.simulated, 0.0, 1e-6);
}

TEST(TerminationProbability, TwoProcessesBothModes) {
  const LoopProgram lp = build_loop_model(kGuard, {CMatrix::Identity(2, 2), pauli_x()});
  const TerminationReport r = termination_probability(lp, pure(2, 0));
  EXPECT_NEAR(r.restricted_probability, 1.0, 1e-12);
  EXPECT_NEAR(r.literal_probability, 1.0, 1e-12);
  EXPECT_EQ(r.witness, (Word{"2"}));
  EXPECT_NEAR(r.simulated, 1.0, 1e-6);
}

TEST(TerminationProbability, LiteralFormulaUndercountsInsideExit) {
  const LoopProgram lp = build_loop_model(kGuard, {pauli_x()});
  const TerminationReport lit = termination_probability(lp, pure(2, 1), TerminationMode::kLiteral);
  EXPECT_NEAR(lit.probability, 0.0, 1e-12);
  EXPECT_NEAR(lit.restricted_probability, 1.0, 1e-12);
  EXPECT_NEAR(lit.simulated, 1.0, 1e-12);
}

TEST(TerminationProbability, TrappedSpaceIsInvariantAndOrthogonalToExit) {
  const LoopProgram lp = build_loop_model(kGuard, {CMatrix::Identity(2, 2)});
  const TerminationReport r = termination_probability(lp, pure(2, 0));
  EXPECT_TRUE(is_invariant_model(r.trapped_restricted, lp.model));
  EXPECT_LT((r.trapped_restricted.projector() * lp.exit.projector()).cwiseAbs().maxCoeff(), 1e-12);
}

}  // namespace
}  // namespace qreach
