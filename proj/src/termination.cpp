#include "qreach/termination.hpp"

#include <algorithm>

#include "qreach/error.hpp"
#include "qreach/evolution.hpp"
#include "qreach/invariants.hpp"
#include "qreach/synthesis.hpp"

namespace qreach {
namespace {

// Representation of X -> P X P.
CMatrix compression(const CMatrix& p) { return matrix_representation(Channel{p.rows(), {p}}); }

}  // namespace

LoopProgram build_loop_model(const CMatrix& p1, const std::vector<CMatrix>& unitaries, const Tolerances& tol) {
  if (p1.rows() != p1.cols() || p1.rows() == 0)
    throw Error(ErrorCode::kDimensionMismatch, "guard must be a non-empty square matrix");
  const Index d = p1.rows();
  if ((p1 * p1 - p1).cwiseAbs().maxCoeff() > tol.valid || (p1 - p1.adjoint()).cwiseAbs().maxCoeff() > tol.valid)
    throw Error(ErrorCode::kNotProjective, "guard is not an orthogonal projector");
  if (unitaries.empty()) throw Error(ErrorCode::kInvalidArgument, "a loop program needs at least one process");
  const CMatrix id = CMatrix::Identity(d, d);
  const CMatrix p0 = id - p1;
  std::vector<SuperOperator> actions;
  for (std::size_t i = 0; i < unitaries.size(); ++i) {
    const CMatrix& u = unitaries[i];
    if (u.rows() != d || u.cols() != d)
      throw Error(ErrorCode::kDimensionMismatch, "unitary " + std::to_string(i + 1) + " has wrong dimension");
    if ((u.adjoint() * u - id).cwiseAbs().maxCoeff() > tol.valid)
      throw Error(ErrorCode::kNotUnitary, "loop body " + std::to_string(i + 1) + " is not unitary");
    actions.push_back({std::to_string(i + 1), Channel{d, {p1, u * p0}}});
  }
  LoopProgram lp{p1, unitaries, Qmdp(d, std::move(actions)), Subspace::from_projector(p1, tol)};
  if (!is_invariant_model(lp.exit, lp.model, tol))
    throw Error(ErrorCode::kInternal, "loop exit subspace is not invariant");
  return lp;
}

CMatrix e_infinity(const Channel& e, const Tolerances& tol) { return cesaro_limit_map(matrix_representation(e), tol); }

TerminationReport termination_probability(const LoopProgram& lp, const CMatrix& rho0, TerminationMode mode,
                                          const Tolerances& tol, int max_steps) {
  const Index d = lp.model.dim();
  if (rho0.rows() != d || rho0.cols() != d)
    throw Error(ErrorCode::kDimensionMismatch, "initial state does not match loop dimension");
  TerminationReport r;
  r.mode = mode;

  const AverageChannel avg = average_superop(lp.model);
  const CMatrix rep = matrix_representation(avg.average);
  const CMatrix id = CMatrix::Identity(d, d);
  r.trapped_literal = support(hermitian_part(apply_representation(cesaro_limit_map(rep, tol), id)), tol);

  const Subspace t = subspace_complement(lp.exit, tol);
  const CMatrix pt = compression(t.projector());
  const CMatrix g_inf = cesaro_limit_map(pt * rep * pt, tol);
  r.trapped_restricted = support(hermitian_part(apply_representation(g_inf, t.projector())), tol);

  auto escape = [&](const Subspace& c) { return std::clamp(1.0 - (c.projector() * rho0).trace().real(), 0.0, 1.0); };
  r.literal_probability = escape(r.trapped_literal);
  r.restricted_probability = escape(r.trapped_restricted);
  r.probability = mode == TerminationMode::kLiteral ? r.literal_probability : r.restricted_probability;

  const Subspace goal = subspace_join(lp.exit, r.trapped_restricted, tol);
  const SynthesisVerdict v = find_optimal_scheduler(lp.model, goal, tol);
  r.witness = v.kind == SynthesisKind::kScheduler ? v.word : Word{lp.model.actions().front().name};
  const LimitResult sim = reach_limit(lp.model, word_to_scheduler(lp.model, r.witness), rho0, lp.exit, tol, max_steps);
  r.simulated = sim.value;
  r.simulation_converged = sim.converged;
  r.simulation_steps = sim.steps;
  return r;
}

}  // namespace qreach
