#pragma once

#include <vector>

#include "qreach/model.hpp"

namespace qreach {

/// Concurrent loop: process i runs "while guard do U_i". Action "i"
/// (1-based) has Kraus operators {P1, U_i P0}; B = range(P1).
struct LoopProgram {
  CMatrix p1;
  std::vector<CMatrix> unitaries;
  Qmdp model;
  Subspace exit;
};

/// Throws kNotProjective / kNotUnitary / kDimensionMismatch.
LoopProgram build_loop_model(const CMatrix& p1, const std::vector<CMatrix>& unitaries, const Tolerances& tol = {});

/// Representation of lim (1/N) sum_{i<N} E^i.
CMatrix e_infinity(const Channel& e, const Tolerances& tol = {});

enum class TerminationMode { kRestricted, kLiteral };

struct TerminationReport {
  TerminationMode mode = TerminationMode::kRestricted;
  /// supp(E_inf(I)) for the plain average, and supp(G_inf(P_T)) for the
  /// average compressed to T = B^perp.
  Subspace trapped_literal;
  Subspace trapped_restricted;
  double literal_probability = 0.0;
  double restricted_probability = 0.0;
  double probability = 0.0;  // the one selected by `mode`
  /// Periodic word synthesized for B v C', and the simulated reach of B.
  Word witness;
  double simulated = 0.0;
  bool simulation_converged = false;
  int simulation_steps = 0;
};

TerminationReport termination_probability(const LoopProgram& lp, const CMatrix& rho0,
                                          TerminationMode mode = TerminationMode::kRestricted,
                                          const Tolerances& tol = {}, int max_steps = 10000);

}  // namespace qreach
