#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qreach/kernels.hpp"
#include "qreach/model.hpp"

namespace qreach {

// -- rank-1 support abstraction ----------------------------------------------------

/// One operator a |phi><psi| with unit phi, psi and a > 0.
struct Rank1Term {
  double scale = 0.0;
  CVector phi;
  CVector psi;
  std::string outcome;  // measurement outcome label; empty for Kraus operators
};

/// Merged alphabet (actions, then measurements) with the dyads of each letter.
struct Rank1Form {
  std::vector<std::string> alphabet;
  std::vector<bool> is_measurement;
  std::vector<std::vector<Rank1Term>> terms;
  int n_max = 0;  // largest number of nonzero operators on one letter
};

/// nullopt unless every nonzero Kraus and measurement operator has
/// sigma_2 < tol.rank * sigma_1. Zero operators are skipped.
std::optional<Rank1Form> detect_rank_one(const Qmdp& m, const Tolerances& tol = {});

enum class SupportMode { kPerKraus, kLiteral };

/// Classical MDP. transitions[s][a] lists (probability, successor); an empty
/// list means the action is not enabled in s.
struct ClassicalMdp {
  std::vector<Subspace> states;  // support tag per state; may be empty for hand-built MDPs
  int initial = 0;
  std::vector<std::string> actions;
  std::vector<std::vector<std::vector<std::pair<double, int>>>> transitions;
  std::vector<bool> target;

  int size() const { return static_cast<int>(target.size()); }
};

/// Supports reachable from the seeds (breadth first, deduplicated by
/// projector distance). The first seed is the initial state. Throws
/// kNotInvariant unless B is invariant, and kInvalidArgument for models with
/// an availability map.
ClassicalMdp build_support_mdp(const Qmdp& m, const Rank1Form& r1, const std::vector<Subspace>& seeds,
                               const Subspace& b, SupportMode mode, const Tolerances& tol = {});

/// States with Pr^max(reach target) = 1.
std::vector<bool> mdp_almost_sure_max(const ClassicalMdp& c);
/// States with Pr^min(reach target) = 1.
std::vector<bool> mdp_almost_sure_min(const ClassicalMdp& c);
/// Pr^max(reach target) by value iteration.
std::vector<double> mdp_value_iteration(const ClassicalMdp& c, double tol = 1e-12, int max_iter = 1000000);

struct Rank1Decision {
  bool holds = false;
  ClassicalMdp mdp;
  std::vector<bool> winning;
};

/// sup over schedulers of Pr(rho0 reaches B) equals 1. Throws kNotRank1.
Rank1Decision decide_sup_one_rank1(const Qmdp& m, const CMatrix& rho0, const Subspace& b,
                                   SupportMode mode = SupportMode::kPerKraus, const Tolerances& tol = {});
/// Every scheduler reaches B with probability 1 from every initial state.
/// Seeds: computational basis states, the whole space, and every output
/// vector of the dyads.
Rank1Decision decide_all_sched_rank1(const Qmdp& m, const Subspace& b, SupportMode mode = SupportMode::kPerKraus,
                                     const Tolerances& tol = {});

// -- bounded periodic enumeration --------------------------------------------------

struct LEntry {
  std::uint64_t l = 0;
  std::uint64_t k = 0;
  bool overflow = false;  // values are meaningless once set
};

/// L_0 = 1, K_0 = k, L_{i+1} = (K_i + 1) L_i, K_{i+1} = k^{L_{i+1}}; entries 0..i_max.
std::vector<LEntry> l_sequence(std::uint64_t k, int i_max);

/// Nesting depth of repeated factors s = a t b t c. Throws kBudgetExceeded if
/// |s| > max_length.
int repetition_degree(const Word& s, std::size_t max_length = 64);

enum class BoundedVerdict { kAllReach, kCounterexample, kBudgetExceeded };

struct BoundedResult {
  BoundedVerdict verdict = BoundedVerdict::kAllReach;
  Word counterexample;
  int q = 0;
  LEntry l_q;
  int checked_length = 0;  // all words up to this length were tested
  std::uint64_t words_checked = 0;
};

/// Tests every s with |s| <= L_q, q = max_a dim X_a, for a fixed point of the
/// restricted word channel. When the word count exceeds `budget` the lengths
/// the budget covers are still tested: a counterexample there is returned,
/// otherwise the verdict is kBudgetExceeded. Throws kHasMeasurements.
BoundedResult decide_all_sched_bounded(const Qmdp& m, const Subspace& b, std::uint64_t budget = 1000000,
                                       const Tolerances& tol = {}, Exec exec = Exec::kParallel);

// -- spectral radius bounds ---------------------------------------------------------

/// Representations of P_T E_a(.) P_T in B^perp coordinates, in declaration
/// order. Throws kHasMeasurements or kNotInvariant.
std::vector<CMatrix> sigma_matrices(const Qmdp& m, const Subspace& b, const Tolerances& tol = {});

enum class JsrVerdict { kAllSchedulersReach, kExistsScheduler, kInconclusive };

struct JsrRow {
  int k = 0;
  double upper = 0.0;  // max ||A||^(1/k) over products of length k
  double lower = 0.0;  // min ||A||^(1/k)
  LetterWord argmax;
  LetterWord argmin;
};

struct JsrReport {
  std::vector<JsrRow> rows;
  JsrVerdict verdict = JsrVerdict::kInconclusive;
  LetterWord witness;  // kExistsScheduler only
};

/// Exhaustive products up to length k_max. Throws kBudgetExceeded if the
/// number of products exceeds budget.
JsrReport jsr_bounds(const std::vector<CMatrix>& sigma, int k_max, std::uint64_t budget = 1000000,
                     const Tolerances& tol = {}, Exec exec = Exec::kParallel);

}  // namespace qreach
