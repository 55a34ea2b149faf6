#pragma once

#include <optional>
#include <vector>

#include "qreach/evolution.hpp"
#include "qreach/invariants.hpp"
#include "qreach/kernels.hpp"

namespace qreach {

enum class SynthesisKind { kTriviallyReached, kNoScheduler, kScheduler };
enum class NoSchedulerReason { kNotInvariantTarget, kInvariantWitness };

struct SynthesisStep {
  Word word;
  Index dim = 0;  // dim X_word
};

struct SynthesisVerdict {
  SynthesisKind kind = SynthesisKind::kTriviallyReached;
  std::optional<NoSchedulerReason> reason;
  Word word;                               // kScheduler only
  std::optional<InvariantWitness> witness;  // kInvariantWitness only
  std::vector<SynthesisStep> trace;         // accepted prefixes, starting with the empty word
};

/// Searches for s such that s^omega reaches B with probability 1 from every
/// initial state. Extensions are scanned by length, then lexicographically in
/// declaration order of the merged alphabet; the first one that shrinks X
/// is accepted.
SynthesisVerdict find_optimal_scheduler(const Qmdp& m, const Subspace& b, const Tolerances& tol = {},
                                        Exec exec = Exec::kParallel);

/// Replays s forever. Measurement letters get outcome edges that all lead to
/// the same next position. Throws kEmptyWord for an empty word.
Scheduler word_to_scheduler(const Qmdp& m, const Word& s);

}  // namespace qreach
