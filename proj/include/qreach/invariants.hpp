#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qreach/model.hpp"

namespace qreach {

/// Merged alphabet (actions in declaration order, then one outcome-discarding
/// channel per measurement) and their uniform average F.
struct AverageChannel {
  std::vector<std::string> alphabet;
  std::vector<Channel> letters;
  Channel average;
};

AverageChannel average_superop(const Qmdp& m);

/// tr(P_{B^perp} E(P_B)) < tol.rank.
bool is_invariant_superop(const Subspace& b, const Channel& e, const Tolerances& tol = {});
/// Invariance under every action and every individual measurement operator.
bool is_invariant_model(const Subspace& b, const Qmdp& m, const Tolerances& tol = {});

struct XSubspace {
  Subspace space;
  /// Set when B is not invariant: the kernel is still returned, but the
  /// equivalence with "never reaches B" is not guaranteed.
  bool advisory = false;
};

/// ker E_s^*(P_B): initial supports from which s deposits nothing in B.
/// Measurement letters use their outcome-discarding channel.
XSubspace x_subspace(const Qmdp& m, const Word& s, const Subspace& b, const Tolerances& tol = {});

/// Smallest E-invariant subspace containing Y (d - 1 image joins suffice).
Subspace reach_closure(const Channel& e, const Subspace& y, const Tolerances& tol = {});

struct InvariantWitness {
  Subspace space;
  /// tr(P_{C^perp} E(P_C)) per merged letter, in alphabet order.
  std::vector<std::pair<std::string, double>> residuals;
};

/// A nonzero invariant subspace inside B^perp, or nullopt when the average
/// channel restricted to B^perp has only the trivial fixed point. Throws
/// kWitnessExtractionFailed if a fixed point exists but no candidate
/// verifies.
std::optional<InvariantWitness> find_invariant_in_complement(const Qmdp& m, const Subspace& b,
                                                             const Tolerances& tol = {});

/// Null space of (restricted representation - I) in B^perp coordinates: the
/// fixed points of X -> P_T E(X) P_T with X supported on T. Columns are
/// vectorised dim(T) x dim(T) operators; `t_basis` receives the basis of T.
CMatrix restricted_fixed_points(const Channel& e, const Subspace& t, const Tolerances& tol, CMatrix* t_basis);

}  // namespace qreach
