#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "qreach/io.hpp"
#include "qreach/model.hpp"

namespace qreach {

/// Deterministic finite-memory scheduler.
///
/// Memory is an integer. A periodic word uses the position in the word; a
/// reactive table is an explicit decision/transition table whose events are
/// either "took action a" (outcome empty) or a measurement outcome.
class Scheduler {
 public:
  using Memory = int;

  static Scheduler periodic(Word word);
  static Scheduler reactive(Memory initial, std::map<Memory, std::string> decisions,
                            std::map<std::tuple<Memory, std::string, std::string>, Memory> transitions);
  /// prefix followed by cycle repeated forever. Measurement letters get one
  /// edge per outcome of `m`, all leading to the same next position.
  static Scheduler lasso(const Qmdp& m, const Word& prefix, const Word& cycle);

  bool is_periodic() const { return periodic_; }
  /// The repeated word (periodic schedulers only).
  const Word& word() const { return word_; }

  Memory initial() const { return initial_; }
  /// Throws kSchedulerViolation if no decision is defined.
  const std::string& decide(Memory mem) const;
  /// Memory after `name` was performed (and `outcome` observed, for
  /// measurements). Throws kSchedulerViolation for a missing edge.
  Memory next(Memory mem, const std::string& name, const std::string& outcome) const;

  /// Steps before the decisions become periodic, and the period afterwards.
  /// For general tables these are 0 and the number of memory states.
  int transient() const { return transient_; }
  int period() const { return period_; }

  /// Checks every decision is a declared name and every reachable memory has
  /// its decision and outgoing edges.
  void validate(const Qmdp& m) const;

  io::Json to_json() const;
  static Scheduler from_json(const io::Json& j, const Qmdp& m, const std::string& path = "scheduler");

 private:
  bool periodic_ = true;
  Word word_;
  Memory initial_ = 0;
  std::map<Memory, std::string> decisions_;
  std::map<std::tuple<Memory, std::string, std::string>, Memory> transitions_;
  int transient_ = 0;
  int period_ = 1;
};

struct Branch {
  double weight = 1.0;
  CMatrix state;
  Scheduler::Memory memory = 0;
  std::string last;  // name performed most recently; empty before the first step
};

struct Frontier {
  int step = 0;
  std::vector<Branch> branches;
  double pruned_mass = 0.0;
};

Frontier initial_frontier(const Scheduler& sched, const CMatrix& rho0);

/// One step of the evolution rules. Actions map branches one to one;
/// measurements split a branch per outcome (sorted by label). Branches whose
/// weight falls to tol.prune or below are dropped into pruned_mass.
Frontier step_frontier(const Qmdp& m, const Scheduler& sched, const Frontier& f,
                       const Tolerances& tol = {});

/// Merges branches that share memory and last name. Their futures are driven
/// by the same decisions, so global states and reach values are unchanged.
Frontier merge_branches(const Frontier& f);

CMatrix global_state(const Frontier& f);

/// tr(P_B rho(n)).
double reach_at_step(const Qmdp& m, const Scheduler& sched, const CMatrix& rho0, const Subspace& b, int n,
                     const Tolerances& tol = {});

struct LimitResult {
  double value = 0.0;
  bool converged = false;
  int steps = 0;
  std::vector<double> trace;  // value at n = 0..steps
  double pruned_mass = 0.0;
};

/// Evolves until the value gained over (dim B^perp + 1) scheduler periods
/// drops below tol.conv, or max_steps. Requires B invariant (kNotInvariant).
LimitResult reach_limit(const Qmdp& m, const Scheduler& sched, const CMatrix& rho0, const Subspace& b,
                        const Tolerances& tol = {}, int max_steps = 10000);

struct LimsupEstimate {
  double estimate = 0.0;  // max over the trailing window; heuristic
  std::vector<double> trace;
  double pruned_mass = 0.0;
};

LimsupEstimate estimate_limsup(const Qmdp& m, const Scheduler& sched, const CMatrix& rho0, const Subspace& b,
                               int window, int max_steps, const Tolerances& tol = {});

}  // namespace qreach
