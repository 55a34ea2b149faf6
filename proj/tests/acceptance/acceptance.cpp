// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "qreach/cli.hpp"
#include "qreach/decision.hpp"
#include "qreach/error.hpp"
#include "qreach/evolution.hpp"
#include "qreach/invariants.hpp"
#include "qreach/synthesis.hpp"
#include "qreach/termination.hpp"
#include "testing.hpp"

using namespace qreach;
using testing::pure;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(const char* id, const char* title, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.notes << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!c.ok) ++failures;
  std::printf("%s %s: %s (%.2fs)%s\n", c.ok ? "PASS" : "FAIL", id, title, secs, c.notes.str().c_str());
  std::fflush(stdout);
}

Word repeat(const std::string& a, int n) { return Word(static_cast<std::size_t>(n), a); }

void ac1(Check& c) {
  const auto ex = generate_example("example-nondeterministic");
  double worst = 0.0;
  for (int k = 1; k <= 12; ++k) {
    const Scheduler s = Scheduler::lasso(ex.model, repeat("alpha", k - 1), {"beta"});
    const double v = reach_at_step(ex.model, s, ex.initial, ex.target, k);
    worst = std::max(worst, std::abs(v - (1.0 - std::pow(0.5, k - 1))));
  }
  c.notes << " max error " << worst;
  c.expect(worst < 1e-9, "1 - 0.5^(k-1) within 1e-9");
}

void ac2(Check& c) {
  const auto ex = generate_example("example-cycle");
  const LimitResult r1 = reach_limit(ex.model, Scheduler::periodic({"a", "b"}), ex.initial, ex.target);
  const LimitResult r2 = reach_limit(ex.model, Scheduler::lasso(ex.model, {"a", "b", "a", "b", "a", "a"}, {"a", "b"}),
                                     ex.initial, ex.target);
  c.notes << " (ab)^w=" << r1.value << " in " << r1.steps << " steps; (ab)^2aa(ab)^w=" << r2.value << " in "
          << r2.steps << " steps";
  c.expect(std::abs(r1.value - 0.5) < 1e-6 && r1.converged && r1.steps <= 100, "(ab)^w = 0.5");
  c.expect(std::abs(r2.value - 1.0) < 1e-6 && r2.converged && r2.steps <= 100, "(ab)^2aa(ab)^w = 1");
}

void ac3(Check& c) {
  const auto ex = generate_example("example-rotation");
  Word w = repeat("a", 8);
  w.push_back("b");
  const LimitResult lim = reach_limit(ex.model, Scheduler::periodic(w), ex.initial, ex.target);
  const double expect = std::pow(std::sin(4.8), 2);
  c.notes << " (a^8b)^w=" << lim.value;
  c.expect(std::abs(lim.value - expect) < 1e-6, "(a^8 b)^w = sin^2(4.8)");

  // Single-shot a^n b for n < 200.
  std::vector<double> v;
  int witness = -1;
  for (int n = 0; n < 200; ++n) {
    v.push_back(reach_at_step(ex.model, Scheduler::lasso(ex.model, repeat("a", n), {"b"}), ex.initial, ex.target,
                              n + 1));
    if (witness < 0 && v.back() > 0.999) witness = n;
  }
  c.notes << "; first a^n b above 0.999 at n=" << witness;
  c.expect(witness >= 0, "some a^n b with n <= 200 exceeds 0.999");
  const double short_best = *std::max_element(v.begin(), v.begin() + 50);
  const double overall = *std::max_element(v.begin(), v.end());
  c.notes << "; best |w|<=50: " << short_best << ", best overall: " << overall;
  c.expect(overall > short_best, "longer words beat every word up to length 50");
  c.expect(overall < 1.0, "no tested word attains 1");
}

void ac4(Check& c) {
  const auto cyc = generate_example("example-cycle");
  const SynthesisVerdict v = find_optimal_scheduler(cyc.model, cyc.target);
  c.expect(v.kind == SynthesisKind::kScheduler && v.word == Word{"a", "a"}, "example-cycle yields aa");
  testing::Rng rng(401);
  double worst = 1.0;
  for (int i = 0; i < 20; ++i) {
    const CMatrix rho0 = testing::random_density(3, rng, 1 + i % 3);
    worst = std::min(worst, reach_at_step(cyc.model, Scheduler::periodic({"a", "a"}), rho0, cyc.target, 10));
  }
  c.notes << " worst (aa)^w value after 10 steps " << worst;
  c.expect(worst >= 1.0 - 1e-8, "(aa)^w reaches within 10 steps");

  const auto ex1 = generate_example("example-nondeterministic");
  const SynthesisVerdict n = find_optimal_scheduler(ex1.model, ex1.target);
  c.expect(n.kind == SynthesisKind::kNoScheduler && n.witness &&
               n.witness->space.equals(Subspace::span_of_basis(4, {3})) &&
               is_invariant_model(n.witness->space, ex1.model),
           "example 1 gives NoScheduler with invariant witness span{|4>}");
}

void ac5(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto ex1 = generate_example("example-nondeterministic");
  const auto cyc = generate_example("example-cycle");
  c.expect(decide_sup_one_rank1(ex1.model, ex1.initial, ex1.target).holds, "sup = 1 on example 1");
  c.expect(decide_sup_one_rank1(cyc.model, pure(3, 0), cyc.target).holds, "sup = 1 on example-cycle");
  c.expect(!decide_all_sched_rank1(cyc.model, cyc.target).holds, "not all schedulers reach on example-cycle");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(secs < 1.0, "rank-1 decisions under 1 s");
  const Rank1Decision lit = decide_sup_one_rank1(ex1.model, ex1.initial, ex1.target, SupportMode::kLiteral);
  c.expect(!lit.holds, "literal mode returns false on example 1");
  std::istringstream in(testing::example_text("example-nondeterministic"));
  std::ostringstream out, err;
  const int code = cli::run({"rank1", "--model", "-", "--mode", "literal", "--no-timing"}, in, out, err);
  const std::string report = out.str();
  c.expect(code == 0 && report.find("SUP_BELOW_ONE") != std::string::npos &&
               report.find("ambigu") != std::string::npos,
           "literal-mode report flags the ambiguity");
}

void ac6(Check& c) {
  const auto cyc = generate_example("example-cycle");
  const BoundedResult r = decide_all_sched_bounded(cyc.model, cyc.target);
  c.expect(r.verdict == BoundedVerdict::kCounterexample && r.counterexample == Word{"a", "b"} && r.q == 1 &&
               r.l_q.l == 3,
           "example-cycle gives counterexample ab with q=1, L=3");
  const BoundedResult one = decide_all_sched_bounded(cyc.model.with_actions({"a"}), cyc.target);
  c.expect(one.verdict == BoundedVerdict::kAllReach, "single-action variant reaches");
  const BoundedResult q2 = decide_all_sched_bounded(testing::forward_chain(), Subspace::span_of_basis(4, {3}));
  c.notes << " q=2 run: q=" << q2.q << " L=" << q2.l_q.l << " checked up to length " << q2.checked_length << " ("
          << q2.words_checked << " words)";
  c.expect(q2.q == 2 && q2.verdict == BoundedVerdict::kBudgetExceeded, "q=2 exceeds the default budget");
}

void ac7(Check& c) {
  const auto cyc = generate_example("example-cycle");
  const auto sigma = sigma_matrices(cyc.model, cyc.target);
  const JsrReport two = jsr_bounds(sigma, 2);
  c.expect(two.rows.size() == 2 && std::abs(two.rows[1].lower) < 1e-12, "lower bound at k=2 is 0");
  c.expect(two.verdict == JsrVerdict::kExistsScheduler && two.witness == LetterWord{0, 0}, "witness aa");
  const JsrReport six = jsr_bounds(sigma, 6);
  bool all_one = true;
  for (const auto& row : six.rows) all_one = all_one && std::abs(row.upper - 1.0) < 1e-12;
  c.expect(all_one && six.verdict != JsrVerdict::kAllSchedulersReach, "upper bound 1 for k <= 6");
  const JsrReport half = jsr_bounds({0.5 * CMatrix::Identity(2, 2)}, 1);
  c.expect(half.verdict == JsrVerdict::kAllSchedulersReach, "{0.5 I} gives ALL_SCHEDULERS_REACH");
}

void ac8(Check& c) {
  struct Case {
    const char* name;
    double expect;
  };
  for (const Case& k : {Case{"loop-not", 1.0}, Case{"loop-id", 0.0}, Case{"loop-two-process", 1.0}}) {
    const Example ex = generate_example(k.name);
    const LoopProgram lp = build_loop_model(ex.loop->guard, ex.loop->unitaries);
    const TerminationReport r = termination_probability(lp, pure(2, 0), TerminationMode::kRestricted, {}, 10000);
    c.notes << " " << k.name << "=" << r.probability << " (sim " << r.simulated << ")";
    c.expect(std::abs(r.probability - k.expect) < 1e-9, std::string(k.name) + " probability");
    c.expect(std::abs(r.probability - r.simulated) < 1e-6, std::string(k.name) + " matches simulation");
  }
  const Example ex = generate_example("loop-not");
  const LoopProgram lp = build_loop_model(ex.loop->guard, ex.loop->unitaries);
  const TerminationReport r = termination_probability(lp, pure(2, 1), TerminationMode::kLiteral, {}, 10000);
  c.notes << "; loop-not from |1>: literal " << r.literal_probability << ", restricted " << r.restricted_probability
          << ", sim " << r.simulated;
  c.expect(std::abs(r.literal_probability) < 1e-9 && std::abs(r.restricted_probability - 1.0) < 1e-9 &&
               std::abs(r.simulated - 1.0) < 1e-6,
           "literal 0 / restricted 1 / simulation 1");
}

void ac9(Check& c) {
  testing::Rng rng(409);
  // Monotonicity on 50 random models.
  bool monotone = true;
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = 2 + trial % 3;
    const auto im = testing::random_invariant_model(d, 1 + trial % (d - 1), 2, rng);
    const Word w = testing::random_word(im.model, 1 + trial % 4, rng);
    const Scheduler s = Scheduler::lasso(im.model, testing::random_word(im.model, trial % 3, rng), w);
    Frontier f = initial_frontier(s, testing::random_density(d, rng));
    double prev = 0.0;
    for (int n = 0; n <= 50; ++n) {
      const double cur = (im.b.projector() * global_state(f)).trace().real();
      monotone = monotone && cur >= prev - 1e-9;
      prev = cur;
      f = merge_branches(step_frontier(im.model, s, f));
    }
  }
  c.expect(monotone, "monotone reach on 50 random models");

  // Dual and representation identities.
  double dual_err = 0.0, rep_err = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const Index d = 1 + trial % 4;
    const Channel e = testing::random_channel(d, 2, rng);
    const CMatrix x = testing::random_hermitian(d, rng), rho = testing::random_density(d, rng);
    dual_err = std::max(dual_err, std::abs((x * apply_superop(e, rho)).trace() -
                                           (apply_superop(dual_superop(e), x) * rho).trace()));
    rep_err = std::max(rep_err, (vec(testing::oracle_apply(e, rho)) - matrix_representation(e) * vec(rho)).norm());
  }
  c.notes << " dual err " << dual_err << ", rep err " << rep_err;
  c.expect(dual_err < 1e-10 && rep_err < 1e-10, "dual and representation identities");

  // X_{sv} inside X_s on 100 triples.
  bool contained = true;
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 2 + trial % 3;
    const auto im = testing::random_invariant_model(d, 1, 2, rng, 0.4);
    const Word s = testing::random_word(im.model, 1 + trial % 3, rng);
    Word sv = s;
    for (const auto& l : testing::random_word(im.model, 1 + trial % 2, rng)) sv.push_back(l);
    contained = contained &&
                subspace_contains(x_subspace(im.model, s, im.b).space, x_subspace(im.model, sv, im.b).space);
  }
  c.expect(contained, "X_sv contained in X_s");

  // Words of length L_1 = 3 over two letters repeat a factor.
  bool repeats = true;
  for (int mask = 0; mask < 8; ++mask) {
    Word w;
    for (int i = 0; i < 3; ++i) w.push_back((mask >> i & 1) ? "b" : "a");
    repeats = repeats && repetition_degree(w) >= 1;
  }
  c.expect(repeats && l_sequence(2, 1)[1].l == 3, "all 8 words of length 3 have rd >= 1");

  // Qualitative solver vs value iteration.
  bool agree = true;
  for (int trial = 0; trial < 100; ++trial) {
    const ClassicalMdp m = testing::random_mdp(2 + trial % 19, 1 + trial % 3, rng);
    const auto v = mdp_value_iteration(m);
    const auto s = mdp_almost_sure_max(m);
    for (int i = 0; i < m.size(); ++i) agree = agree && (s[i] == (v[i] > 1.0 - 1e-6));
  }
  c.expect(agree, "almost-sure sets agree with value iteration");
}

}  // namespace

int main() {
  criterion("AC1", "nondeterministic example step law", ac1);
  criterion("AC2", "cycle example limits", ac2);
  criterion("AC3", "rotation example density", ac3);
  criterion("AC4", "scheduler synthesis", ac4);
  criterion("AC5", "rank-1 decisions", ac5);
  criterion("AC6", "bounded periodic enumeration", ac6);
  criterion("AC7", "spectral radius bounds", ac7);
  criterion("AC8", "loop termination", ac8);
  criterion("AC9", "property suites", ac9);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
