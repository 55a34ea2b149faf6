#include "qreach/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qreach/decision.hpp"
#include "qreach/error.hpp"
#include "qreach/evolution.hpp"
#include "qreach/examples.hpp"
#include "qreach/invariants.hpp"
#include "qreach/io.hpp"
#include "qreach/synthesis.hpp"
#include "qreach/termination.hpp"

namespace qreach::cli {
namespace {

using io::Json;

constexpr const char* kLiteralNote =
    "literal mode moves each action to the aggregate support of its image; this can disagree with the "
    "quantum supremum (per-Kraus branching is the default)";

struct Options {
  std::string model_path;
  std::string target_path;
  std::string initial_path;
  std::string scheduler_path;
  std::vector<std::string> word;
  std::optional<int> steps;
  int max_steps = 10000;
  int window = 100;
  std::string mode;
  int kmax = 6;
  std::uint64_t budget = 1000000;
  bool no_timing = false;
  bool serial = false;
  std::string guard_path;
  std::vector<std::string> unitary_paths;
  std::string example;
  std::optional<double> tol, eps_rank, eps_sym, eps_valid, eps_prune, eps_conv;
};

// Input files, loaded lazily; every text read feeds the digest.
class Inputs {
 public:
  Inputs(std::istream& in, std::uint64_t seed) : in_(in), digest_(seed) {}

  std::string read(const std::string& path, const std::string& what) {
    std::string text;
    if (path == "-") {
      if (stdin_used_) throw Error(ErrorCode::kInvalidArgument, "only one input may come from standard input");
      stdin_used_ = true;
      std::ostringstream ss;
      ss << in_.rdbuf();
      text = ss.str();
    } else {
      std::ifstream f(path, std::ios::binary);
      if (!f) throw Error(ErrorCode::kInvalidArgument, "cannot open " + what + " file '" + path + "'");
      std::ostringstream ss;
      ss << f.rdbuf();
      text = ss.str();
    }
    digest_ = fnv1a(what + '\0' + text + '\0', digest_);
    return text;
  }

  std::uint64_t digest() const { return digest_; }

 private:
  std::istream& in_;
  std::uint64_t digest_;
  bool stdin_used_ = false;
};

struct Loaded {
  Qmdp model;
  Json metadata;  // null when absent
};

Loaded load(Inputs& inputs, const Options& o) {
  if (o.model_path.empty()) throw Error(ErrorCode::kInvalidArgument, "--model is required");
  const std::string text = inputs.read(o.model_path, "model");
  Loaded l{load_model(text), Json()};
  const Json j = io::parse(text, "model");
  if (j.contains("metadata")) l.metadata = j["metadata"];
  return l;
}

std::vector<Json> findings_json(const std::vector<Finding>& fs) {
  std::vector<Json> out;
  for (const auto& f : fs) out.push_back({{"component", f.component}, {"message", f.message}, {"residual", f.residual}});
  return out;
}

Word names_of(const std::vector<std::string>& alphabet, const LetterWord& w) {
  Word out;
  for (int x : w) out.push_back(alphabet[x]);
  return out;
}

class Command {
 public:
  Command(std::string name, const Options& o, Inputs& inputs, Tolerances tol)
      : name_(std::move(name)), o_(o), inputs_(inputs), tol_(tol), start_(std::chrono::steady_clock::now()) {}

  Json& report() { return report_; }
  const Tolerances& tol() const { return tol_; }
  Exec exec() const { return o_.serial ? Exec::kSerial : Exec::kParallel; }

  Loaded& model() {
    if (!loaded_) {
      loaded_ = load(inputs_, o_);
      const auto findings = validate_model(loaded_->model, tol_);
      if (!findings.empty()) {
        report_["findings"] = findings_json(findings);
        throw Error(ErrorCode::kSchemaViolation, findings.front().message);
      }
    }
    return *loaded_;
  }

  Subspace target() {
    const Qmdp& m = model().model;
    if (!o_.target_path.empty())
      return io::subspace_from_json(io::parse(inputs_.read(o_.target_path, "target"), "target"), m.dim(), "target", tol_);
    if (model().metadata.contains("target"))
      return io::subspace_from_json(model().metadata["target"], m.dim(), "metadata.target", tol_);
    throw Error(ErrorCode::kInvalidArgument, "--target is required");
  }

  bool has_initial() { return !o_.initial_path.empty() || model().metadata.contains("initial"); }

  CMatrix initial(Index d) {
    if (!o_.initial_path.empty())
      return io::state_from_json(io::parse(inputs_.read(o_.initial_path, "initial"), "initial"), d, "initial", tol_);
    if (loaded_ && loaded_->metadata.contains("initial"))
      return io::state_from_json(loaded_->metadata["initial"], d, "metadata.initial", tol_);
    throw Error(ErrorCode::kInvalidArgument, "--initial is required");
  }

  Scheduler scheduler() {
    const Qmdp& m = model().model;
    if (!o_.scheduler_path.empty())
      return Scheduler::from_json(io::parse(inputs_.read(o_.scheduler_path, "scheduler"), "scheduler"), m);
    if (!o_.word.empty()) return word_to_scheduler(m, o_.word);
    const Json& meta = model().metadata;
    if (meta.contains("schedulers") && meta["schedulers"].is_array() && !meta["schedulers"].empty())
      return Scheduler::from_json(meta["schedulers"][0], m, "metadata.schedulers[0]");
    throw Error(ErrorCode::kInvalidArgument, "--scheduler or --word is required");
  }

  std::string read(const std::string& path, const std::string& what) { return inputs_.read(path, what); }

  void finish(std::ostream& out, const std::string& theorem, const std::string& verdict) {
    report_["report_version"] = 1;
    report_["command"] = name_;
    report_["theorem"] = theorem;
    report_["verdict"] = verdict;
    char digest[17];
    std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(inputs_.digest()));
    report_["inputs"] = {{"digest", digest}};
    Json& diag = report_["diagnostics"];
    diag["tolerances"] = {{"eps_rank", tol_.rank},
                          {"eps_sym", tol_.sym},
                          {"eps_valid", tol_.valid},
                          {"eps_prune", tol_.prune},
                          {"eps_conv", tol_.conv}};
    diag["execution"] = o_.serial ? "serial" : "parallel";
    if (!o_.no_timing)
      diag["timing_ms"] =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    out << report_.dump(2) << "\n";
  }

 private:
  std::string name_;
  const Options& o_;
  Inputs& inputs_;
  Tolerances tol_;
  std::chrono::steady_clock::time_point start_;
  std::optional<Loaded> loaded_;
  Json report_ = Json::object();
};

// -- commands ---------------------------------------------------------------------

int cmd_validate(Command& c, const Options& o, Inputs& inputs, std::ostream& out) {
  const Loaded l = load(inputs, o);
  const auto findings = validate_model(l.model, c.tol());
  c.report()["findings"] = findings_json(findings);
  c.report()["dimension"] = l.model.dim();
  c.report()["names"] = l.model.names();
  c.finish(out, "model-validation", findings.empty() ? "VALID" : "INVALID");
  return findings.empty() ? kOk : kInvalidInput;
}

int cmd_reach(Command& c, const Options& o, std::ostream& out) {
  const Qmdp& m = c.model().model;
  const Subspace b = c.target();
  const CMatrix rho0 = c.initial(m.dim());
  const Scheduler s = c.scheduler();
  Json& r = c.report();
  r["scheduler"] = s.to_json();
  if (o.steps) {
    Frontier f = initial_frontier(s, rho0);
    std::vector<double> trace{(b.projector() * rho0).trace().real()};
    for (int n = 0; n < *o.steps; ++n) {
      f = merge_branches(step_frontier(m, s, f, c.tol()));
      trace.push_back((b.projector() * global_state(f)).trace().real());
    }
    r["probability"] = reach_at_step(m, s, rho0, b, *o.steps, c.tol());
    r["steps"] = *o.steps;
    r["trace"] = trace;
    r["diagnostics"]["pruned_mass"] = f.pruned_mass;
    c.finish(out, "step-reachability", "EVALUATED");
    return kOk;
  }
  const LimitResult lim = reach_limit(m, s, rho0, b, c.tol(), o.max_steps);
  r["probability"] = lim.value;
  r["converged"] = lim.converged;
  r["steps"] = lim.steps;
  r["trace"] = lim.trace;
  r["lower_bound"] = true;
  r["diagnostics"]["pruned_mass"] = lim.pruned_mass;
  r["diagnostics"]["max_steps"] = o.max_steps;
  c.finish(out, "monotone-invariant-reachability", lim.converged ? "CONVERGED" : "NOT_CONVERGED");
  return kOk;
}

int cmd_limsup(Command& c, const Options& o, std::ostream& out) {
  const Qmdp& m = c.model().model;
  const Subspace b = c.target();
  const CMatrix rho0 = c.initial(m.dim());
  const Scheduler s = c.scheduler();
  const int max_steps = o.max_steps == 10000 ? 1000 : o.max_steps;
  const LimsupEstimate e = estimate_limsup(m, s, rho0, b, o.window, max_steps, c.tol());
  Json& r = c.report();
  r["scheduler"] = s.to_json();
  r["estimate"] = e.estimate;
  r["label"] = "HEURISTIC";
  r["window"] = o.window;
  r["trace"] = e.trace;
  r["diagnostics"]["pruned_mass"] = e.pruned_mass;
  r["diagnostics"]["max_steps"] = max_steps;
  c.finish(out, "limsup-window-estimate", "HEURISTIC");
  return kOk;
}

int cmd_invariant(Command& c, const Options& o, std::ostream& out) {
  const Qmdp& m = c.model().model;
  const Subspace b = c.target();
  Json& r = c.report();
  const bool inv = is_invariant_model(b, m, c.tol());
  r["invariant"] = inv;
  if (!o.word.empty()) {
    const XSubspace x = x_subspace(m, o.word, b, c.tol());
    r["x_subspace"] = {{"word", o.word}, {"dim", x.space.dim()}, {"subspace", io::subspace_to_json(x.space)},
                       {"advisory", x.advisory}};
  }
  std::string verdict = inv ? "INVARIANT" : "NOT_INVARIANT";
  if (inv) {
    const auto w = find_invariant_in_complement(m, b, c.tol());
    r["complement_witness"] = w ? Json(io::subspace_to_json(w->space)) : Json();
    if (w) {
      Json res = Json::object();
      for (const auto& [name, v] : w->residuals) res[name] = v;
      r["witness_residuals"] = res;
    }
  }
  c.finish(out, "invariant-subspace-check", verdict);
  return kOk;
}

int cmd_synthesize(Command& c, std::ostream& out) {
  const Qmdp& m = c.model().model;
  const Subspace b = c.target();
  const SynthesisVerdict v = find_optimal_scheduler(m, b, c.tol(), c.exec());
  Json& r = c.report();
  Json trace = Json::array();
  for (const auto& st : v.trace) trace.push_back({{"word", st.word}, {"dim", st.dim}});
  r["trace"] = trace;
  std::string verdict;
  switch (v.kind) {
    case SynthesisKind::kTriviallyReached:
      verdict = "TRIVIALLY_REACHED";
      break;
    case SynthesisKind::kNoScheduler:
      verdict = "NO_SCHEDULER";
      r["reason"] = *v.reason == NoSchedulerReason::kNotInvariantTarget ? "NOT_INVARIANT_TARGET" : "INVARIANT_WITNESS";
      if (v.witness) r["witness_basis"] = io::subspace_to_json(v.witness->space)["basis"];
      break;
    case SynthesisKind::kScheduler:
      verdict = "SCHEDULER";
      r["word"] = v.word;
      r["scheduler"] = word_to_scheduler(m, v.word).to_json();
      break;
  }
  c.finish(out, "periodic-scheduler-synthesis", verdict);
  return kOk;
}

SupportMode support_mode(const std::string& mode) {
  if (mode.empty() || mode == "per_kraus") return SupportMode::kPerKraus;
  if (mode == "literal") return SupportMode::kLiteral;
  throw Error(ErrorCode::kInvalidArgument, "--mode must be per_kraus or literal for rank1");
}

Json mdp_json(const ClassicalMdp& mdp, const std::vector<bool>& winning) {
  Json states = Json::array();
  for (int s = 0; s < mdp.size(); ++s) {
    Json edges = Json::object();
    for (std::size_t a = 0; a < mdp.actions.size(); ++a) {
      Json row = Json::array();
      for (const auto& [p, t] : mdp.transitions[s][a]) row.push_back({{"p", p}, {"to", t}});
      edges[mdp.actions[a]] = row;
    }
    states.push_back({{"support", io::subspace_to_json(mdp.states[s])},
                      {"target", static_cast<bool>(mdp.target[s])},
                      {"winning", static_cast<bool>(winning[s])},
                      {"transitions", edges}});
  }
  return {{"initial", mdp.initial}, {"states", states}};
}

int cmd_rank1(Command& c, const Options& o, std::ostream& out) {
  const Qmdp& m = c.model().model;
  const Subspace b = c.target();
  const SupportMode mode = support_mode(o.mode);
  const auto form = detect_rank_one(m, c.tol());
  if (!form) throw Error(ErrorCode::kNotRank1, "model has an operator of rank greater than one");
  Json& r = c.report();
  r["n_max"] = form->n_max;
  r["diagnostics"]["mode"] = mode == SupportMode::kLiteral ? "literal" : "per_kraus";
  if (mode == SupportMode::kLiteral) r["ambiguity"] = kLiteralNote;
  const Rank1Decision all = decide_all_sched_rank1(m, b, mode, c.tol());
  r["all_schedulers"] = {{"holds", all.holds}, {"mdp_states", all.mdp.size()}};
  std::string verdict = all.holds ? "ALL_SCHEDULERS_REACH" : "NOT_ALL_SCHEDULERS_REACH";
  if (c.has_initial()) {
    const Rank1Decision sup = decide_sup_one_rank1(m, c.initial(m.dim()), b, mode, c.tol());
    const auto values = mdp_value_iteration(sup.mdp);
    r["sup_one"] = {{"holds", sup.holds}, {"value", values[sup.mdp.initial]}, {"mdp", mdp_json(sup.mdp, sup.winning)}};
    verdict = sup.holds ? "SUP_ONE" : "SUP_BELOW_ONE";
  }
  c.finish(out, "rank1-support-abstraction", verdict);
  return kOk;
}

int cmd_enumerate(Command& c, const Options& o, std::ostream& out) {
  const Qmdp& m = c.model().model;
  const Subspace b = c.target();
  const BoundedResult res = decide_all_sched_bounded(m, b, o.budget, c.tol(), c.exec());
  Json& r = c.report();
  r["q"] = res.q;
  r["l_q"] = res.l_q.overflow ? Json("overflow") : Json(res.l_q.l);
  r["checked_length"] = res.checked_length;
  r["words_checked"] = res.words_checked;
  r["diagnostics"]["budget"] = o.budget;
  std::string verdict = "ALL_REACH";
  if (res.verdict == BoundedVerdict::kCounterexample) {
    verdict = "COUNTEREXAMPLE";
    r["counterexample"] = res.counterexample;
  } else if (res.verdict == BoundedVerdict::kBudgetExceeded) {
    verdict = "BUDGET_EXCEEDED";
  }
  c.finish(out, "bounded-periodic-enumeration", verdict);
  return res.verdict == BoundedVerdict::kBudgetExceeded ? kBudgetExhausted : kOk;
}

int cmd_jsr(Command& c, const Options& o, std::ostream& out) {
  const Qmdp& m = c.model().model;
  const Subspace b = c.target();
  const auto sigma = sigma_matrices(m, b, c.tol());
  const JsrReport rep = jsr_bounds(sigma, o.kmax, o.budget, c.tol(), c.exec());
  std::vector<std::string> alphabet;
  for (const auto& a : m.actions()) alphabet.push_back(a.name);
  Json& r = c.report();
  Json rows = Json::array();
  for (const auto& row : rep.rows)
    rows.push_back({{"k", row.k},
                    {"upper", row.upper},
                    {"lower", row.lower},
                    {"argmax", names_of(alphabet, row.argmax)},
                    {"argmin", names_of(alphabet, row.argmin)}});
  r["radii"] = rows;
  r["kmax"] = o.kmax;
  r["diagnostics"]["budget"] = o.budget;
  std::string verdict = "INCONCLUSIVE";
  if (rep.verdict == JsrVerdict::kAllSchedulersReach) verdict = "ALL_SCHEDULERS_REACH";
  if (rep.verdict == JsrVerdict::kExistsScheduler) {
    verdict = "EXISTS_SCHEDULER";
    r["witness"] = names_of(alphabet, rep.witness);
  }
  c.finish(out, "spectral-radius-characterization", verdict);
  return kOk;
}

CMatrix matrix_file(const std::string& text, const std::string& what, const char* key) {
  const Json j = io::parse(text, what);
  if (j.is_object() && j.contains(key)) return io::matrix_from_json(j[key], what + "." + key);
  return io::matrix_from_json(j, what);
}

int cmd_terminate(Command& c, const Options& o, std::ostream& out) {
  LoopSpec spec;
  if (!o.guard_path.empty()) {
    spec.guard = matrix_file(c.read(o.guard_path, "guard"), "guard", "projector");
    for (std::size_t i = 0; i < o.unitary_paths.size(); ++i)
      spec.unitaries.push_back(
          matrix_file(c.read(o.unitary_paths[i], "unitary"), "unitary[" + std::to_string(i) + "]", "matrix"));
  } else if (!o.example.empty()) {
    const Example ex = generate_example(o.example);
    if (!ex.loop) throw Error(ErrorCode::kInvalidArgument, "example '" + o.example + "' is not a loop program");
    spec = *ex.loop;
  } else {
    const Json& meta = c.model().metadata;
    if (!meta.contains("loop")) throw Error(ErrorCode::kInvalidArgument, "--guard and --unitary are required");
    spec.guard = io::matrix_from_json(meta["loop"]["guard"], "metadata.loop.guard");
    for (std::size_t i = 0; i < meta["loop"]["unitaries"].size(); ++i)
      spec.unitaries.push_back(io::matrix_from_json(meta["loop"]["unitaries"][i],
                                                    "metadata.loop.unitaries[" + std::to_string(i) + "]"));
  }
  const LoopProgram lp = build_loop_model(spec.guard, spec.unitaries, c.tol());
  CMatrix rho0;
  if (!o.initial_path.empty()) {
    rho0 = c.initial(lp.model.dim());
  } else {
    rho0 = CMatrix::Zero(lp.model.dim(), lp.model.dim());
    const Subspace t = subspace_complement(lp.exit, c.tol());
    if (t.is_zero()) throw Error(ErrorCode::kInvalidArgument, "--initial is required");
    rho0 = t.basis().col(0) * t.basis().col(0).adjoint();
  }
  if (o.mode != "" && o.mode != "restricted" && o.mode != "literal")
    throw Error(ErrorCode::kInvalidArgument, "--mode must be restricted or literal for terminate");
  const TerminationMode mode = o.mode == "literal" ? TerminationMode::kLiteral : TerminationMode::kRestricted;
  const TerminationReport t = termination_probability(lp, rho0, mode, c.tol(), o.max_steps);
  Json& r = c.report();
  r["probability"] = t.probability;
  r["restricted"] = {{"probability", t.restricted_probability},
                     {"trapped", io::subspace_to_json(t.trapped_restricted)},
                     {"dim", t.trapped_restricted.dim()}};
  r["literal"] = {{"probability", t.literal_probability},
                  {"trapped", io::subspace_to_json(t.trapped_literal)},
                  {"dim", t.trapped_literal.dim()}};
  r["modes_differ"] = std::abs(t.literal_probability - t.restricted_probability) > c.tol().valid;
  r["witness"] = t.witness;
  r["simulation"] = {{"probability", t.simulated}, {"converged", t.simulation_converged}, {"steps", t.simulation_steps}};
  r["diagnostics"]["mode"] = mode == TerminationMode::kLiteral ? "literal" : "restricted";
  const double p = t.probability;
  c.finish(out, "loop-termination", p >= 1.0 - c.tol().valid ? "TERMINATES" : p <= c.tol().valid ? "NEVER_TERMINATES"
                                                                                                  : "TERMINATES_PARTIALLY");
  return kOk;
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBudgetExceeded:
      return kBudgetExhausted;
    case ErrorCode::kDivergentCesaro:
    case ErrorCode::kWitnessExtractionFailed:
    case ErrorCode::kInternal:
      return kInternalError;
    default:
      return kInvalidInput;
  }
}

Tolerances effective_tolerances(const Options& o) {
  Tolerances tol = Tolerances::from_environment();
  if (o.eps_rank) tol.rank = *o.eps_rank;
  if (o.eps_sym) tol.sym = *o.eps_sym;
  if (o.eps_valid) tol.valid = *o.eps_valid;
  if (o.eps_prune) tol.prune = *o.eps_prune;
  if (o.tol) tol.conv = *o.tol;
  if (o.eps_conv) tol.conv = *o.eps_conv;
  tol.check();
  return tol;
}

}  // namespace

std::uint64_t fnv1a(const std::string& data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reachability analysis for quantum Markov decision processes", "qreach"};
  app.require_subcommand(1);
  Options o;
  std::string example_name;

  auto common = [&](CLI::App* sub, bool needs_target) {
    sub->add_option("--model", o.model_path, "model JSON file, or - for stdin");
    if (needs_target) sub->add_option("--target", o.target_path, "subspace JSON file (default: model metadata)");
    sub->add_option("--tol", o.tol, "convergence tolerance (eps_conv)");
    sub->add_option("--eps-rank", o.eps_rank);
    sub->add_option("--eps-sym", o.eps_sym);
    sub->add_option("--eps-valid", o.eps_valid);
    sub->add_option("--eps-prune", o.eps_prune);
    sub->add_option("--eps-conv", o.eps_conv);
    sub->add_flag("--no-timing", o.no_timing, "omit timings so reports are byte-stable");
    sub->add_flag("--serial", o.serial, "use the serial word enumeration");
  };
  auto with_run = [&](CLI::App* sub) {
    sub->add_option("--initial", o.initial_path, "state JSON file (default: model metadata)");
    sub->add_option("--scheduler", o.scheduler_path, "scheduler JSON file");
    sub->add_option("--word", o.word, "periodic scheduler word, comma separated")->delimiter(',');
  };

  auto* validate = app.add_subcommand("validate", "check completeness and dimensions");
  common(validate, false);
  auto* reach = app.add_subcommand("reach", "reachability at a step, or the limit for an invariant target");
  common(reach, true);
  with_run(reach);
  reach->add_option("--steps", o.steps, "evaluate at this step instead of the limit");
  reach->add_option("--max-steps", o.max_steps);
  auto* limsup = app.add_subcommand("limsup", "heuristic limsup estimate for any target");
  common(limsup, true);
  with_run(limsup);
  limsup->add_option("--window", o.window);
  limsup->add_option("--max-steps", o.max_steps);
  auto* invariant = app.add_subcommand("invariant", "invariance check, X subspace and complement witness");
  common(invariant, true);
  invariant->add_option("--word", o.word, "word for the X subspace, comma separated")->delimiter(',');
  auto* synthesize = app.add_subcommand("synthesize", "periodic scheduler reaching B with probability 1");
  common(synthesize, true);
  auto* rank1 = app.add_subcommand("rank1", "support-MDP decisions for rank-1 models");
  common(rank1, true);
  rank1->add_option("--initial", o.initial_path);
  rank1->add_option("--mode", o.mode, "per_kraus (default) or literal");
  auto* enumerate = app.add_subcommand("enumerate", "bounded enumeration of periodic schedulers");
  common(enumerate, true);
  enumerate->add_option("--budget", o.budget);
  auto* jsr = app.add_subcommand("jsr", "joint and lower spectral radius bounds");
  common(jsr, true);
  jsr->add_option("--kmax", o.kmax);
  jsr->add_option("--budget", o.budget);
  auto* terminate = app.add_subcommand("terminate", "termination probability of a concurrent loop");
  common(terminate, false);
  terminate->add_option("--guard", o.guard_path, "projector P1 (matrix or {\"projector\": ...})");
  terminate->add_option("--unitary", o.unitary_paths, "loop body unitary; repeat per process")->take_all();
  terminate->add_option("--initial", o.initial_path);
  terminate->add_option("--mode", o.mode, "restricted (default) or literal");
  terminate->add_option("--example", o.example, "built-in loop example");
  terminate->add_option("--max-steps", o.max_steps);
  auto* example = app.add_subcommand("example", "print a built-in example model");
  example->add_option("name", example_name, "one of: example-nondeterministic, example-rotation, example-cycle, "
                                            "loop-not, loop-id, loop-two-process")
      ->required();
  bool unused_no_timing = false;
  example->add_flag("--no-timing", unused_no_timing, "accepted for uniformity; example output has no timings");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  std::string joined;
  for (const auto& a : args)
    if (a != "--no-timing") joined += a + '\0';
  Inputs inputs(in, fnv1a(joined));

  std::optional<Command> cmd;
  try {
    if (name == "example") {
      out << example_to_json(generate_example(example_name));
      return kOk;
    }
    cmd.emplace(name, o, inputs, effective_tolerances(o));
    if (name == "validate") return cmd_validate(*cmd, o, inputs, out);
    if (name == "reach") return cmd_reach(*cmd, o, out);
    if (name == "limsup") return cmd_limsup(*cmd, o, out);
    if (name == "invariant") return cmd_invariant(*cmd, o, out);
    if (name == "synthesize") return cmd_synthesize(*cmd, out);
    if (name == "rank1") return cmd_rank1(*cmd, o, out);
    if (name == "enumerate") return cmd_enumerate(*cmd, o, out);
    if (name == "jsr") return cmd_jsr(*cmd, o, out);
    if (name == "terminate") return cmd_terminate(*cmd, o, out);
    throw Error(ErrorCode::kInternal, "unhandled subcommand " + name);
  } catch (const Error& e) {
    err << "qreach " << name << ": " << to_string(e.code()) << ": " << e.what() << "\n";
    if (cmd) {
      cmd->report()["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
      cmd->finish(out, "none", "ERROR");
    }
    return exit_for(e.code());
  } catch (const std::exception& e) {
    err << "qreach " << name << ": internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace qreach::cli
