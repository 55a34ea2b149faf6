#include "qreach/evolution.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "qreach/error.hpp"
#include "qreach/invariants.hpp"

namespace qreach {
namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kSchemaViolation, path + ": " + what);
}

Word word_from_json(const io::Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected a list of names");
  Word w;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) schema_error(path + "[" + std::to_string(i) + "]", "expected a name");
    w.push_back(j[i].get<std::string>());
  }
  return w;
}

int memory_from_json(const io::Json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_string()) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(j.get<std::string>(), &used);
      if (used == j.get<std::string>().size()) return v;
    } catch (const std::exception&) {
    }
  }
  schema_error(path, "expected an integer memory id");
}

double mass_in(const Subspace& b, const CMatrix& rho) {
  return (b.projector() * rho).trace().real();
}

void check_state(const Qmdp& m, const CMatrix& rho0, const Subspace& b) {
  if (rho0.rows() != m.dim() || rho0.cols() != m.dim())
    throw Error(ErrorCode::kDimensionMismatch, "initial state does not match model dimension");
  if (b.ambient_dim() != m.dim())
    throw Error(ErrorCode::kDimensionMismatch, "target subspace does not match model dimension");
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

// -- Scheduler --------------------------------------------------------------------

Scheduler Scheduler::periodic(Word word) {
  if (word.empty()) throw Error(ErrorCode::kEmptyWord, "a periodic scheduler needs at least one letter");
  Scheduler s;
  s.periodic_ = true;
  s.period_ = static_cast<int>(word.size());
  s.word_ = std::move(word);
  return s;
}

Scheduler Scheduler::reactive(Memory initial, std::map<Memory, std::string> decisions,
                              std::map<std::tuple<Memory, std::string, std::string>, Memory> transitions) {
  Scheduler s;
  s.periodic_ = false;
  s.initial_ = initial;
  s.decisions_ = std::move(decisions);
  s.transitions_ = std::move(transitions);
  s.period_ = std::max<int>(1, static_cast<int>(s.decisions_.size()));
  return s;
}

Scheduler Scheduler::lasso(const Qmdp& m, const Word& prefix, const Word& cycle) {
  if (cycle.empty()) throw Error(ErrorCode::kEmptyWord, "the repeated part of a scheduler must be non-empty");
  Word all = prefix;
  all.insert(all.end(), cycle.begin(), cycle.end());
  const int p = static_cast<int>(prefix.size());
  const int n = static_cast<int>(all.size());
  std::map<Memory, std::string> decisions;
  std::map<std::tuple<Memory, std::string, std::string>, Memory> edges;
  for (int i = 0; i < n; ++i) {
    const std::string& name = all[i];
    decisions[i] = name;
    const int to = i + 1 < n ? i + 1 : p;
    if (m.is_measurement(name)) {
      for (const auto& [label, op] : m.measurement(name).operators) edges[{i, name, label}] = to;
    } else if (m.is_action(name)) {
      edges[{i, name, ""}] = to;
    } else {
      throw Error(ErrorCode::kUnknownName, "unknown name '" + name + "' in scheduler word");
    }
  }
  Scheduler s = reactive(0, std::move(decisions), std::move(edges));
  s.transient_ = p;
  s.period_ = static_cast<int>(cycle.size());
  return s;
}

const std::string& Scheduler::decide(Memory mem) const {
  if (periodic_) return word_[static_cast<std::size_t>(mem) % word_.size()];
  auto it = decisions_.find(mem);
  if (it == decisions_.end())
    throw Error(ErrorCode::kSchedulerViolation, "no decision for memory " + std::to_string(mem));
  return it->second;
}

Scheduler::Memory Scheduler::next(Memory mem, const std::string& name, const std::string& outcome) const {
  if (periodic_) return (mem + 1) % static_cast<Memory>(word_.size());
  auto it = transitions_.find({mem, name, outcome});
  if (it == transitions_.end())
    throw Error(ErrorCode::kSchedulerViolation, "no transition from memory " + std::to_string(mem) + " on " + name +
                                                    (outcome.empty() ? "" : " outcome " + outcome));
  return it->second;
}

void Scheduler::validate(const Qmdp& m) const {
  if (periodic_) {
    for (const auto& name : word_)
      if (!m.has_name(name)) throw Error(ErrorCode::kUnknownName, "unknown name '" + name + "' in scheduler");
    return;
  }
  std::set<Memory> seen{initial_};
  std::deque<Memory> queue{initial_};
  while (!queue.empty()) {
    const Memory mem = queue.front();
    queue.pop_front();
    const std::string& name = decide(mem);
    if (!m.has_name(name)) throw Error(ErrorCode::kUnknownName, "unknown name '" + name + "' in scheduler");
    std::vector<std::string> outcomes{""};
    if (m.is_measurement(name)) {
      outcomes.clear();
      for (const auto& [label, op] : m.measurement(name).operators) outcomes.push_back(label);
    }
    for (const auto& o : outcomes) {
      const Memory to = next(mem, name, o);
      if (seen.insert(to).second) queue.push_back(to);
    }
  }
}

io::Json Scheduler::to_json() const {
  if (periodic_) return io::Json{{"type", "periodic"}, {"word", word_}};
  io::Json decisions = io::Json::object();
  for (const auto& [mem, name] : decisions_) decisions[std::to_string(mem)] = name;
  io::Json edges = io::Json::array();
  for (const auto& [key, to] : transitions_) {
    const auto& [from, name, outcome] = key;
    io::Json event = outcome.empty() ? io::Json{{"action", name}} : io::Json{{"measurement", name}, {"outcome", outcome}};
    edges.push_back({{"from", from}, {"event", event}, {"to", to}});
  }
  return io::Json{{"type", "reactive"}, {"initial", initial_}, {"decisions", decisions}, {"transitions", edges}};
}

Scheduler Scheduler::from_json(const io::Json& j, const Qmdp& m, const std::string& path) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    schema_error(path + ".type", "expected \"periodic\", \"reactive\" or \"lasso\"");
  const std::string type = j["type"].get<std::string>();
  Scheduler s;
  if (type == "periodic") {
    if (!j.contains("word")) schema_error(path + ".word", "missing");
    s = periodic(word_from_json(j["word"], path + ".word"));
  } else if (type == "lasso") {
    const Word prefix = j.contains("prefix") ? word_from_json(j["prefix"], path + ".prefix") : Word{};
    if (!j.contains("cycle")) schema_error(path + ".cycle", "missing");
    s = lasso(m, prefix, word_from_json(j["cycle"], path + ".cycle"));
  } else if (type == "reactive") {
    if (!j.contains("initial")) schema_error(path + ".initial", "missing");
    const Memory initial = memory_from_json(j["initial"], path + ".initial");
    if (!j.contains("decisions") || !j["decisions"].is_object())
      schema_error(path + ".decisions", "expected an object");
    std::map<Memory, std::string> decisions;
    for (const auto& [key, value] : j["decisions"].items()) {
      const std::string kp = path + ".decisions." + key;
      if (!value.is_string()) schema_error(kp, "expected a name");
      decisions[memory_from_json(io::Json(key), kp)] = value.get<std::string>();
    }
    std::map<std::tuple<Memory, std::string, std::string>, Memory> edges;
    if (j.contains("transitions")) {
      if (!j["transitions"].is_array()) schema_error(path + ".transitions", "expected a list");
      for (std::size_t i = 0; i < j["transitions"].size(); ++i) {
        const std::string tp = path + ".transitions[" + std::to_string(i) + "]";
        const io::Json& t = j["transitions"][i];
        if (!t.is_object() || !t.contains("from") || !t.contains("to") || !t.contains("event"))
          schema_error(tp, "expected {from, event, to}");
        const io::Json& ev = t["event"];
        std::string name, outcome;
        if (ev.contains("action") && ev["action"].is_string()) {
          name = ev["action"].get<std::string>();
        } else if (ev.contains("measurement") && ev["measurement"].is_string() && ev.contains("outcome") &&
                   ev["outcome"].is_string()) {
          name = ev["measurement"].get<std::string>();
          outcome = ev["outcome"].get<std::string>();
          if (outcome.empty()) schema_error(tp + ".event.outcome", "empty outcome label");
        } else {
          schema_error(tp + ".event", "expected {\"action\"} or {\"measurement\", \"outcome\"}");
        }
        edges[{memory_from_json(t["from"], tp + ".from"), name, outcome}] = memory_from_json(t["to"], tp + ".to");
      }
    }
    s = reactive(initial, std::move(decisions), std::move(edges));
  } else {
    schema_error(path + ".type", "unknown scheduler type '" + type + "'");
  }
  s.validate(m);
  return s;
}

// -- evolution --------------------------------------------------------------------

Frontier initial_frontier(const Scheduler& sched, const CMatrix& rho0) {
  Frontier f;
  f.branches.push_back({1.0, rho0, sched.initial(), ""});
  return f;
}

Frontier step_frontier(const Qmdp& m, const Scheduler& sched, const Frontier& f, const Tolerances& tol) {
  Frontier out;
  out.step = f.step + 1;
  out.pruned_mass = f.pruned_mass;
  for (const auto& br : f.branches) {
    const std::string& name = sched.decide(br.memory);
    if (!m.has_name(name)) throw Error(ErrorCode::kUnknownName, "scheduler chose undeclared name '" + name + "'");
    if (!m.allows(br.last, name))
      throw Error(ErrorCode::kSchedulerViolation, "'" + name + "' is not available after '" + br.last + "'");
    if (m.is_action(name)) {
      out.branches.push_back(
          {br.weight, apply_superop(m.action(name).channel, br.state), sched.next(br.memory, name, ""), name});
      continue;
    }
    for (const auto& [label, op] : m.measurement(name).operators) {
      CMatrix post = op * br.state * op.adjoint();
      const double p = post.trace().real();
      const double w = br.weight * p;
      if (w <= tol.prune) {
        out.pruned_mass += std::max(0.0, w);
        continue;
      }
      out.branches.push_back({w, post / p, sched.next(br.memory, name, label), name});
    }
  }
  return out;
}

Frontier merge_branches(const Frontier& f) {
  Frontier out;
  out.step = f.step;
  out.pruned_mass = f.pruned_mass;
  std::map<std::pair<Scheduler::Memory, std::string>, std::size_t> slot;
  for (const auto& br : f.branches) {
    auto [it, fresh] = slot.try_emplace({br.memory, br.last}, out.branches.size());
    if (fresh) {
      out.branches.push_back(br);
      continue;
    }
    Branch& into = out.branches[it->second];
    const double w = into.weight + br.weight;
    into.state = (into.weight * into.state + br.weight * br.state) / w;
    into.weight = w;
  }
  return out;
}

CMatrix global_state(const Frontier& f) {
  if (f.branches.empty()) return CMatrix();
  CMatrix acc = CMatrix::Zero(f.branches[0].state.rows(), f.branches[0].state.cols());
  for (const auto& br : f.branches) acc += br.weight * br.state;
  return acc;
}

double reach_at_step(const Qmdp& m, const Scheduler& sched, const CMatrix& rho0, const Subspace& b, int n,
                     const Tolerances& tol) {
  check_state(m, rho0, b);
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "step count must be non-negative");
  Frontier f = initial_frontier(sched, rho0);
  for (int i = 0; i < n; ++i) f = merge_branches(step_frontier(m, sched, f, tol));
  return clamp01(mass_in(b, global_state(f)));
}

LimitResult reach_limit(const Qmdp& m, const Scheduler& sched, const CMatrix& rho0, const Subspace& b,
                        const Tolerances& tol, int max_steps) {
  check_state(m, rho0, b);
  if (!is_invariant_model(b, m, tol))
    throw Error(ErrorCode::kNotInvariant, "target subspace is not invariant; the limit may not exist (use limsup)");
  const int window = static_cast<int>(m.dim() - b.dim() + 1) * sched.period();
  LimitResult r;
  Frontier f = initial_frontier(sched, rho0);
  r.trace.push_back(clamp01(mass_in(b, rho0)));
  if (r.trace.back() >= 1.0 - tol.conv) {
    r.converged = true;
  }
  for (int n = 1; n <= max_steps && !r.converged; ++n) {
    f = merge_branches(step_frontier(m, sched, f, tol));
    const double v = clamp01(mass_in(b, global_state(f)));
    r.trace.push_back(v);
    if (v >= 1.0 - tol.conv) r.converged = true;
    if (n >= sched.transient() + window && v - r.trace[n - window] < tol.conv) r.converged = true;
  }
  r.steps = static_cast<int>(r.trace.size()) - 1;
  r.value = r.trace.back();
  r.pruned_mass = f.pruned_mass;
  return r;
}

LimsupEstimate estimate_limsup(const Qmdp& m, const Scheduler& sched, const CMatrix& rho0, const Subspace& b,
                               int window, int max_steps, const Tolerances& tol) {
  check_state(m, rho0, b);
  if (window < 1 || max_steps < 0) throw Error(ErrorCode::kInvalidArgument, "window must be positive");
  LimsupEstimate r;
  Frontier f = initial_frontier(sched, rho0);
  r.trace.push_back(clamp01(mass_in(b, rho0)));
  for (int n = 1; n <= max_steps; ++n) {
    f = merge_branches(step_frontier(m, sched, f, tol));
    r.trace.push_back(clamp01(mass_in(b, global_state(f))));
  }
  const std::size_t from = r.trace.size() > static_cast<std::size_t>(window) ? r.trace.size() - window : 0;
  r.estimate = *std::max_element(r.trace.begin() + static_cast<std::ptrdiff_t>(from), r.trace.end());
  r.pruned_mass = f.pruned_mass;
  return r;
}

}  // namespace qreach
