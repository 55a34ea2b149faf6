#include "qreach/decision.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>

#include <Eigen/SVD>

#include "qreach/error.hpp"
#include "qreach/invariants.hpp"

namespace qreach {
namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

std::optional<Rank1Term> dyad(const CMatrix& op, const Tolerances& tol, bool* rank_one) {
  *rank_one = true;
  if (op.norm() <= tol.prune) return std::nullopt;
  Eigen::JacobiSVD<CMatrix> svd(op, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s.size() > 1 && s(1) >= tol.rank * s(0)) {
    *rank_one = false;
    return std::nullopt;
  }
  return Rank1Term{s(0), svd.matrixU().col(0), svd.matrixV().col(0), ""};
}

bool fires(const Subspace& x, const Rank1Term& t, const Tolerances& tol) {
  return (x.projector() * t.psi).squaredNorm() > tol.rank;
}

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kMax / a) return kMax;
  return a * b;
}

std::uint64_t pow_sat(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    r = mul_sat(r, base);
    if (r == kMax || base <= 1) break;
  }
  return r;
}

void require_invariant(const Qmdp& m, const Subspace& b, const Tolerances& tol) {
  if (b.ambient_dim() != m.dim()) throw Error(ErrorCode::kDimensionMismatch, "target subspace has wrong dimension");
  if (!is_invariant_model(b, m, tol)) throw Error(ErrorCode::kNotInvariant, "target subspace is not invariant");
}

int rd(const std::vector<int>& s, std::map<std::vector<int>, int>& memo) {
  if (s.size() < 2) return 0;
  if (auto it = memo.find(s); it != memo.end()) return it->second;
  int best = 0;
  const std::size_t n = s.size();
  for (std::size_t len = 1; 2 * len <= n; ++len) {
    std::set<std::vector<int>> tried;
    for (std::size_t i = 0; i + 2 * len <= n; ++i) {
      std::vector<int> t(s.begin() + i, s.begin() + i + len);
      if (!tried.insert(t).second) continue;
      bool repeated = false;
      for (std::size_t j = i + len; j + len <= n && !repeated; ++j)
        repeated = std::equal(t.begin(), t.end(), s.begin() + j);
      if (repeated) best = std::max(best, rd(t, memo) + 1);
    }
  }
  memo[s] = best;
  return best;
}

}  // namespace

// -- rank-1 support abstraction ----------------------------------------------------

std::optional<Rank1Form> detect_rank_one(const Qmdp& m, const Tolerances& tol) {
  Rank1Form r;
  auto add_letter = [&](const std::string& name, bool measurement) {
    r.alphabet.push_back(name);
    r.is_measurement.push_back(measurement);
    r.terms.emplace_back();
  };
  bool ok = true;
  for (const auto& a : m.actions()) {
    add_letter(a.name, false);
    for (const auto& k : a.channel.ops)
      if (auto t = dyad(k, tol, &ok)) r.terms.back().push_back(std::move(*t));
      else if (!ok) return std::nullopt;
  }
  for (const auto& meas : m.measurements()) {
    add_letter(meas.name, true);
    for (const auto& [label, op] : meas.operators) {
      if (auto t = dyad(op, tol, &ok)) {
        t->outcome = label;
        r.terms.back().push_back(std::move(*t));
      } else if (!ok) {
        return std::nullopt;
      }
    }
  }
  for (const auto& ts : r.terms) r.n_max = std::max(r.n_max, static_cast<int>(ts.size()));
  return r;
}

ClassicalMdp build_support_mdp(const Qmdp& m, const Rank1Form& r1, const std::vector<Subspace>& seeds,
                               const Subspace& b, SupportMode mode, const Tolerances& tol) {
  if (m.availability())
    throw Error(ErrorCode::kInvalidArgument, "the support abstraction does not model availability restrictions");
  require_invariant(m, b, tol);
  if (seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "support abstraction needs an initial support");

  ClassicalMdp c;
  c.actions = r1.alphabet;
  std::deque<int> queue;
  auto intern = [&](const Subspace& x) {
    for (int i = 0; i < c.size(); ++i)
      if (c.states[i].equals(x, tol)) return i;
    c.states.push_back(x);
    c.target.push_back(subspace_contains(b, x, tol));
    c.transitions.emplace_back();
    queue.push_back(c.size() - 1);
    return c.size() - 1;
  };
  for (const auto& seed : seeds) {
    if (seed.is_zero() || seed.ambient_dim() != m.dim())
      throw Error(ErrorCode::kInvalidArgument, "support seeds must be nonzero subspaces of the state space");
    intern(seed);
  }
  c.initial = 0;

  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    std::vector<std::vector<std::pair<double, int>>> rows;
    for (std::size_t a = 0; a < r1.alphabet.size(); ++a) {
      const Subspace x = c.states[s];
      std::vector<int> succ;
      if (!r1.is_measurement[a] && mode == SupportMode::kLiteral) {
        const Subspace y = support(hermitian_part(apply_superop(m.action(r1.alphabet[a]).channel, x.projector())), tol);
        if (!y.is_zero()) succ.push_back(intern(y));
      } else {
        // One successor per firing operator; measurements count outcomes
        // (l(beta, x)), actions count distinct output supports.
        for (const auto& t : r1.terms[a]) {
          if (!fires(x, t, tol)) continue;
          const int y = intern(Subspace::span(t.phi, tol));
          if (r1.is_measurement[a] || std::find(succ.begin(), succ.end(), y) == succ.end()) succ.push_back(y);
        }
      }
      std::vector<std::pair<double, int>> row;
      for (int y : succ) {
        auto it = std::find_if(row.begin(), row.end(), [&](const auto& e) { return e.second == y; });
        if (it == row.end()) row.emplace_back(1.0 / static_cast<double>(succ.size()), y);
        else it->first += 1.0 / static_cast<double>(succ.size());
      }
      rows.push_back(std::move(row));
    }
    c.transitions[s] = std::move(rows);
  }
  return c;
}

std::vector<bool> mdp_almost_sure_max(const ClassicalMdp& c) {
  const int n = c.size();
  std::vector<bool> u(n, true);
  while (true) {
    std::vector<bool> r(n, false);
    for (int s = 0; s < n; ++s) r[s] = u[s] && c.target[s];
    for (bool grew = true; grew;) {
      grew = false;
      for (int s = 0; s < n; ++s) {
        if (!u[s] || r[s]) continue;
        for (const auto& row : c.transitions[s]) {
          if (row.empty()) continue;
          bool safe = true, progress = false;
          for (const auto& [p, t] : row) {
            safe = safe && u[t];
            progress = progress || r[t];
          }
          if (safe && progress) {
            r[s] = grew = true;
            break;
          }
        }
      }
    }
    if (r == u) return u;
    u = std::move(r);
  }
}

std::vector<bool> mdp_almost_sure_min(const ClassicalMdp& c) {
  const int n = c.size();
  // z: states from which the target can be avoided forever.
  std::vector<bool> z(n);
  for (int s = 0; s < n; ++s) z[s] = !c.target[s];
  for (bool shrunk = true; shrunk;) {
    shrunk = false;
    for (int s = 0; s < n; ++s) {
      if (!z[s]) continue;
      bool any_enabled = false, stays = false;
      for (const auto& row : c.transitions[s]) {
        if (row.empty()) continue;
        any_enabled = true;
        stays = stays || std::all_of(row.begin(), row.end(), [&](const auto& e) { return z[e.second]; });
      }
      if (any_enabled && !stays) {
        z[s] = false;
        shrunk = true;
      }
    }
  }
  // Anything that can reach z while avoiding the target has Pr^min < 1.
  std::vector<bool> bad = z;
  for (bool grew = true; grew;) {
    grew = false;
    for (int s = 0; s < n; ++s) {
      if (bad[s] || c.target[s]) continue;
      for (const auto& row : c.transitions[s]) {
        if (std::any_of(row.begin(), row.end(), [&](const auto& e) { return bad[e.second]; })) {
          bad[s] = grew = true;
          break;
        }
      }
    }
  }
  std::vector<bool> out(n);
  for (int s = 0; s < n; ++s) out[s] = !bad[s];
  return out;
}

std::vector<double> mdp_value_iteration(const ClassicalMdp& c, double tol, int max_iter) {
  const int n = c.size();
  std::vector<double> v(n);
  for (int s = 0; s < n; ++s) v[s] = c.target[s] ? 1.0 : 0.0;
  for (int it = 0; it < max_iter; ++it) {
    double delta = 0.0;
    std::vector<double> next = v;
    for (int s = 0; s < n; ++s) {
      if (c.target[s]) continue;
      double best = 0.0;
      for (const auto& row : c.transitions[s]) {
        double sum = 0.0;
        for (const auto& [p, t] : row) sum += p * v[t];
        best = std::max(best, sum);
      }
      next[s] = std::min(1.0, best);
      delta = std::max(delta, std::abs(next[s] - v[s]));
    }
    v = std::move(next);
    if (delta < tol) break;
  }
  return v;
}

Rank1Decision decide_sup_one_rank1(const Qmdp& m, const CMatrix& rho0, const Subspace& b, SupportMode mode,
                                   const Tolerances& tol) {
  const auto r1 = detect_rank_one(m, tol);
  if (!r1) throw Error(ErrorCode::kNotRank1, "model has an operator of rank greater than one");
  if (rho0.rows() != m.dim() || rho0.cols() != m.dim())
    throw Error(ErrorCode::kDimensionMismatch, "initial state does not match model dimension");
  Rank1Decision out;
  out.mdp = build_support_mdp(m, *r1, {support(rho0, tol)}, b, mode, tol);
  out.winning = mdp_almost_sure_max(out.mdp);
  out.holds = out.winning[out.mdp.initial];
  return out;
}

Rank1Decision decide_all_sched_rank1(const Qmdp& m, const Subspace& b, SupportMode mode, const Tolerances& tol) {
  const auto r1 = detect_rank_one(m, tol);
  if (!r1) throw Error(ErrorCode::kNotRank1, "model has an operator of rank greater than one");
  std::vector<Subspace> seeds;
  for (Index i = 0; i < m.dim(); ++i) seeds.push_back(Subspace::span_of_basis(m.dim(), {i}));
  seeds.push_back(Subspace::full(m.dim()));
  for (const auto& ts : r1->terms)
    for (const auto& t : ts) seeds.push_back(Subspace::span(t.phi, tol));
  Rank1Decision out;
  out.mdp = build_support_mdp(m, *r1, seeds, b, mode, tol);
  out.winning = mdp_almost_sure_min(out.mdp);
  out.holds = std::all_of(out.winning.begin(), out.winning.end(), [](bool w) { return w; });
  return out;
}

// -- bounded periodic enumeration --------------------------------------------------

std::vector<LEntry> l_sequence(std::uint64_t k, int i_max) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "the L-sequence needs at least one action");
  if (i_max < 0) throw Error(ErrorCode::kInvalidArgument, "negative L-sequence index");
  std::vector<LEntry> out{{1, k, false}};
  for (int i = 0; i < i_max; ++i) {
    const LEntry& prev = out.back();
    LEntry e;
    e.overflow = prev.overflow || prev.k == kMax;
    e.l = e.overflow ? kMax : mul_sat(prev.k + 1, prev.l);
    e.overflow = e.overflow || e.l == kMax;
    e.k = e.overflow ? kMax : pow_sat(k, e.l);
    e.overflow = e.overflow || e.k == kMax;
    out.push_back(e);
  }
  return out;
}

int repetition_degree(const Word& s, std::size_t max_length) {
  if (s.size() > max_length)
    throw Error(ErrorCode::kBudgetExceeded, "word of length " + std::to_string(s.size()) +
                                                " exceeds the repetition-degree budget of " + std::to_string(max_length));
  std::map<std::string, int> ids;
  std::vector<int> letters;
  for (const auto& x : s) letters.push_back(ids.try_emplace(x, static_cast<int>(ids.size())).first->second);
  std::map<std::vector<int>, int> memo;
  return rd(letters, memo);
}

BoundedResult decide_all_sched_bounded(const Qmdp& m, const Subspace& b, std::uint64_t budget,
                                       const Tolerances& tol, Exec exec) {
  if (!m.measurements().empty())
    throw Error(ErrorCode::kHasMeasurements, "bounded enumeration applies to models without measurements");
  const std::vector<CMatrix> sigma = sigma_matrices(m, b, tol);

  BoundedResult out;
  for (const auto& a : m.actions())
    out.q = std::max<int>(out.q, static_cast<int>(x_subspace(m, {a.name}, b, tol).space.dim()));
  const std::uint64_t k = m.actions().size();
  out.l_q = l_sequence(k, out.q).back();
  if (sigma.front().rows() == 0) return out;

  const std::uint64_t max_len = out.l_q.overflow ? kMax : out.l_q.l;
  for (std::uint64_t len = 1; len <= max_len; ++len) {
    const std::uint64_t count = word_count(k, static_cast<int>(std::min<std::uint64_t>(len, 64)));
    if (count == kMax || out.words_checked + count > budget) {
      out.verdict = BoundedVerdict::kBudgetExceeded;
      return out;
    }
    const Index n = sigma.front().rows();
    const CMatrix id = CMatrix::Identity(n, n);
    const auto hit = first_word_where(
        sigma, static_cast<int>(len),
        [&](const LetterWord&, const CMatrix& p) { return null_space(p - id, tol).cols() > 0; }, exec);
    if (hit) {
      out.verdict = BoundedVerdict::kCounterexample;
      for (int x : *hit) out.counterexample.push_back(m.actions()[x].name);
      out.words_checked += count;
      return out;
    }
    out.words_checked += count;
    out.checked_length = static_cast<int>(len);
  }
  return out;
}

// -- spectral radius bounds ---------------------------------------------------------

std::vector<CMatrix> sigma_matrices(const Qmdp& m, const Subspace& b, const Tolerances& tol) {
  if (!m.measurements().empty())
    throw Error(ErrorCode::kHasMeasurements, "spectral radius bounds apply to models without measurements");
  require_invariant(m, b, tol);
  const CMatrix v = subspace_complement(b, tol).basis();
  std::vector<CMatrix> out;
  for (const auto& a : m.actions()) {
    Channel restricted{v.cols(), {}};
    for (const auto& k : a.channel.ops) restricted.ops.push_back(v.adjoint() * k * v);
    out.push_back(v.cols() == 0 ? CMatrix(0, 0) : matrix_representation(restricted));
  }
  return out;
}

JsrReport jsr_bounds(const std::vector<CMatrix>& sigma, int k_max, std::uint64_t budget, const Tolerances& tol,
                     Exec exec) {
  if (sigma.empty()) throw Error(ErrorCode::kInvalidArgument, "empty matrix set");
  if (k_max < 1) throw Error(ErrorCode::kInvalidArgument, "k_max must be at least 1");
  for (const auto& a : sigma)
    if (a.rows() != a.cols() || a.rows() != sigma.front().rows())
      throw Error(ErrorCode::kDimensionMismatch, "matrix set must hold square matrices of one size");
  std::uint64_t total = 0;
  for (int k = 1; k <= k_max; ++k) {
    const std::uint64_t c = word_count(sigma.size(), k);
    total = c == kMax || total + c < total ? kMax : total + c;
  }
  if (total > budget)
    throw Error(ErrorCode::kBudgetExceeded, std::to_string(sigma.size()) + "^k products up to k = " +
                                                std::to_string(k_max) + " exceed the budget of " + std::to_string(budget));

  JsrReport out;
  for (int k = 1; k <= k_max; ++k) {
    const auto norms = word_product_map(
        sigma, k, [](const LetterWord&, const CMatrix& p) { return spectral_norm(p); }, exec);
    const auto hi = std::max_element(norms.begin(), norms.end());
    const auto lo = std::min_element(norms.begin(), norms.end());
    JsrRow row;
    row.k = k;
    row.upper = std::pow(*hi, 1.0 / k);
    row.lower = std::pow(*lo, 1.0 / k);
    row.argmax = word_at(static_cast<std::uint64_t>(hi - norms.begin()), static_cast<int>(sigma.size()), k);
    row.argmin = word_at(static_cast<std::uint64_t>(lo - norms.begin()), static_cast<int>(sigma.size()), k);
    out.rows.push_back(std::move(row));
  }
  for (const auto& row : out.rows) {
    if (row.upper < 1.0 - tol.rank) {
      out.verdict = JsrVerdict::kAllSchedulersReach;
      return out;
    }
  }
  for (const auto& row : out.rows) {
    if (row.lower < 1.0 - tol.rank) {
      out.verdict = JsrVerdict::kExistsScheduler;
      out.witness = row.argmin;
      return out;
    }
  }
  return out;
}

}  // namespace qreach
