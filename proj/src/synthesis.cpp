#include "qreach/synthesis.hpp"

#include "qreach/error.hpp"

namespace qreach {

SynthesisVerdict find_optimal_scheduler(const Qmdp& m, const Subspace& b, const Tolerances& tol, Exec exec) {
  if (b.ambient_dim() != m.dim()) throw Error(ErrorCode::kDimensionMismatch, "target subspace has wrong dimension");
  SynthesisVerdict out;
  const Subspace t = subspace_complement(b, tol);
  if (t.is_zero()) return out;

  const AverageChannel avg = average_superop(m);
  if (!is_invariant_superop(b, avg.average, tol)) {
    out.kind = SynthesisKind::kNoScheduler;
    out.reason = NoSchedulerReason::kNotInvariantTarget;
    return out;
  }
  if (auto w = find_invariant_in_complement(m, b, tol)) {
    out.kind = SynthesisKind::kNoScheduler;
    out.reason = NoSchedulerReason::kInvariantWitness;
    out.witness = std::move(w);
    return out;
  }

  const Index d = m.dim();
  const Index d2 = d * d;
  std::vector<CMatrix> reps;
  for (const auto& ch : avg.letters) reps.push_back(matrix_representation(ch));
  const CVector target = vec(b.projector());

  // E_{s v}^* = E_s^* o E_v^*, so vec(E_{sv}^*(P_B)) = M_s^dag M_v^dag vec(P_B).
  // M_v comes from the kernel's prefix products; M_s is kept across passes.
  CMatrix ms = CMatrix::Identity(d2, d2);
  Word s;
  Index dim_x = t.dim();
  out.trace.push_back({s, dim_x});
  const int max_len = static_cast<int>(std::max<Index>(1, d - 1));

  while (dim_x > 0) {
    const CMatrix ms_dag = ms.adjoint();
    std::optional<LetterWord> found;
    for (int len = 1; len <= max_len && !found; ++len) {
      found = first_word_where(
          reps, len,
          [&](const LetterWord&, const CMatrix& mv) {
            const CVector y = ms_dag * (mv.adjoint() * target);
            return kernel_psd(hermitian_part(unvec(y, d)), tol).dim() < dim_x;
          },
          exec);
    }
    if (!found)
      throw Error(ErrorCode::kInternal, "synthesis stalled at dim X = " + std::to_string(dim_x) +
                                            " after word '" + format_word(s) + "'");
    for (int x : *found) {
      s.push_back(avg.alphabet[x]);
      ms = reps[x] * ms;
    }
    dim_x = x_subspace(m, s, b, tol).space.dim();
    out.trace.push_back({s, dim_x});
  }
  out.kind = SynthesisKind::kScheduler;
  out.word = s;
  return out;
}

Scheduler word_to_scheduler(const Qmdp& m, const Word& s) {
  if (s.empty()) throw Error(ErrorCode::kEmptyWord, "a periodic scheduler needs at least one letter");
  bool actions_only = true;
  for (const auto& name : s) {
    if (!m.has_name(name)) throw Error(ErrorCode::kUnknownName, "unknown name '" + name + "'");
    actions_only = actions_only && m.is_action(name);
  }
  if (actions_only) return Scheduler::periodic(s);
  return Scheduler::lasso(m, {}, s);
}

}  // namespace qreach
