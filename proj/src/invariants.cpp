#include "qreach/invariants.hpp"

#include <cmath>

#include "qreach/error.hpp"

namespace qreach {
namespace {

double leak(const Subspace& b, const Channel& e) {
  const CMatrix img = apply_superop(e, b.projector());
  return std::max(0.0, img.trace().real() - (b.projector() * img).trace().real());
}

}  // namespace

AverageChannel average_superop(const Qmdp& m) {
  AverageChannel out;
  for (const auto& a : m.actions()) {
    out.alphabet.push_back(a.name);
    out.letters.push_back(a.channel);
  }
  for (const auto& meas : m.measurements()) {
    out.alphabet.push_back(meas.name);
    out.letters.push_back(measurement_to_superop(meas));
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(out.letters.size()));
  out.average.dim = m.dim();
  for (const auto& ch : out.letters)
    for (const auto& k : ch.ops) out.average.ops.push_back(scale * k);
  return out;
}

bool is_invariant_superop(const Subspace& b, const Channel& e, const Tolerances& tol) {
  if (b.ambient_dim() != e.dim) throw Error(ErrorCode::kDimensionMismatch, "subspace and channel dimensions differ");
  return leak(b, e) < tol.rank;
}

bool is_invariant_model(const Subspace& b, const Qmdp& m, const Tolerances& tol) {
  for (const auto& a : m.actions())
    if (!is_invariant_superop(b, a.channel, tol)) return false;
  for (const auto& meas : m.measurements())
    for (const auto& [label, op] : meas.operators)
      if (!is_invariant_superop(b, Channel{m.dim(), {op}}, tol)) return false;
  return true;
}

XSubspace x_subspace(const Qmdp& m, const Word& s, const Subspace& b, const Tolerances& tol) {
  if (b.ambient_dim() != m.dim()) throw Error(ErrorCode::kDimensionMismatch, "target subspace has wrong dimension");
  // E_s^* = E_{s_1}^* o ... o E_{s_k}^*: the last letter's dual acts first.
  CMatrix x = b.projector();
  for (auto it = s.rbegin(); it != s.rend(); ++it) x = apply_superop(dual_superop(letter_channel(m, *it)), x);
  return {kernel_psd(hermitian_part(x), tol), !is_invariant_model(b, m, tol)};
}

Subspace reach_closure(const Channel& e, const Subspace& y, const Tolerances& tol) {
  Subspace r = y;
  for (Index i = 1; i < e.dim && !r.is_zero(); ++i) {
    Subspace grown = subspace_join(r, support(hermitian_part(apply_superop(e, r.projector())), tol), tol);
    if (grown.dim() == r.dim()) break;
    r = std::move(grown);
  }
  return r;
}

CMatrix restricted_fixed_points(const Channel& e, const Subspace& t, const Tolerances& tol, CMatrix* t_basis) {
  const CMatrix& v = t.basis();
  if (t_basis) *t_basis = v;
  const Index r = v.cols();
  if (r == 0) return CMatrix(0, 0);
  Channel restricted{r, {}};
  for (const auto& k : e.ops) restricted.ops.push_back(v.adjoint() * k * v);
  const CMatrix rep = matrix_representation(restricted);
  return null_space(rep - CMatrix::Identity(r * r, r * r), tol);
}

std::optional<InvariantWitness> find_invariant_in_complement(const Qmdp& m, const Subspace& b,
                                                             const Tolerances& tol) {
  const Subspace t = subspace_complement(b, tol);
  if (t.is_zero()) return std::nullopt;
  const AverageChannel avg = average_superop(m);
  CMatrix v;
  const CMatrix fixed = restricted_fixed_points(avg.average, t, tol, &v);
  if (fixed.cols() == 0) return std::nullopt;

  const Index r = v.cols();
  for (Index c = 0; c < fixed.cols(); ++c) {
    const CMatrix x = unvec(fixed.col(c), r);
    const CMatrix parts[2] = {hermitian_part(x), (x - x.adjoint()) / Complex(0.0, 2.0)};
    for (const auto& h : parts) {
      if (h.cwiseAbs().maxCoeff() <= tol.prune) continue;
      const auto [pos, neg] = signed_supports(h, tol);
      for (const Subspace* local : {&pos, &neg}) {
        if (local->is_zero()) continue;
        const Subspace lifted = Subspace::span(v * local->basis(), tol);
        const Subspace cand = reach_closure(avg.average, lifted, tol);
        if (cand.is_zero() || !subspace_contains(t, cand, tol) || !is_invariant_model(cand, m, tol)) continue;
        InvariantWitness w{cand, {}};
        for (std::size_t i = 0; i < avg.letters.size(); ++i) w.residuals.emplace_back(avg.alphabet[i], leak(cand, avg.letters[i]));
        return w;
      }
    }
  }
  throw Error(ErrorCode::kWitnessExtractionFailed,
              "restricted average channel has a nontrivial fixed point but no invariant subspace was verified");
}

}  // namespace qreach
