#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qreach {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Numerical cutoffs shared by every analysis.
///
/// `rank` is relative to the largest eigenvalue/singular value of the matrix
/// being classified; the others are absolute.
struct Tolerances {
  double rank = 1e-9;    // rank / kernel cutoff
  double sym = 1e-10;    // Hermitian symmetry
  double valid = 1e-8;   // completeness-sum checks
  double prune = 1e-12;  // branch weight cutoff
  double conv = 1e-8;    // limit convergence

  /// Throws kInvalidArgument unless every field is strictly positive.
  void check() const;

  /// Defaults overridden by QREACH_EPS_{RANK,SYM,VALID,PRUNE,CONV}.
  static Tolerances from_environment();
};

/// A completely positive map given by Kraus operators, rho -> sum K rho K^dag.
/// `dim` is kept separately so that the zero map (no operators) still knows its
/// Hilbert space.
struct Channel {
  Index dim = 0;
  std::vector<CMatrix> ops;

  static Channel identity(Index d);
  static Channel from_ops(std::vector<CMatrix> ops);

  /// Composition: first `*this`, then `next`. Products below `drop_norm` are
  /// discarded.
  Channel then(const Channel& next, double drop_norm = 0.0) const;

  /// sum K^dag K.
  CMatrix completeness() const;
};

/// Subspace of C^d held as an orthonormal basis (columns) plus its projector.
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(Index ambient);
  static Subspace full(Index ambient);
  /// Span of computational basis vectors |i>, zero-based.
  static Subspace span_of_basis(Index ambient, const std::vector<Index>& indices);
  /// Span of the columns of `vectors` (need not be orthonormal).
  static Subspace span(const CMatrix& vectors, const Tolerances& tol = {});
  /// Range of a (near-)projector.
  static Subspace from_projector(const CMatrix& projector, const Tolerances& tol = {});

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return basis_.cols(); }
  bool is_zero() const { return dim() == 0; }
  const CMatrix& basis() const { return basis_; }
  const CMatrix& projector() const { return projector_; }

  /// Projector distance below tol.rank.
  bool equals(const Subspace& other, const Tolerances& tol = {}) const;

 private:
  Subspace(Index ambient, CMatrix basis);

  Index ambient_ = 0;
  CMatrix basis_;
  CMatrix projector_;
};

// -- vectorisation -----------------------------------------------------------
// vec stacks rows: vec(X)[i*d + j] = X(i, j). With this convention the matrix
// representation sum E (x) conj(E) satisfies vec(E(X)) = M vec(X).

CVector vec(const CMatrix& x);
CMatrix unvec(const CVector& v, Index d);

// -- channel algebra ---------------------------------------------------------

CMatrix matrix_representation(const Channel& channel);
CMatrix apply_superop(const Channel& channel, const CMatrix& rho);
/// Heisenberg-picture dual: X -> sum K^dag X K.
Channel dual_superop(const Channel& channel);

/// Applies a d^2 x d^2 representation to a d x d operator.
CMatrix apply_representation(const CMatrix& rep, const CMatrix& x);

// -- spectral helpers --------------------------------------------------------

CMatrix hermitian_part(const CMatrix& a);
CMatrix projector_of(const CMatrix& basis);

/// Span of eigenvectors with eigenvalue > tol.rank * lambda_max. A matrix whose
/// largest eigenvalue is below tol.prune is treated as zero.
Subspace support(const CMatrix& psd, const Tolerances& tol = {});
/// Orthogonal complement of `support`.
Subspace kernel_psd(const CMatrix& psd, const Tolerances& tol = {});

/// Supports of the positive and negative parts of a Hermitian matrix.
std::pair<Subspace, Subspace> signed_supports(const CMatrix& hermitian,
                                              const Tolerances& tol = {});

Subspace subspace_join(const Subspace& a, const Subspace& b, const Tolerances& tol = {});
Subspace subspace_complement(const Subspace& a, const Tolerances& tol = {});
/// True iff B is contained in A: ||(I - P_A) P_B|| < tol.rank.
bool subspace_contains(const Subspace& a, const Subspace& b, const Tolerances& tol = {});

double spectral_norm(const CMatrix& a);

/// Orthonormal basis (columns) of the null space of a square or rectangular
/// matrix; singular values <= tol.rank * max(1, sigma_max) count as zero.
CMatrix null_space(const CMatrix& a, const Tolerances& tol = {});

/// Cesaro mean lim (1/N) sum_{i<N} M^i, i.e. the spectral projector of M
/// onto its eigenvalue-1 eigenspace along the remaining spectrum.
/// Throws kDivergentCesaro when the spectral radius exceeds 1 or a
/// unit-modulus eigenvalue is defective.
CMatrix cesaro_limit_map(const CMatrix& m, const Tolerances& tol = {});

}  // namespace qreach
