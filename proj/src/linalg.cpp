#include "qreach/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qreach/error.hpp"

namespace qreach {
namespace {

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

double env_or(const char* name, double fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  try {
    std::size_t used = 0;
    double v = std::stod(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("environment variable ") + name + " is not a number: " + raw);
  }
}

// Eigen-decomposition of the Hermitian part, eigenvalues in descending order.
struct HermitianSpectrum {
  Eigen::VectorXd values;
  CMatrix vectors;
  double scale = 0.0;  // max |lambda|
};

HermitianSpectrum hermitian_spectrum(const CMatrix& a, const Tolerances& tol) {
  require(a.rows() == a.cols(), ErrorCode::kDimensionMismatch, "expected a square matrix");
  HermitianSpectrum out;
  if (a.rows() == 0) return out;
  const double norm = a.cwiseAbs().maxCoeff();
  const double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
  require(asym <= tol.sym * std::max(1.0, norm), ErrorCode::kNotPsd,
          "matrix is not Hermitian (asymmetry " + std::to_string(asym) + ")");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a));
  const Index n = a.rows();
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.values(k) = es.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  out.scale = std::max(std::abs(out.values(0)), std::abs(out.values(n - 1)));
  return out;
}

CMatrix columns(const CMatrix& m, const std::vector<Index>& which) {
  CMatrix out(m.rows(), static_cast<Index>(which.size()));
  for (std::size_t k = 0; k < which.size(); ++k) out.col(static_cast<Index>(k)) = m.col(which[k]);
  return out;
}

// Support/kernel split of a PSD matrix.
std::pair<CMatrix, CMatrix> split_psd(const CMatrix& psd, const Tolerances& tol) {
  const HermitianSpectrum spec = hermitian_spectrum(psd, tol);
  const Index n = psd.rows();
  if (n == 0 || spec.scale <= tol.prune) return {CMatrix(n, 0), CMatrix::Identity(n, n)};
  const double lmin = spec.values(n - 1);
  require(lmin >= -std::max(tol.rank * spec.scale, tol.sym), ErrorCode::kNotPsd,
          "matrix has a significantly negative eigenvalue " + std::to_string(lmin));
  const double cutoff = tol.rank * spec.values(0);
  std::vector<Index> supp, ker;
  for (Index k = 0; k < n; ++k) (spec.values(k) > cutoff ? supp : ker).push_back(k);
  return {columns(spec.vectors, supp), columns(spec.vectors, ker)};
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::VectorXd singular_values(const CMatrix& a) {
  if (a.size() == 0) return {};
  if (std::max(a.rows(), a.cols()) > 64) return Eigen::BDCSVD<CMatrix>(a).singularValues();
  return Eigen::JacobiSVD<CMatrix>(a).singularValues();
}

}  // namespace

// -- Tolerances -----------------------------------------------------------------

void Tolerances::check() const {
  require(rank > 0 && sym > 0 && valid > 0 && prune > 0 && conv > 0,
          ErrorCode::kInvalidArgument, "all tolerances must be strictly positive");
}

Tolerances Tolerances::from_environment() {
  Tolerances t;
  t.rank = env_or("QREACH_EPS_RANK", t.rank);
  t.sym = env_or("QREACH_EPS_SYM", t.sym);
  t.valid = env_or("QREACH_EPS_VALID", t.valid);
  t.prune = env_or("QREACH_EPS_PRUNE", t.prune);
  t.conv = env_or("QREACH_EPS_CONV", t.conv);
  t.check();
  return t;
}

// -- Channel --------------------------------------------------------------------

Channel Channel::identity(Index d) { return Channel{d, {CMatrix::Identity(d, d)}}; }

Channel Channel::from_ops(std::vector<CMatrix> ops) {
  require(!ops.empty(), ErrorCode::kInvalidArgument, "a channel needs at least one Kraus operator");
  const Index d = ops.front().rows();
  for (const auto& k : ops)
    require(k.rows() == d && k.cols() == d, ErrorCode::kDimensionMismatch,
            "Kraus operators must be square and of equal dimension");
  return Channel{d, std::move(ops)};
}

Channel Channel::then(const Channel& next, double drop_norm) const {
  require(dim == next.dim, ErrorCode::kDimensionMismatch, "composing channels of different dimension");
  Channel out{dim, {}};
  out.ops.reserve(ops.size() * next.ops.size());
  for (const auto& a : ops) {
    for (const auto& b : next.ops) {
      CMatrix p = b * a;
      if (drop_norm > 0.0 && p.norm() <= drop_norm) continue;
      out.ops.push_back(std::move(p));
    }
  }
  return out;
}

CMatrix Channel::completeness() const {
  CMatrix s = CMatrix::Zero(dim, dim);
  for (const auto& k : ops) s += k.adjoint() * k;
  return s;
}

// -- Subspace -------------------------------------------------------------------

Subspace::Subspace(Index ambient, CMatrix basis)
    : ambient_(ambient), basis_(std::move(basis)), projector_(projector_of(basis_)) {
  if (basis_.cols() == 0) basis_.resize(ambient_, 0);
  if (projector_.rows() != ambient_) projector_ = CMatrix::Zero(ambient_, ambient_);
}

Subspace Subspace::zero(Index ambient) { return Subspace(ambient, CMatrix(ambient, 0)); }

Subspace Subspace::full(Index ambient) {
  return Subspace(ambient, CMatrix::Identity(ambient, ambient));
}

Subspace Subspace::span_of_basis(Index ambient, const std::vector<Index>& indices) {
  CMatrix b = CMatrix::Zero(ambient, static_cast<Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    require(indices[k] >= 0 && indices[k] < ambient, ErrorCode::kDimensionMismatch,
            "basis index out of range");
    b(indices[k], static_cast<Index>(k)) = 1.0;
  }
  return span(b);
}

Subspace Subspace::span(const CMatrix& vectors, const Tolerances& tol) {
  const Index d = vectors.rows();
  if (vectors.cols() == 0) return zero(d);
  Eigen::JacobiSVD<CMatrix> svd(vectors, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= tol.prune) return zero(d);
  Index r = 0;
  while (r < s.size() && s(r) > tol.rank * s(0)) ++r;
  return Subspace(d, svd.matrixU().leftCols(r));
}

Subspace Subspace::from_projector(const CMatrix& projector, const Tolerances& tol) {
  return support(projector, tol);
}

bool Subspace::equals(const Subspace& other, const Tolerances& tol) const {
  if (ambient_ != other.ambient_) return false;
  if (dim() != other.dim()) return false;
  return spectral_norm(projector_ - other.projector_) < tol.rank;
}

// -- vectorisation ----------------------------------------------------------------

CVector vec(const CMatrix& x) {
  CVector v(x.size());
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) v(i * x.cols() + j) = x(i, j);
  return v;
}

CMatrix unvec(const CVector& v, Index d) {
  require(v.size() == d * d, ErrorCode::kDimensionMismatch, "vector length is not d^2");
  CMatrix x(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) x(i, j) = v(i * d + j);
  return x;
}

// -- channel algebra --------------------------------------------------------------

CMatrix matrix_representation(const Channel& channel) {
  const Index n = channel.dim * channel.dim;
  CMatrix m = CMatrix::Zero(n, n);
  for (const auto& k : channel.ops) m += kron(k, k.conjugate());
  return m;
}

CMatrix apply_superop(const Channel& channel, const CMatrix& rho) {
  require(rho.rows() == channel.dim && rho.cols() == channel.dim, ErrorCode::kDimensionMismatch,
          "state dimension does not match channel");
  CMatrix out = CMatrix::Zero(channel.dim, channel.dim);
  for (const auto& k : channel.ops) out.noalias() += k * rho * k.adjoint();
  return out;
}

Channel dual_superop(const Channel& channel) {
  Channel out{channel.dim, {}};
  out.ops.reserve(channel.ops.size());
  for (const auto& k : channel.ops) out.ops.push_back(k.adjoint());
  return out;
}

CMatrix apply_representation(const CMatrix& rep, const CMatrix& x) {
  require(rep.rows() == x.size() && rep.cols() == x.size(), ErrorCode::kDimensionMismatch,
          "representation does not match operator dimension");
  return unvec(rep * vec(x), x.rows());
}

// -- spectral helpers ---------------------------------------------------------------

CMatrix hermitian_part(const CMatrix& a) { return (a + a.adjoint()) / 2.0; }

CMatrix projector_of(const CMatrix& basis) { return basis * basis.adjoint(); }

Subspace support(const CMatrix& psd, const Tolerances& tol) {
  return Subspace::span(split_psd(psd, tol).first, tol);
}

Subspace kernel_psd(const CMatrix& psd, const Tolerances& tol) {
  return Subspace::span(split_psd(psd, tol).second, tol);
}

std::pair<Subspace, Subspace> signed_supports(const CMatrix& hermitian, const Tolerances& tol) {
  const HermitianSpectrum spec = hermitian_spectrum(hermitian, tol);
  const Index n = hermitian.rows();
  if (n == 0 || spec.scale <= tol.prune) return {Subspace::zero(n), Subspace::zero(n)};
  std::vector<Index> pos, neg;
  for (Index k = 0; k < n; ++k) {
    if (spec.values(k) > tol.rank * spec.scale) pos.push_back(k);
    if (spec.values(k) < -tol.rank * spec.scale) neg.push_back(k);
  }
  return {Subspace::span(columns(spec.vectors, pos), tol),
          Subspace::span(columns(spec.vectors, neg), tol)};
}

Subspace subspace_join(const Subspace& a, const Subspace& b, const Tolerances& tol) {
  require(a.ambient_dim() == b.ambient_dim(), ErrorCode::kDimensionMismatch,
          "joining subspaces of different ambient dimension");
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  CMatrix both(a.ambient_dim(), a.dim() + b.dim());
  both << a.basis(), b.basis();
  return Subspace::span(both, tol);
}

Subspace subspace_complement(const Subspace& a, const Tolerances& tol) {
  const Index d = a.ambient_dim();
  if (a.is_zero()) return Subspace::full(d);
  if (a.dim() == d) return Subspace::zero(d);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(CMatrix::Identity(d, d) - a.projector());
  std::vector<Index> keep;
  for (Index k = d - 1; k >= 0; --k)
    if (es.eigenvalues()(k) > 0.5) keep.push_back(k);
  return Subspace::span(columns(es.eigenvectors(), keep), tol);
}

bool subspace_contains(const Subspace& a, const Subspace& b, const Tolerances& tol) {
  require(a.ambient_dim() == b.ambient_dim(), ErrorCode::kDimensionMismatch,
          "containment test on subspaces of different ambient dimension");
  if (b.is_zero()) return true;
  const Index d = a.ambient_dim();
  return spectral_norm((CMatrix::Identity(d, d) - a.projector()) * b.projector()) < tol.rank;
}

double spectral_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a)(0);
}

CMatrix null_space(const CMatrix& a, const Tolerances& tol) {
  const Index n = a.cols();
  if (n == 0) return CMatrix(0, 0);
  if (a.rows() == 0) return CMatrix::Identity(n, n);
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cutoff = tol.rank * std::max(1.0, s(0));
  Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

CMatrix cesaro_limit_map(const CMatrix& m, const Tolerances& tol) {
  require(m.rows() == m.cols(), ErrorCode::kDimensionMismatch, "Cesaro limit of a non-square map");
  const Index n = m.rows();
  if (n == 0) return CMatrix(0, 0);

  const CVector eig = Eigen::ComplexEigenSolver<CMatrix>(m, false).eigenvalues();
  const double radius = eig.cwiseAbs().maxCoeff();
  require(radius <= 1.0 + tol.rank, ErrorCode::kDivergentCesaro,
          "spectral radius " + std::to_string(radius) + " exceeds 1");

  // Every unit-modulus eigenvalue has to be semisimple for the mean to exist.
  constexpr double kCluster = 1e-6;
  const double cond_floor = std::sqrt(tol.rank);
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix result = CMatrix::Zero(n, n);
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (Index k = 0; k < n; ++k) {
    if (seen[k] || std::abs(std::abs(eig(k)) - 1.0) > kCluster) continue;
    Complex centre = 0.0;
    Index multiplicity = 0;
    for (Index j = k; j < n; ++j) {
      if (!seen[j] && std::abs(eig(j) - eig(k)) < kCluster) {
        seen[j] = true;
        centre += eig(j);
        ++multiplicity;
      }
    }
    centre /= static_cast<double>(multiplicity);
    const bool is_one = std::abs(centre - 1.0) < kCluster;
    if (is_one) centre = 1.0;
    const CMatrix shifted = m - centre * id;
    const CMatrix right = null_space(shifted, tol);
    const CMatrix left = null_space(shifted.adjoint(), tol);
    const CMatrix overlap = left.adjoint() * right;
    const bool semisimple = right.cols() == multiplicity && left.cols() == multiplicity &&
                            Eigen::JacobiSVD<CMatrix>(overlap).singularValues().minCoeff() > cond_floor;
    require(semisimple, ErrorCode::kDivergentCesaro,
            "unit-modulus eigenvalue (" + std::to_string(centre.real()) + "," +
                std::to_string(centre.imag()) + ") is defective");
    if (is_one) result = right * overlap.inverse() * left.adjoint();
  }
  return result;
}

}  // namespace qreach
