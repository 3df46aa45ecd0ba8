#pragma once

// Dense linear-algebra kernels shared by the whole toolkit: rank/kernel/range
// factorization, orthogonal projectors, pseudoinverses, operator norms, and
// subspace comparison. Everything is double precision and deterministic; rank
// decisions use a relative singular-value cutoff, never exact comparisons.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dispmap {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Base of all toolkit errors. The CLI maps subclasses to exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent caller input (bad shapes, bad flags, bad files).
struct InputError : Error {
  using Error::Error;
};

/// A query outside an operator's / relation's domain of definition.
struct DomainError : Error {
  using Error::Error;
};

/// A numerical guarantee this library promises could not be met.
struct NumericalError : Error {
  using Error::Error;
};

/// The analyzed operator has norm > 1 + tol; the calculus does not apply.
struct NotNonexpansiveError : Error {
  using Error::Error;
};

/// Tolerance bundle used everywhere. rank_tol is relative to the largest
/// singular value; the other two are absolute residual bounds.
struct Tolerances {
  double rank_tol = 1e-10;
  double identity_tol = 1e-9;
  double psd_tol = 1e-9;

  void validate() const {
    if (!(rank_tol > 0.0) || !(identity_tol > 0.0) || !(psd_tol > 0.0))
      throw InputError("Tolerances: all tolerances must be strictly positive");
    if (!(rank_tol < 1.0))
      throw InputError("Tolerances: rank_tol must be below 1");
  }
};

inline void require_finite(const Matrix& M, const char* what) {
  if (!M.allFinite())
    throw InputError(std::string(what) + ": entries must be finite");
}

inline void require_nonempty(const Matrix& M, const char* what) {
  if (M.rows() < 1 || M.cols() < 1)
    throw InputError(std::string(what) + ": matrix must be at least 1x1");
}

/// A linear subspace of R^n held as an orthonormal basis (n x k, k may be 0).
/// Construction validates orthonormality, so holding a Subspace is proof the
/// basis is usable without re-checks.
class Subspace {
 public:
  Subspace(Index ambient_dim, Matrix basis, double identity_tol = 1e-9)
      : ambient_(ambient_dim), basis_(std::move(basis)) {
    if (ambient_ < 1)
      throw InputError("Subspace: ambient dimension must be at least 1");
    if (basis_.size() == 0 && basis_.rows() == 0)
      basis_.resize(ambient_, 0);  // allow default-constructed empties
    if (basis_.rows() != ambient_)
      throw InputError("Subspace: basis rows do not match ambient dimension");
    if (basis_.cols() > ambient_)
      throw InputError("Subspace: more basis vectors than ambient dimension");
    require_finite(basis_, "Subspace basis");
    const Index k = basis_.cols();
    if (k > 0) {
      const double residual =
          (basis_.transpose() * basis_ - Matrix::Identity(k, k)).norm();
      if (residual > identity_tol)
        throw InputError("Subspace: basis is not orthonormal (residual " +
                         std::to_string(residual) + ")");
    }
  }

  static Subspace zero(Index ambient_dim) {
    return Subspace(ambient_dim, Matrix(ambient_dim, 0));
  }

  static Subspace full(Index ambient_dim) {
    return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
  }

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

 private:
  Index ambient_;
  Matrix basis_;
};

namespace detail {

inline Vector singular_values_of(const Matrix& M) {
  if (M.rows() == 0 || M.cols() == 0) return Vector();
  Eigen::BDCSVD<Matrix> svd(M);
  return svd.singularValues();
}

inline Index rank_from(const Vector& sv, double rank_tol) {
  if (sv.size() == 0) return 0;
  const double cutoff = rank_tol * sv(0);
  Index r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  return sv(0) > 0.0 ? r : 0;
}

}  // namespace detail

/// Largest singular value; 0 for matrices with an empty dimension.
inline double operator_norm(const Matrix& M) {
  require_finite(M, "operator_norm");
  const Vector sv = detail::singular_values_of(M);
  return sv.size() > 0 ? sv(0) : 0.0;
}

/// Minimum eigenvalue of the symmetric part (M + M^T)/2.
inline double min_symmetric_eigenvalue(const Matrix& M) {
  require_nonempty(M, "min_symmetric_eigenvalue");
  if (M.rows() != M.cols())
    throw InputError("min_symmetric_eigenvalue: matrix must be square");
  Matrix S = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

struct Factorization {
  Subspace kernel;          // subspace of the column space R^cols
  Subspace range;           // subspace of R^rows
  Index rank;
  std::vector<double> singular_values;  // descending
};

/// Full SVD factorization with the rank rule
/// rank = #{ sigma_i > rank_tol * sigma_max }. Kernel and range bases are the
/// corresponding singular-vector blocks, orthonormal by construction.
inline Factorization factor_fundamental(const Matrix& M,
                                        const Tolerances& tol = {}) {
  tol.validate();
  require_nonempty(M, "factor_fundamental");
  require_finite(M, "factor_fundamental");
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const Index r = detail::rank_from(sv, tol.rank_tol);
  Matrix kernel_basis = svd.matrixV().rightCols(M.cols() - r);
  Matrix range_basis = svd.matrixU().leftCols(r);
  std::vector<double> values(sv.data(), sv.data() + sv.size());
  return Factorization{Subspace(M.cols(), std::move(kernel_basis)),
                       Subspace(M.rows(), std::move(range_basis)), r,
                       std::move(values)};
}

/// Orthogonal projector onto S, as a dense symmetric idempotent matrix.
inline Matrix projector(const Subspace& S) {
  return S.basis() * S.basis().transpose();
}

/// Orthonormal basis for the span of arbitrary column vectors (rank-trimmed).
inline Subspace span_of(Index ambient_dim, const Matrix& vectors,
                        const Tolerances& tol = {}) {
  tol.validate();
  if (vectors.cols() == 0) return Subspace::zero(ambient_dim);
  if (vectors.rows() != ambient_dim)
    throw InputError("span_of: vector length does not match ambient dimension");
  require_finite(vectors, "span_of");
  Eigen::JacobiSVD<Matrix> svd(vectors, Eigen::ComputeThinU);
  const Index r = detail::rank_from(svd.singularValues(), tol.rank_tol);
  return Subspace(ambient_dim, svd.matrixU().leftCols(r));
}

struct PenroseResiduals {
  double product_left;    // ||M P M - M||
  double product_right;   // ||P M P - P||
  double symmetric_left;  // ||(M P)^T - M P||
  double symmetric_right; // ||(P M)^T - P M||

  double max_residual() const {
    return std::max(std::max(product_left, product_right),
                    std::max(symmetric_left, symmetric_right));
  }
};

/// Operator-norm residuals of the four Penrose equations for a candidate
/// pseudoinverse P of M. All four vanish iff P is the Moore-Penrose inverse.
inline PenroseResiduals penrose_residuals(const Matrix& M, const Matrix& P) {
  require_nonempty(M, "penrose_residuals");
  require_nonempty(P, "penrose_residuals");
  if (P.rows() != M.cols() || P.cols() != M.rows())
    throw InputError("penrose_residuals: candidate has the wrong shape");
  Matrix MP = M * P;
  Matrix PM = P * M;
  return PenroseResiduals{operator_norm(MP * M - M), operator_norm(PM * P - P),
                          operator_norm(MP.transpose() - MP),
                          operator_norm(PM.transpose() - PM)};
}

/// Moore-Penrose inverse via SVD with the shared rank rule. The result is
/// validated against all four Penrose equations before it is returned;
/// violation beyond identity_tol * max(1, ||M||) raises NumericalError.
inline Matrix pseudoinverse(const Matrix& M, const Tolerances& tol = {}) {
  tol.validate();
  require_nonempty(M, "pseudoinverse");
  require_finite(M, "pseudoinverse");
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const Index r = detail::rank_from(sv, tol.rank_tol);
  Matrix P = Matrix::Zero(M.cols(), M.rows());
  if (r > 0) {
    P = svd.matrixV().leftCols(r) *
        sv.head(r).cwiseInverse().asDiagonal() *
        svd.matrixU().leftCols(r).transpose();
  }
  const PenroseResiduals res = penrose_residuals(M, P);
  const double bound =
      tol.identity_tol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  if (res.max_residual() > bound)
    throw NumericalError(
        "pseudoinverse: Penrose residuals not met (worst " +
        std::to_string(res.max_residual()) + ", bound " +
        std::to_string(bound) + ")");
  return P;
}

/// Two subspaces of the same ambient space are equal iff their orthogonal
/// projectors coincide; distinct dimensions force projector distance >= 1.
inline bool subspace_equal(const Subspace& a, const Subspace& b,
                           const Tolerances& tol = {}) {
  tol.validate();
  if (a.ambient_dim() != b.ambient_dim())
    throw InputError("subspace_equal: ambient dimensions differ");
  return operator_norm(projector(a) - projector(b)) <= tol.identity_tol;
}

inline Subspace orthogonal_complement(const Subspace& S,
                                      const Tolerances& tol = {}) {
  const Index n = S.ambient_dim();
  if (S.dim() == 0) return Subspace::full(n);
  if (S.dim() == n) return Subspace::zero(n);
  // x perpendicular to S  <=>  basis^T x = 0.
  return factor_fundamental(Matrix(S.basis().transpose()), tol).kernel;
}

/// Smallest singular value above the rank cutoff. Undefined for the zero
/// matrix (DomainError); for full-rank square M it is the smallest singular
/// value, in general the reduced minimum modulus.
inline double smallest_positive_singular(const Matrix& M,
                                         const Tolerances& tol = {}) {
  tol.validate();
  require_nonempty(M, "smallest_positive_singular");
  require_finite(M, "smallest_positive_singular");
  const Vector sv = detail::singular_values_of(M);
  const Index r = detail::rank_from(sv, tol.rank_tol);
  if (r == 0)
    throw DomainError(
        "smallest_positive_singular: undefined for the zero matrix");
  return sv(r - 1);
}

}  // namespace dispmap
