#pragma once

// Set-valued linear operators on R^n, represented by their graphs: a relation
// A is the subspace gra A = {(x, u) : u in A(x)} of R^(2n), held as an
// orthonormal basis. Inversion is a block swap, addition happens in
// coefficient space, and pointwise evaluation returns affine sets.

#include <dispmap/numlin.hpp>

#include <utility>

namespace dispmap {

class LinearRelation {
 public:
  /// graph must live in R^(2n) with coordinates stacked as (x, u).
  LinearRelation(Index n, Subspace graph)
      : n_(n), graph_(std::move(graph)) {
    if (n_ < 1) throw InputError("LinearRelation: ambient dimension >= 1");
    if (graph_.ambient_dim() != 2 * n_)
      throw InputError("LinearRelation: graph must live in R^(2n)");
  }

  Index ambient_dim() const { return n_; }
  Index graph_dim() const { return graph_.dim(); }
  const Subspace& graph() const { return graph_; }

  /// x-components of the graph basis (top n rows).
  Matrix input_block() const { return graph_.basis().topRows(n_); }

  /// u-components of the graph basis (bottom n rows).
  Matrix output_block() const { return graph_.basis().bottomRows(n_); }

 private:
  Index n_;
  Subspace graph_;
};

/// Graph of a single-valued linear operator, orthonormalized by thin QR
/// (the stacked matrix [I; M] always has full column rank).
inline LinearRelation from_matrix(const Matrix& M) {
  require_nonempty(M, "from_matrix");
  require_finite(M, "from_matrix");
  if (M.rows() != M.cols())
    throw InputError("from_matrix: operator must be square");
  const Index n = M.rows();
  Matrix G(2 * n, n);
  G.topRows(n) = Matrix::Identity(n, n);
  G.bottomRows(n) = M;
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ() * Matrix::Identity(2 * n, n);
  return LinearRelation(n, Subspace(2 * n, std::move(Q)));
}

/// Swapping the blocks of an orthonormal graph basis is an isometry, so the
/// result needs no re-orthonormalization.
inline LinearRelation inverse(const LinearRelation& A) {
  const Index n = A.ambient_dim();
  Matrix G(2 * n, A.graph_dim());
  G.topRows(n) = A.output_block();
  G.bottomRows(n) = A.input_block();
  return LinearRelation(n, Subspace(2 * n, std::move(G)));
}

/// Normal cone operator of a subspace: S x S^perp as a graph. For subspaces
/// the cone at any interior point is the full orthogonal complement, so the
/// graph is a product and its dimension is always n.
inline LinearRelation normal_cone_of(const Subspace& S,
                                     const Tolerances& tol = {}) {
  const Index n = S.ambient_dim();
  const Subspace C = orthogonal_complement(S, tol);
  Matrix G = Matrix::Zero(2 * n, S.dim() + C.dim());
  G.block(0, 0, n, S.dim()) = S.basis();
  G.block(n, S.dim(), n, C.dim()) = C.basis();
  return LinearRelation(n, Subspace(2 * n, std::move(G)));
}

/// Pointwise (Minkowski) sum: gra(A + B) = {(x, u + v) : (x,u) in gra A,
/// (x,v) in gra B}. Matching x across the two graphs means solving
/// X_A a = X_B b for coefficient vectors, i.e. taking the kernel of
/// [X_A, -X_B]; each kernel vector maps to the graph vector
/// (X_A a, U_A a + U_B b). The image is re-orthonormalized and rank-trimmed.
inline LinearRelation sum(const LinearRelation& A, const LinearRelation& B,
                          const Tolerances& tol = {}) {
  tol.validate();
  if (A.ambient_dim() != B.ambient_dim())
    throw InputError("sum: ambient dimensions differ");
  const Index n = A.ambient_dim();
  const Index p = A.graph_dim();
  const Index q = B.graph_dim();
  if (p == 0 || q == 0) {
    // One graph is trivial: only x = 0 can match, and it does only when the
    // other relation also relates 0 (always true for subspace graphs).
    Matrix G = Matrix::Zero(2 * n, p + q);
    if (p > 0) G.bottomRows(n).leftCols(p) = A.output_block();
    if (q > 0) G.bottomRows(n).rightCols(q) = B.output_block();
    // Valid only for coefficient vectors whose x-part vanishes.
    Matrix X = Matrix::Zero(n, p + q);
    if (p > 0) X.leftCols(p) = A.input_block();
    if (q > 0) X.rightCols(q) = B.input_block();
    if (p + q == 0) return LinearRelation(n, Subspace::zero(2 * n));
    Matrix K = factor_fundamental(X, tol).kernel.basis();
    return LinearRelation(n, span_of(2 * n, G * K, tol));
  }
  Matrix C(n, p + q);
  C.leftCols(p) = A.input_block();
  C.rightCols(q) = -B.input_block();
  Matrix K = factor_fundamental(C, tol).kernel.basis();
  Matrix Ka = K.topRows(p);
  Matrix Kb = K.bottomRows(q);
  Matrix G(2 * n, K.cols());
  G.topRows(n) = A.input_block() * Ka;
  G.bottomRows(n) = A.output_block() * Ka + B.output_block() * Kb;
  return LinearRelation(n, span_of(2 * n, G, tol));
}

/// Graph equality via projector distance in R^(2n).
inline bool relation_equal(const LinearRelation& A, const LinearRelation& B,
                           const Tolerances& tol = {}) {
  if (A.ambient_dim() != B.ambient_dim())
    throw InputError("relation_equal: ambient dimensions differ");
  return subspace_equal(A.graph(), B.graph(), tol);
}

inline double relation_distance(const LinearRelation& A,
                                const LinearRelation& B) {
  if (A.ambient_dim() != B.ambient_dim())
    throw InputError("relation_distance: ambient dimensions differ");
  return operator_norm(projector(A.graph()) - projector(B.graph()));
}

struct RelationParts {
  Subspace domain;         // {x : A(x) nonempty}
  Subspace range;          // union of all values
  Subspace image_of_zero;  // A(0); every value set is a translate of this
};

inline RelationParts relation_parts(const LinearRelation& A,
                                    const Tolerances& tol = {}) {
  tol.validate();
  const Index n = A.ambient_dim();
  const Index p = A.graph_dim();
  Subspace domain = span_of(n, A.input_block(), tol);
  Subspace range = span_of(n, A.output_block(), tol);
  if (p == 0)
    return RelationParts{std::move(domain), std::move(range),
                         Subspace::zero(n)};
  Matrix K = factor_fundamental(A.input_block(), tol).kernel.basis();
  Subspace image_of_zero = span_of(n, A.output_block() * K, tol);
  return RelationParts{std::move(domain), std::move(range),
                       std::move(image_of_zero)};
}

/// A value set of a linear relation: empty, or point + direction subspace.
struct AffineSet {
  bool nonempty;
  Vector point;        // the minimal-norm element when nonempty
  Subspace direction;  // image_of_zero of the relation

  static AffineSet empty(Index n) {
    return AffineSet{false, Vector::Zero(n), Subspace::zero(n)};
  }
};

/// Evaluate A at x. Returns the empty set when x is (numerically) outside the
/// domain; otherwise the affine set A(x) with its minimal-norm element as the
/// base point (the output component orthogonal to A(0)).
inline AffineSet apply(const LinearRelation& A, const Vector& x,
                       const Tolerances& tol = {}) {
  tol.validate();
  const Index n = A.ambient_dim();
  if (x.size() != n) throw InputError("apply: point has the wrong dimension");
  RelationParts parts = relation_parts(A, tol);
  const double off_domain = (x - projector(parts.domain) * x).norm();
  if (off_domain > tol.identity_tol * std::max(1.0, x.norm()))
    return AffineSet::empty(n);
  if (A.graph_dim() == 0)
    return AffineSet{true, Vector::Zero(n), Subspace::zero(n)};
  Vector coeff = pseudoinverse(A.input_block(), tol) * x;
  Vector u0 = A.output_block() * coeff;
  Vector point = u0 - projector(parts.image_of_zero) * u0;
  return AffineSet{true, std::move(point), std::move(parts.image_of_zero)};
}

/// Minimal-norm selection: the unique element of A(x) orthogonal to A(0).
/// DomainError when x is outside the domain.
inline Vector minimal_selection(const LinearRelation& A, const Vector& x,
                                const Tolerances& tol = {}) {
  AffineSet value = apply(A, x, tol);
  if (!value.nonempty)
    throw DomainError("minimal_selection: point is outside the domain");
  return value.point;
}

}  // namespace dispmap
