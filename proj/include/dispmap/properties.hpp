#pragma once

// Monotone-operator classifiers for matrices and linear relations, plus the
// property suite that certifies what the displacement calculus promises about
// Id - R and its set-valued inverse.

#include <dispmap/displacement.hpp>
#include <dispmap/numlin.hpp>
#include <dispmap/relations.hpp>
#include <dispmap/report.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dispmap {

/// Flags for a single-valued linear operator M, each with the residual that
/// justified it. Conventions:
///   nonexpansive            ||M|| <= 1 + tol
///   firmly nonexpansive     ||2M - Id|| <= 1 + tol
///   monotone                min eig of sym(M) >= -psd_tol
///   cocoercive (beta 1/2)   (1/2) M firmly nonexpansive
///   strongly monotone       min eig of sym(M), kept when positive
///   paramonotone            kernel of sym(M) is contained in kernel of M
struct MonotonicityReport {
  bool nonexpansive = false;
  bool firmly_nonexpansive = false;
  bool monotone = false;
  bool cocoercive_half = false;
  bool paramonotone = false;
  std::optional<double> strongly_monotone_modulus;
  std::map<std::string, double> residual_details;
};

inline MonotonicityReport classify(const Matrix& M, const Tolerances& tol = {}) {
  tol.validate();
  require_nonempty(M, "classify");
  require_finite(M, "classify");
  if (M.rows() != M.cols()) throw InputError("classify: matrix must be square");
  const Index n = M.rows();
  const Matrix I = Matrix::Identity(n, n);
  MonotonicityReport r;

  const double norm_M = operator_norm(M);
  r.nonexpansive = norm_M <= 1.0 + tol.identity_tol;
  r.residual_details["nonexpansive"] = std::max(0.0, norm_M - 1.0);

  const double firm = operator_norm(2.0 * M - I);
  r.firmly_nonexpansive = firm <= 1.0 + tol.identity_tol;
  r.residual_details["firmly_nonexpansive"] = std::max(0.0, firm - 1.0);

  const double lam = min_symmetric_eigenvalue(M);
  r.monotone = lam >= -tol.psd_tol;
  r.residual_details["monotone"] = std::max(0.0, -lam);
  r.residual_details["strongly_monotone"] = lam;
  if (lam > 0.0) r.strongly_monotone_modulus = lam;

  const double coco = operator_norm(M - I);  // 2 * (M/2) - Id
  r.cocoercive_half = coco <= 1.0 + tol.identity_tol;
  r.residual_details["cocoercive_half"] = std::max(0.0, coco - 1.0);

  // ker sym(M) inside ker M: evaluate M on a kernel basis of the symmetric
  // part. An empty kernel makes the condition vacuous.
  Matrix sym = 0.5 * (M + M.transpose());
  Subspace ker_sym = factor_fundamental(sym, tol).kernel;
  const double para =
      ker_sym.dim() == 0 ? 0.0 : operator_norm(M * ker_sym.basis());
  r.paramonotone = para <= tol.identity_tol;
  r.residual_details["paramonotone"] = para;

  return r;
}

/// Monotonicity of a relation through the Gram form of its graph basis:
/// with orthonormal columns (x_i, u_i), the matrix Q_ij = (<x_i,u_j> +
/// <x_j,u_i>)/2 represents <x, u> on the unit sphere of the graph, so the
/// relation is monotone iff Q is PSD. Strong monotonicity with modulus beta
/// subtracts beta * Gram(x). Maximality for monotone linear relations is
/// exactly graph dimension = ambient dimension.
struct RelationMonotonicity {
  bool monotone = false;
  bool maximal = false;
  bool strongly_monotone = false;
  double form_min = 0.0;         // min eig of Q
  double strong_form_min = 0.0;  // min eig of Q - beta * Gram(x)
  Index graph_dim = 0;
};

inline RelationMonotonicity classify_relation(const LinearRelation& A,
                                              double beta = 0.0,
                                              const Tolerances& tol = {}) {
  tol.validate();
  if (beta < 0.0) throw InputError("classify_relation: beta must be >= 0");
  RelationMonotonicity r;
  r.graph_dim = A.graph_dim();
  if (r.graph_dim == 0) {
    // Empty graph: vacuously monotone, never maximal for n >= 1.
    r.monotone = true;
    r.strongly_monotone = true;
    return r;
  }
  Matrix X = A.input_block();
  Matrix U = A.output_block();
  Matrix cross = X.transpose() * U;
  Matrix Q = 0.5 * (cross + cross.transpose());
  r.form_min = min_symmetric_eigenvalue(Q);
  r.monotone = r.form_min >= -tol.psd_tol;
  Matrix Qs = Q - beta * (X.transpose() * X);
  r.strong_form_min = min_symmetric_eigenvalue(Qs);
  r.strongly_monotone = beta > 0.0 && r.strong_form_min >= -tol.psd_tol;
  r.maximal = r.monotone && r.graph_dim == A.ambient_dim();
  return r;
}

/// Machine checks for the displacement's operator-theoretic properties.
/// Claims about rectangular (3*) monotonicity are reported at the level that
/// is testable in finite dimensions: hypotheses verified, conclusion noted.
inline std::vector<CheckReport> property_suite(const DisplacementAnalysis& a) {
  const Tolerances& tol = a.tol;
  std::vector<CheckReport> out;
  auto add = [&out](std::string id, std::string claim, double residual,
                    double t) {
    out.push_back(make_check(std::move(id), std::move(claim), residual, t));
  };

  auto half = classify(0.5 * a.displacement, tol);
  add("properties.half-displacement.firmly-nonexpansive",
      "(Id - R)/2 is firmly nonexpansive",
      half.residual_details.at("firmly_nonexpansive"), tol.identity_tol);

  add("properties.displacement.two-lipschitz",
      "Id - R is 2-Lipschitz ((Id - R)/2 is nonexpansive)",
      std::max(0.0, operator_norm(a.displacement) - 2.0), tol.identity_tol);

  auto disp = classify(a.displacement, tol);
  add("properties.displacement.monotone",
      "Id - R is monotone (symmetric part PSD)",
      disp.residual_details.at("monotone"), tol.psd_tol);

  add("properties.displacement.half-cocoercive",
      "Id - R is 1/2-cocoercive",
      disp.residual_details.at("cocoercive_half"), tol.identity_tol);

  add("properties.displacement.paramonotone",
      "Id - R is paramonotone (kernel of symmetric part fixes R)",
      disp.residual_details.at("paramonotone"), tol.identity_tol);

  LinearRelation inv = inverse(from_matrix(a.displacement));
  auto invr = classify_relation(inv, 0.5, tol);
  add("properties.inverse.monotone",
      "(Id - R)^{-1} is monotone (graph Gram form PSD)",
      std::max(0.0, -invr.form_min), tol.psd_tol);
  add("properties.inverse.maximal",
      "(Id - R)^{-1} is maximally monotone (graph dimension = n)",
      static_cast<double>(std::abs(invr.graph_dim - a.n)), 0.0);
  add("properties.inverse.half-strongly-monotone",
      "(Id - R)^{-1} is strongly monotone with modulus 1/2",
      std::max(0.0, -invr.strong_form_min), tol.psd_tol);

  LinearRelation shifted =
      sum(inv, from_matrix(-0.5 * Matrix::Identity(a.n, a.n)), tol);
  auto shiftr = classify_relation(shifted, 0.0, tol);
  add("properties.shifted-inverse.monotone",
      "(Id - R)^{-1} - Id/2 is monotone",
      std::max(0.0, -shiftr.form_min), tol.psd_tol);
  add("properties.shifted-inverse.maximal",
      "(Id - R)^{-1} - Id/2 is maximally monotone (graph dimension = n)",
      static_cast<double>(std::abs(shiftr.graph_dim - a.n)), 0.0);

  add("properties.rectangular.hypotheses",
      "Id - R and its inverse are rectangular (3*) monotone: hypotheses "
      "verified (linear, bounded, monotone); conclusion not directly "
      "testable by residuals",
      std::max(disp.residual_details.at("monotone"),
               std::max(0.0, -invr.form_min)),
      tol.psd_tol);

  Factorization ft =
      factor_fundamental(Matrix(a.displacement.transpose()), tol);
  add("properties.fixed.adjoint",
      "Fix(R^T) = Fix(R): the adjoint has the same fixed space",
      operator_norm(projector(ft.kernel) - a.proj_fixed), tol.identity_tol);

  Factorization f = factor_fundamental(a.displacement, tol);
  add("properties.range.displacement",
      "range(Id - R) is the orthogonal complement of the fixed space",
      operator_norm(projector(f.range) - a.proj_moving), tol.identity_tol);
  add("properties.range.adjoint",
      "range(Id - R^T) equals range(Id - R)",
      operator_norm(projector(ft.range) - a.proj_moving), tol.identity_tol);

  sort_checks(out);
  return out;
}

}  // namespace dispmap
