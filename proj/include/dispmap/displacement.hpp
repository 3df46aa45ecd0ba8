#pragma once

// Displacement calculus for a linear nonexpansive R on R^n. Everything hangs
// off the displacement Id - R: its kernel is the fixed space F = Fix R, and
// on the complement M = F^perp lives the single-valued "selection" operator
//
//   S = P_M (Id - R)^+ P_M - (1/2) P_M ,
//
// the unique monotone linear map that, together with the normal cone of M,
// reconstructs the set-valued inverse of Id - R. The structs below bundle the
// analysis and the machine checks of each identity as plain residuals.

#include <dispmap/numlin.hpp>
#include <dispmap/relations.hpp>
#include <dispmap/rng.hpp>

#include <optional>
#include <vector>

namespace dispmap {

struct DisplacementAnalysis {
  Matrix R;
  Index n = 0;
  Subspace fixed_space = Subspace::zero(1);   // Fix R = ker(Id - R)
  Subspace moving_space = Subspace::zero(1);  // orthogonal complement of it
  Matrix proj_fixed;
  Matrix proj_moving;
  Matrix displacement;       // Id - R
  Matrix displacement_pinv;
  Matrix selection;          // S above; skew part of R shows up here
  std::optional<double> min_modulus;  // smallest positive singular value of
                                      // Id - R; empty when R = Id
  Matrix resolvent_double;      // (Id + 2S)^{-1} in closed form
  Matrix half_shift_inverse;    // (Id/2 + S)^{-1} in closed form
  Tolerances tol;
};

/// Full analysis of a linear nonexpansive operator. Throws
/// NotNonexpansiveError when ||R|| > 1 + identity_tol, and NumericalError if
/// any structural invariant of the result fails its tolerance.
inline DisplacementAnalysis analyze(const Matrix& R,
                                    const Tolerances& tol = {}) {
  tol.validate();
  require_nonempty(R, "analyze");
  require_finite(R, "analyze");
  if (R.rows() != R.cols()) throw InputError("analyze: operator must be square");
  const Index n = R.rows();
  const double norm_R = operator_norm(R);
  if (norm_R > 1.0 + tol.identity_tol)
    throw NotNonexpansiveError("analyze: not nonexpansive, operator norm " +
                               std::to_string(norm_R) + " exceeds 1");

  DisplacementAnalysis a;
  a.R = R;
  a.n = n;
  a.tol = tol;
  a.displacement = Matrix::Identity(n, n) - R;
  Factorization f = factor_fundamental(a.displacement, tol);
  a.fixed_space = f.kernel;
  a.moving_space = orthogonal_complement(f.kernel, tol);
  a.proj_fixed = projector(a.fixed_space);
  a.proj_moving = projector(a.moving_space);
  a.displacement_pinv = pseudoinverse(a.displacement, tol);
  a.selection = a.proj_moving * a.displacement_pinv * a.proj_moving -
                0.5 * a.proj_moving;
  if (f.rank > 0) a.min_modulus = f.singular_values[f.rank - 1];
  a.resolvent_double = a.proj_fixed + 0.5 * a.displacement * a.proj_moving;
  a.half_shift_inverse = a.displacement + 2.0 * a.proj_fixed;

  const double scale = tol.identity_tol * std::max(1.0, norm_R);
  if (operator_norm(a.proj_fixed + a.proj_moving - Matrix::Identity(n, n)) >
      scale)
    throw NumericalError("analyze: projectors do not resolve the identity");
  if (a.fixed_space.dim() > 0 &&
      operator_norm(a.displacement * a.fixed_space.basis()) > scale)
    throw NumericalError("analyze: fixed space is not fixed");
  if (operator_norm(a.proj_moving * a.selection - a.selection) > scale ||
      operator_norm(a.selection * a.proj_moving - a.selection) > scale)
    throw NumericalError("analyze: selection escapes the moving space");
  if (min_symmetric_eigenvalue(a.selection) < -tol.psd_tol)
    throw NumericalError("analyze: selection is not monotone");
  return a;
}

/// Graph identity for the set-valued inverse:
///   (Id - R)^{-1} = Id/2 + S + (normal cone of the moving space).
struct InverseDecomposition {
  LinearRelation lhs;  // inverse of the displacement graph
  LinearRelation rhs;  // shift + selection + normal cone
  double residual;     // projector distance of the two graphs
};

inline InverseDecomposition inverse_decomposition(
    const DisplacementAnalysis& a) {
  LinearRelation lhs = inverse(from_matrix(a.displacement));
  LinearRelation rhs =
      sum(from_matrix(0.5 * Matrix::Identity(a.n, a.n) + a.selection),
          normal_cone_of(a.moving_space, a.tol), a.tol);
  double residual = relation_distance(lhs, rhs);
  return InverseDecomposition{std::move(lhs), std::move(rhs), residual};
}

/// The pseudoinverse of the displacement in closed form: S + (1/2) P_M.
struct PinvComparison {
  Matrix formula;
  double residual;           // distance to the SVD pseudoinverse
  PenroseResiduals penrose;  // formula tested directly against Id - R
};

inline PinvComparison pinv_formula(const DisplacementAnalysis& a) {
  Matrix formula = a.selection + 0.5 * a.proj_moving;
  double residual = operator_norm(formula - a.displacement_pinv);
  PenroseResiduals penrose = penrose_residuals(a.displacement, formula);
  return PinvComparison{std::move(formula), residual, penrose};
}

/// Resolvent identities tying S back to R:
///   (Id + 2S)^{-1} = P_F + (1/2)(Id - R) P_M          (r_resolvent)
///   (Id/2 + S)^{-1} = (Id - R) + 2 P_F                (r_half_inverse)
///   the second map is twice the first                 (r_doubling)
///   and it agrees with Id - R on the moving space     (r_restriction)
struct ResolventIdentities {
  Matrix resolvent_double;
  Matrix half_shift_inverse;
  double r_resolvent;
  double r_half_inverse;
  double r_doubling;
  double r_restriction;
};

inline ResolventIdentities resolvent_identities(const DisplacementAnalysis& a) {
  const Matrix I = Matrix::Identity(a.n, a.n);
  ResolventIdentities out;
  out.resolvent_double = a.resolvent_double;
  out.half_shift_inverse = a.half_shift_inverse;
  out.r_resolvent =
      operator_norm((I + 2.0 * a.selection) * a.resolvent_double - I);
  out.r_half_inverse =
      operator_norm((0.5 * I + a.selection) * a.half_shift_inverse - I);
  out.r_doubling =
      operator_norm(a.half_shift_inverse - 2.0 * a.resolvent_double);
  out.r_restriction = operator_norm(
      (a.half_shift_inverse - a.displacement) * a.proj_moving);
  return out;
}

/// Decomposition of the shifted inverse A = (Id - R)^{-1} - Id/2 into the
/// normal cone of the moving space plus a single-valued monotone part B,
/// assembled columnwise from minimal selections. B must coincide with S.
struct SelectionDecomposition {
  LinearRelation shifted_inverse;
  Matrix projected_selection;  // B
  double r_domain;       // dom A = moving space
  double r_image_zero;   // A(0) = fixed space
  double r_relation;     // gra A = gra(N + B)
  double r_matches;      // ||B - S||
  double r_membership;   // worst distance of B d from the value set A(d)
};

inline SelectionDecomposition selection_decomposition(
    const DisplacementAnalysis& a) {
  const Tolerances& tol = a.tol;
  LinearRelation A = sum(inverse(from_matrix(a.displacement)),
                         from_matrix(-0.5 * Matrix::Identity(a.n, a.n)), tol);
  RelationParts parts = relation_parts(A, tol);
  SelectionDecomposition out{A, Matrix::Zero(a.n, a.n), 0, 0, 0, 0, 0};

  out.r_domain =
      operator_norm(projector(parts.domain) - a.proj_moving);
  out.r_image_zero =
      operator_norm(projector(parts.image_of_zero) - a.proj_fixed);

  // Minimal selections on a basis of the moving space, hoisting the
  // pseudoinverse of the input block out of the column loop.
  Matrix solver = pseudoinverse(A.input_block(), tol);
  Matrix P0 = projector(parts.image_of_zero);
  Matrix B = Matrix::Zero(a.n, a.n);
  double worst_membership = 0.0;
  const Matrix& basis = a.moving_space.basis();
  for (Index j = 0; j < basis.cols(); ++j) {
    Vector d = basis.col(j);
    Vector u0 = A.output_block() * (solver * d);
    Vector sel = u0 - P0 * u0;
    Vector column = a.proj_moving * sel;
    // membership: the candidate must sit in sel + A(0)
    worst_membership = std::max(
        worst_membership,
        ((Matrix::Identity(a.n, a.n) - P0) * (column - u0)).norm());
    B += column * d.transpose();
  }
  out.projected_selection = B;
  out.r_matches = operator_norm(B - a.selection);
  out.r_membership = worst_membership;
  out.r_relation = relation_distance(
      A, sum(normal_cone_of(a.moving_space, tol), from_matrix(B), tol));
  return out;
}

/// Uniqueness certificate for the selection: a candidate S' is accepted iff
/// it reproduces the inverse decomposition (r_decomposition) AND lives inside
/// the moving-space sandwich P_M S' P_M = S' (r_sandwich). The analysis
/// selection is the only matrix satisfying both.
struct UniquenessReport {
  bool decomposition_ok;
  bool sandwich_ok;
  bool accepted;
  double r_decomposition;
  double r_sandwich;
  double r_vs_selection;
};

inline UniquenessReport selection_uniqueness(const DisplacementAnalysis& a,
                                             const Matrix& candidate) {
  if (candidate.rows() != a.n || candidate.cols() != a.n)
    throw InputError("selection_uniqueness: candidate has the wrong shape");
  const Tolerances& tol = a.tol;
  LinearRelation lhs = inverse(from_matrix(a.displacement));
  LinearRelation rhs =
      sum(from_matrix(0.5 * Matrix::Identity(a.n, a.n) + candidate),
          normal_cone_of(a.moving_space, tol), tol);
  UniquenessReport out;
  out.r_decomposition = relation_distance(lhs, rhs);
  out.r_sandwich =
      operator_norm(a.proj_moving * candidate * a.proj_moving - candidate);
  out.decomposition_ok = out.r_decomposition <= tol.identity_tol;
  out.sandwich_ok = out.r_sandwich <= tol.identity_tol;
  out.accepted = out.decomposition_ok && out.sandwich_ok;
  out.r_vs_selection = operator_norm(candidate - a.selection);
  return out;
}

inline bool uniqueness_check(const DisplacementAnalysis& a,
                             const Matrix& candidate) {
  return selection_uniqueness(a, candidate).accepted;
}

/// Closed-range bound: with g the smallest positive singular value of the
/// displacement, ||P_M (Id-R)^+ P_M|| <= 1/g, and the displacement expands
/// every moving direction by at least g. DomainError when R = Id.
struct RangeBound {
  double min_modulus;
  double selection_norm;   // ||P_M (Id - R)^+ P_M||
  double min_basis_gain;   // min ||(Id - R) d|| over a moving-space basis
  bool bounded;
};

inline RangeBound range_bound(const DisplacementAnalysis& a) {
  if (!a.min_modulus)
    throw DomainError("range_bound: undefined when R is the identity");
  RangeBound out;
  out.min_modulus = *a.min_modulus;
  out.selection_norm =
      operator_norm(a.proj_moving * a.displacement_pinv * a.proj_moving);
  double min_gain = std::numeric_limits<double>::infinity();
  const Matrix& basis = a.moving_space.basis();
  for (Index j = 0; j < basis.cols(); ++j)
    min_gain = std::min(min_gain, (a.displacement * basis.col(j)).norm());
  out.min_basis_gain = min_gain;
  out.bounded =
      out.selection_norm <= 1.0 / out.min_modulus + a.tol.identity_tol &&
      out.min_basis_gain >= out.min_modulus - a.tol.identity_tol;
  return out;
}

/// Deterministic perturbations of the selection used to exercise the
/// uniqueness certificate. Even indices break the decomposition while keeping
/// the sandwich; odd indices break the sandwich. Degenerate fixed spaces
/// leave only one violation type, handled here.
struct SelectionPerturbation {
  Matrix candidate;
  const char* violates;  // "decomposition" or "sandwich"
};

inline SelectionPerturbation perturb_selection(const DisplacementAnalysis& a,
                                               std::uint64_t seed,
                                               int index,
                                               double scale = 1e-3) {
  NormalSampler rng(seed * 1000003ull + static_cast<std::uint64_t>(index));
  Matrix G = rng.gaussian(a.n, a.n);
  G *= scale / std::max(1.0, operator_norm(G));

  const bool moving_is_everything = a.fixed_space.dim() == 0;
  const bool moving_is_trivial = a.moving_space.dim() == 0;
  bool break_sandwich = (index % 2) == 1;
  if (moving_is_everything) break_sandwich = false;  // sandwich always holds
  if (moving_is_trivial) break_sandwich = true;      // decomposition never breaks

  if (break_sandwich) {
    // Add the component of G that leaves the sandwich space; renormalize it
    // so the violation has the requested scale.
    Matrix off = G - a.proj_moving * G * a.proj_moving;
    const double norm_off = operator_norm(off);
    if (norm_off > 0.0) off *= scale / norm_off;
    return SelectionPerturbation{a.selection + off, "sandwich"};
  }
  Matrix inside = a.proj_moving * G * a.proj_moving;
  const double norm_in = operator_norm(inside);
  if (norm_in > 0.0) inside *= scale / norm_in;
  return SelectionPerturbation{a.selection + inside, "decomposition"};
}

}  // namespace dispmap
