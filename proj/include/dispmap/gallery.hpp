#pragma once

// Closed-form catalogue. Runs the analysis on a gallery of operators whose
// fixed spaces, selections, and series identities have pencil-and-paper
// closed forms, and checks the computed objects against those forms at a
// tight fixed tolerance. One catalogued closed form is wrong; the gallery
// recomputes the correct one and reports the mismatch as a discrepancy every
// run instead of hiding it.

#include <dispmap/displacement.hpp>
#include <dispmap/isometry.hpp>
#include <dispmap/relations.hpp>
#include <dispmap/report.hpp>
#include <dispmap/rng.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dispmap {

struct GalleryBlock {
  std::string name;
  std::vector<CheckReport> checks;
};

// A closed form that is stated one way in circulation but computes to
// another. `residual_stated` is the distance from the stated form (expected
// to be large), `residual_computed` the distance from the corrected form
// (expected to vanish).
struct GalleryDiscrepancy {
  std::string block;
  std::string stated;
  std::string computed;
  double residual_stated = 0.0;
  double residual_computed = 0.0;
};

// An informational comparison between two variants of a formula where only
// one is correct; not a pass/fail check.
struct GalleryNote {
  std::string block;
  std::string text;
  double residual_preferred = 0.0;
  double residual_variant = 0.0;
};

struct GalleryReport {
  Index n = 0;
  Index dim_u = 0;
  std::uint64_t seed = 0;
  double closed_form_tol = 0.0;
  std::vector<GalleryBlock> blocks;
  std::vector<GalleryDiscrepancy> discrepancies;
  std::vector<GalleryNote> notes;
  bool all_pass = false;
};

namespace detail {

inline CheckReport gallery_check(const std::string& block, const char* what,
                                 const std::string& claim, double residual,
                                 double tol) {
  return make_check("gallery." + block + "." + what, claim, residual, tol);
}

}  // namespace detail

// Runs the whole catalogue. The frame blocks draw a seeded orthonormal basis
// U of dimension dim_u in R^n; the shift blocks are fixed coordinate cycles
// of orders 2 through 8. Closed forms are compared at `closed_form_tol`,
// fixed at 1e-12 independent of the analysis tolerances.
inline GalleryReport run_gallery(Index n, Index dim_u, std::uint64_t seed,
                                 const Tolerances& tol = {}) {
  tol.validate();
  if (n < 2) throw InputError("gallery: ambient dimension must be at least 2");
  if (dim_u < 1 || dim_u >= n)
    throw InputError(
        "gallery: frame dimension must satisfy 1 <= dimU < n so that both U "
        "and its complement are nonzero");

  GalleryReport rep;
  rep.n = n;
  rep.dim_u = dim_u;
  rep.seed = seed;
  rep.closed_form_tol = 1e-12;
  const double ctol = rep.closed_form_tol;

  NormalSampler rng(seed);
  const Matrix U = rng.orthonormal(n, dim_u);
  const Matrix I = Matrix::Identity(n, n);
  const Matrix PU = U * U.transpose();
  const Matrix PUc = I - PU;

  // projection R = P_U: fixed space U, selection (Id - P_U)/2, and the norm
  // bound ||P_M (Id - R)^+ P_M|| = 1/alpha holds with equality.
  {
    GalleryBlock block{"projection", {}};
    auto a = analyze(PU, tol);
    block.checks.push_back(detail::gallery_check(
        block.name, "fixed-space", "Fix P_U = U",
        operator_norm(a.proj_fixed - PU), ctol));
    block.checks.push_back(detail::gallery_check(
        block.name, "selection", "S = (Id - P_U) / 2",
        operator_norm(a.selection - 0.5 * PUc), ctol));
    auto b = range_bound(a);
    block.checks.push_back(detail::gallery_check(
        block.name, "range-equality",
        "||P_M (Id - R)^+ P_M|| equals the reciprocal of the smallest "
        "positive singular value exactly",
        std::abs(b.selection_norm - 1.0 / b.min_modulus), ctol));
    rep.blocks.push_back(std::move(block));
  }

  // neg-projection R = -P_U: fixed space {0}, selection (Id - P_U)/2. The
  // form S = P_U/2 seen in circulation is wrong; both distances are recorded
  // as a discrepancy.
  {
    GalleryBlock block{"neg-projection", {}};
    auto a = analyze(-PU, tol);
    block.checks.push_back(detail::gallery_check(
        block.name, "fixed-space", "Fix(-P_U) = {0}",
        operator_norm(a.proj_fixed), ctol));
    const double r_computed = operator_norm(a.selection - 0.5 * PUc);
    const double r_stated = operator_norm(a.selection - 0.5 * PU);
    block.checks.push_back(detail::gallery_check(
        block.name, "selection", "S = (Id - P_U) / 2", r_computed, ctol));
    rep.discrepancies.push_back(GalleryDiscrepancy{
        block.name, "S = P_U / 2", "S = (Id - P_U) / 2", r_stated,
        r_computed});
    rep.blocks.push_back(std::move(block));
  }

  // reflection R = 2 P_U - Id: fixed space U, zero selection. The inverse
  // decomposition needs the normal cone of the moving space U-perp, not of
  // U; both relation distances are recorded as a note.
  {
    GalleryBlock block{"reflection", {}};
    auto a = analyze(2.0 * PU - I, tol);
    block.checks.push_back(detail::gallery_check(
        block.name, "fixed-space", "Fix(2 P_U - Id) = U",
        operator_norm(a.proj_fixed - PU), ctol));
    block.checks.push_back(detail::gallery_check(
        block.name, "selection", "S = 0", operator_norm(a.selection), ctol));

    auto lhs = inverse(from_matrix(a.displacement));
    auto half = from_matrix(0.5 * I);
    auto with_moving = sum(half, normal_cone_of(a.moving_space, tol), tol);
    auto with_fixed = sum(half, normal_cone_of(a.fixed_space, tol), tol);
    rep.notes.push_back(GalleryNote{
        block.name,
        "(Id - R)^{-1} = Id/2 + N over the moving space U-perp; the variant "
        "using N over the fixed space U does not reproduce the inverse",
        relation_distance(lhs, with_moving),
        relation_distance(lhs, with_fixed)});
    rep.blocks.push_back(std::move(block));
  }

  // neg-reflection R = Id - 2 P_U: fixed space U-perp, zero selection.
  {
    GalleryBlock block{"neg-reflection", {}};
    auto a = analyze(I - 2.0 * PU, tol);
    block.checks.push_back(detail::gallery_check(
        block.name, "fixed-space", "Fix(Id - 2 P_U) = U-perp",
        operator_norm(a.proj_fixed - PUc), ctol));
    block.checks.push_back(detail::gallery_check(
        block.name, "selection", "S = 0", operator_norm(a.selection), ctol));
    rep.blocks.push_back(std::move(block));
  }

  // coordinate cycles of order m = 2..8: every series identity in closed
  // form, plus a witness that the selection is genuinely skew (not
  // symmetric) once m >= 3.
  for (int m = 2; m <= 8; ++m) {
    GalleryBlock block{"shift-" + std::to_string(m), {}};
    FiniteOrderIsometry iso = make_cyclic_shift(m);
    auto a = analyze(iso.R, tol);
    auto ps = projector_series(iso, tol);
    auto ss = selection_series(iso, a);
    auto sw = symmetric_sandwich(iso, a);
    auto pw = power_sum_identities(iso);
    block.checks.push_back(detail::gallery_check(
        block.name, "projector-series",
        "the average of R^k over one period is the fixed-space projector",
        ps.r_projector, ctol));
    block.checks.push_back(detail::gallery_check(
        block.name, "selection-series",
        "S = (1/2m) sum of (m - 2k) R^k over 0 < k < m", ss.r_vs_selection,
        ctol));
    block.checks.push_back(detail::gallery_check(
        block.name, "sandwich",
        "P_M (R + R^T) P_M / 2 equals its closed power-series form",
        sw.residual, ctol));
    block.checks.push_back(detail::gallery_check(
        block.name, "power-sums",
        "R, R^(m-1), and their sum act on the full power sum as the identity "
        "and the doubling map",
        std::max({pw.r_shift_up, pw.r_shift_down, pw.r_shift_all, pw.r_pair}),
        ctol));
    if (m >= 3) {
      block.checks.push_back(detail::gallery_check(
          block.name, "skew-witness",
          "the selection has a genuinely skew part: ||S - S^T|| > 0.01",
          std::max(0.0, 0.01 - operator_norm(
                            Matrix(a.selection - a.selection.transpose()))),
          0.0));
    } else {
      block.checks.push_back(
          make_skipped("gallery." + block.name + ".skew-witness",
                       "skipped: an order-2 isometry has symmetric selection"));
    }
    rep.blocks.push_back(std::move(block));
  }

  bool ok = true;
  for (const auto& block : rep.blocks)
    for (const auto& check : block.checks) ok = ok && check.pass;
  rep.all_pass = ok;
  return rep;
}

}  // namespace dispmap
