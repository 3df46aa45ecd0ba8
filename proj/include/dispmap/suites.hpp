#pragma once

// Named verification suites over a displacement analysis. Each suite turns
// the residual structs of the core modules into CheckReports with stable
// check_ids; `all` concatenates every suite. Checks that do not apply to the
// operator at hand (identity fixed space, no finite order) are emitted as
// skipped entries rather than dropped, so reports always have the same shape
// for a given suite and operator class.

#include <dispmap/displacement.hpp>
#include <dispmap/isometry.hpp>
#include <dispmap/properties.hpp>
#include <dispmap/report.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace dispmap {

struct SuiteOptions {
  std::string suite = "all";  // all | inverse | resolvent | isometry | properties
  std::uint64_t seed = 1;     // drives the uniqueness perturbations
  int m_max = 24;             // order detection cap for the isometry suite
  int perturbations = 20;
};

inline std::vector<CheckReport> inverse_suite(const DisplacementAnalysis& a,
                                              std::uint64_t seed,
                                              int perturbations = 20) {
  const Tolerances& tol = a.tol;
  std::vector<CheckReport> out;

  out.push_back(make_check(
      "inverse.graph",
      "(Id - R)^{-1} = Id/2 + S + N_M as graphs, with S the selection and "
      "N_M the normal cone of the moving space",
      inverse_decomposition(a).residual, tol.identity_tol));

  auto p = pinv_formula(a);
  const double pinv_tol =
      tol.identity_tol * std::max(1.0, operator_norm(a.displacement));
  out.push_back(make_check("inverse.pinv.formula",
                           "(Id - R)^+ = S + P_M / 2 matches the SVD "
                           "pseudoinverse",
                           p.residual, pinv_tol));
  out.push_back(make_check("inverse.pinv.penrose.product-left",
                           "closed form satisfies M P M = M against Id - R",
                           p.penrose.product_left, pinv_tol));
  out.push_back(make_check("inverse.pinv.penrose.product-right",
                           "closed form satisfies P M P = P against Id - R",
                           p.penrose.product_right, pinv_tol));
  out.push_back(make_check("inverse.pinv.penrose.symmetric-left",
                           "M P is symmetric for the closed form",
                           p.penrose.symmetric_left, pinv_tol));
  out.push_back(make_check("inverse.pinv.penrose.symmetric-right",
                           "P M is symmetric for the closed form",
                           p.penrose.symmetric_right, pinv_tol));

  auto s = selection_decomposition(a);
  out.push_back(make_check("inverse.decomp.domain",
                           "dom((Id - R)^{-1} - Id/2) is the moving space",
                           s.r_domain, tol.identity_tol));
  out.push_back(make_check("inverse.decomp.zero-image",
                           "((Id - R)^{-1} - Id/2)(0) is the fixed space",
                           s.r_image_zero, tol.identity_tol));
  out.push_back(make_check("inverse.decomp.cone-plus-selection",
                           "(Id - R)^{-1} - Id/2 = N_M + B as graphs",
                           s.r_relation, tol.identity_tol));
  out.push_back(make_check("inverse.decomp.selection-matches",
                           "the columnwise minimal selection B equals S",
                           s.r_matches, tol.identity_tol));
  out.push_back(make_check("inverse.decomp.selection-membership",
                           "B d lies in the value set of the shifted inverse "
                           "for every moving basis direction d",
                           s.r_membership, tol.identity_tol));

  auto canonical = selection_uniqueness(a, a.selection);
  out.push_back(make_check(
      "inverse.unique.accept",
      "the selection itself passes both uniqueness conditions "
      "(decomposition and moving-space sandwich)",
      std::max(canonical.r_decomposition, canonical.r_sandwich),
      tol.identity_tol));
  for (int i = 0; i < perturbations; ++i) {
    auto pert = perturb_selection(a, seed, i);
    auto u = selection_uniqueness(a, pert.candidate);
    char id[64];
    std::snprintf(id, sizeof(id), "inverse.unique.reject-%02d", i);
    out.push_back(make_check(
        id,
        std::string("a perturbed candidate (scale 1e-3, violates the ") +
            pert.violates + " condition) is rejected",
        u.accepted ? 1.0 : 0.0, 0.0));
  }

  if (a.min_modulus) {
    auto b = range_bound(a);
    out.push_back(make_check(
        "inverse.range.upper",
        "||P_M (Id - R)^+ P_M|| is at most the reciprocal of the smallest "
        "positive singular value of Id - R",
        std::max(0.0, b.selection_norm - 1.0 / b.min_modulus),
        tol.identity_tol));
    out.push_back(make_check(
        "inverse.range.lower",
        "||(Id - R) d|| >= (smallest positive singular value) * ||d|| on a "
        "moving-space basis",
        std::max(0.0, b.min_modulus - b.min_basis_gain), tol.identity_tol));
  } else {
    out.push_back(make_skipped(
        "inverse.range.upper",
        "skipped: R = Id has no positive singular values, the bound is "
        "undefined"));
    out.push_back(make_skipped(
        "inverse.range.lower",
        "skipped: R = Id has no positive singular values, the bound is "
        "undefined"));
  }

  sort_checks(out);
  return out;
}

inline std::vector<CheckReport> resolvent_suite(const DisplacementAnalysis& a) {
  const Tolerances& tol = a.tol;
  auto r = resolvent_identities(a);
  std::vector<CheckReport> out;
  out.push_back(make_check("resolvent.inverse-identity",
                           "(Id + 2S) composed with its closed-form resolvent "
                           "P_F + (Id - R) P_M / 2 is the identity",
                           r.r_resolvent, tol.identity_tol));
  out.push_back(make_check("resolvent.half-shift-identity",
                           "(Id/2 + S) composed with (Id - R) + 2 P_F is the "
                           "identity",
                           r.r_half_inverse, tol.identity_tol));
  out.push_back(make_check("resolvent.doubling",
                           "(Id/2 + S)^{-1} is twice (Id + 2S)^{-1}",
                           r.r_doubling, tol.identity_tol));
  out.push_back(make_check("resolvent.restriction",
                           "(Id/2 + S)^{-1} agrees with Id - R on the moving "
                           "space",
                           r.r_restriction, tol.identity_tol));
  sort_checks(out);
  return out;
}

namespace detail {

inline const std::vector<std::pair<const char*, const char*>>&
isometry_check_claims() {
  static const std::vector<std::pair<const char*, const char*>> claims = {
      {"isometry.projector-series",
       "the average of R^k over one period is the fixed-space projector"},
      {"isometry.projector-shift",
       "left-multiplying the power average by R leaves it unchanged"},
      {"isometry.selection-series",
       "S = (1/2m) sum of (m - 2k) R^k over 0 < k < m"},
      {"isometry.selection-skew", "the selection series is skew-symmetric"},
      {"isometry.sandwich",
       "P_M (R + R^T) P_M / 2 equals its closed power-series form"},
      {"isometry.power-sum-all",
       "every power R^l with 0 < l < m fixes the full power sum"},
      {"isometry.power-sum-down",
       "R^(m-1) fixes the full power sum"},
      {"isometry.power-sum-pair",
       "(R + R^(m-1)) maps the power sum to twice itself"},
      {"isometry.power-sum-up", "R fixes the full power sum"},
  };
  return claims;
}

inline std::vector<CheckReport> isometry_skipped(const std::string& reason) {
  std::vector<CheckReport> out;
  for (const auto& [id, claim] : isometry_check_claims())
    out.push_back(make_skipped(id, "skipped: " + reason));
  sort_checks(out);
  return out;
}

}  // namespace detail

inline std::vector<CheckReport> isometry_suite(const DisplacementAnalysis& a,
                                               int m_max = 24) {
  const Tolerances& tol = a.tol;
  const Matrix I = Matrix::Identity(a.n, a.n);
  if (operator_norm(Matrix(a.R.transpose() * a.R) - I) > tol.identity_tol)
    return detail::isometry_skipped("the operator is not an isometry");
  auto m = order_of(a.R, m_max, tol);
  if (!m)
    return detail::isometry_skipped("no finite order up to m_max detected");
  if (*m == 1)
    return detail::isometry_skipped(
        "R = Id has order 1; the series identities assume order >= 2");

  FiniteOrderIsometry iso(a.R, *m, tol);
  auto ps = projector_series(iso, tol);
  auto ss = selection_series(iso, a);
  auto sw = symmetric_sandwich(iso, a);
  auto pw = power_sum_identities(iso);

  std::vector<CheckReport> out;
  auto claim_of = [](const char* id) -> const char* {
    for (const auto& [cid, claim] : detail::isometry_check_claims())
      if (std::string(cid) == id) return claim;
    throw Error("isometry_suite: unknown check id");
  };
  auto add = [&](const char* id, double residual) {
    out.push_back(make_check(id, claim_of(id), residual, tol.identity_tol));
  };
  add("isometry.projector-series", ps.r_projector);
  add("isometry.projector-shift", ps.r_shift);
  add("isometry.selection-series", ss.r_vs_selection);
  add("isometry.selection-skew", ss.r_skew);
  add("isometry.sandwich", sw.residual);
  add("isometry.power-sum-all", pw.r_shift_all);
  add("isometry.power-sum-down", pw.r_shift_down);
  add("isometry.power-sum-pair", pw.r_pair);
  add("isometry.power-sum-up", pw.r_shift_up);
  sort_checks(out);
  return out;
}

inline std::vector<CheckReport> run_suite(const DisplacementAnalysis& a,
                                          const SuiteOptions& opt) {
  if (opt.perturbations < 0 || opt.perturbations > 999)
    throw InputError("suite: perturbation count out of range");
  std::vector<CheckReport> out;
  const bool all = opt.suite == "all";
  bool known = all;
  auto append = [&out](std::vector<CheckReport> chunk) {
    out.insert(out.end(), std::make_move_iterator(chunk.begin()),
               std::make_move_iterator(chunk.end()));
  };
  if (all || opt.suite == "inverse") {
    append(inverse_suite(a, opt.seed, opt.perturbations));
    known = true;
  }
  if (all || opt.suite == "resolvent") {
    append(resolvent_suite(a));
    known = true;
  }
  if (all || opt.suite == "isometry") {
    append(isometry_suite(a, opt.m_max));
    known = true;
  }
  if (all || opt.suite == "properties") {
    append(property_suite(a));
    known = true;
  }
  if (!known)
    throw InputError("unknown suite '" + opt.suite +
                     "' (expected all, inverse, resolvent, isometry, or "
                     "properties)");
  sort_checks(out);
  return out;
}

}  // namespace dispmap
