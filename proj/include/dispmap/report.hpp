#pragma once

// The unit of machine-checked evidence: one identity, one residual, one
// tolerance. `pass` is always residual <= tol; lower-bound checks store their
// shortfall max(0, threshold - value) with tol 0 so the invariant holds for
// every check in the suite. Claims are self-contained statements; the full
// catalogue lives in docs/TRACEABILITY.md.

#include <algorithm>
#include <string>
#include <vector>

namespace dispmap {

struct CheckReport {
  std::string check_id;
  std::string claim;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  bool skipped = false;
};

inline CheckReport make_check(std::string check_id, std::string claim,
                              double residual, double tol) {
  CheckReport c;
  c.check_id = std::move(check_id);
  c.claim = std::move(claim);
  c.residual = residual;
  c.tol = tol;
  c.pass = residual <= tol;
  return c;
}

/// A check that did not apply; reports list these explicitly. Skipped checks
/// count as passing and carry the reason in the claim text.
inline CheckReport make_skipped(std::string check_id, std::string claim) {
  CheckReport c;
  c.check_id = std::move(check_id);
  c.claim = std::move(claim);
  c.residual = 0.0;
  c.tol = 0.0;
  c.pass = true;
  c.skipped = true;
  return c;
}

inline void sort_checks(std::vector<CheckReport>& checks) {
  std::sort(checks.begin(), checks.end(),
            [](const CheckReport& a, const CheckReport& b) {
              return a.check_id < b.check_id;
            });
}

inline bool all_pass(const std::vector<CheckReport>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckReport& c) { return c.pass; });
}

}  // namespace dispmap
