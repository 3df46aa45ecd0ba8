#pragma once

// Finite-order isometries: R^T R = Id and R^m = Id for a minimal m >= 2.
// For these operators the displacement analysis collapses to finite power
// sums: the fixed-space projector is the average of all powers, and the
// selection is an explicitly skew polynomial in R.

#include <dispmap/displacement.hpp>
#include <dispmap/numlin.hpp>

#include <numeric>
#include <optional>
#include <vector>

namespace dispmap {

/// Smallest m in [1, m_max] with ||R^m - Id|| <= identity_tol, if any.
inline std::optional<int> order_of(const Matrix& R, int m_max,
                                   const Tolerances& tol = {}) {
  tol.validate();
  require_nonempty(R, "order_of");
  require_finite(R, "order_of");
  if (R.rows() != R.cols()) throw InputError("order_of: matrix must be square");
  if (m_max < 2) throw InputError("order_of: m_max must be at least 2");
  const Matrix I = Matrix::Identity(R.rows(), R.cols());
  Matrix P = R;
  for (int m = 1; m <= m_max; ++m) {
    if (operator_norm(P - I) <= tol.identity_tol) return m;
    P = P * R;
  }
  return std::nullopt;
}

/// An isometry with exact finite order m >= 2. The constructor re-derives the
/// order, so an instance is proof of both properties.
struct FiniteOrderIsometry {
  Matrix R;
  int order;

  FiniteOrderIsometry(Matrix R_in, int claimed_order,
                      const Tolerances& tol = {})
      : R(std::move(R_in)), order(claimed_order) {
    require_nonempty(R, "FiniteOrderIsometry");
    if (R.rows() != R.cols())
      throw InputError("FiniteOrderIsometry: matrix must be square");
    if (order < 2) throw InputError("FiniteOrderIsometry: order must be >= 2");
    const Index n = R.rows();
    if (operator_norm(R.transpose() * R - Matrix::Identity(n, n)) >
        tol.identity_tol)
      throw InputError("FiniteOrderIsometry: not an isometry");
    auto m = order_of(R, order, tol);
    if (!m || *m != order)
      throw InputError("FiniteOrderIsometry: claimed order is not minimal");
  }
};

/// Coordinate shift e_j -> e_(j+1 mod n); order n.
inline FiniteOrderIsometry make_cyclic_shift(Index n) {
  if (n < 2) throw InputError("make_cyclic_shift: need n >= 2");
  Matrix R = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) R((j + 1) % n, j) = 1.0;
  return FiniteOrderIsometry(std::move(R), static_cast<int>(n));
}

/// A rotation angle as an exact fraction of a full turn.
struct RationalTurn {
  long long num;
  long long den;
};

/// Block-diagonal rotations, one 2x2 block per turn; order is the lcm of the
/// reduced denominators. Rejects the identity (order 1).
inline FiniteOrderIsometry make_block_rotation(
    const std::vector<RationalTurn>& turns) {
  if (turns.empty()) throw InputError("make_block_rotation: no blocks");
  const Index n = 2 * static_cast<Index>(turns.size());
  Matrix R = Matrix::Zero(n, n);
  long long order = 1;
  for (size_t k = 0; k < turns.size(); ++k) {
    long long num = turns[k].num;
    long long den = turns[k].den;
    if (den == 0) throw InputError("make_block_rotation: zero denominator");
    if (den < 0) {
      den = -den;
      num = -num;
    }
    num %= den;
    if (num < 0) num += den;
    const long long g = std::gcd(num, den);
    const long long reduced_den = (num == 0) ? 1 : den / g;
    order = std::lcm(order, reduced_den);
    const double angle =
        2.0 * 3.141592653589793238462643383279502884 *
        static_cast<double>(num) / static_cast<double>(den);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const Index i = static_cast<Index>(2 * k);
    R(i, i) = c;
    R(i, i + 1) = -s;
    R(i + 1, i) = s;
    R(i + 1, i + 1) = c;
  }
  if (order < 2)
    throw InputError("make_block_rotation: rotation is the identity");
  return FiniteOrderIsometry(std::move(R), static_cast<int>(order));
}

/// Signed permutation R e_j = signs[j] * e_perm[j]. The order is the lcm over
/// cycles of (cycle length) or (2 * cycle length) when the cycle's sign
/// product is negative. Rejects the identity.
inline FiniteOrderIsometry make_signed_permutation(
    const std::vector<Index>& perm, const std::vector<int>& signs) {
  const Index n = static_cast<Index>(perm.size());
  if (n < 1) throw InputError("make_signed_permutation: empty permutation");
  if (signs.size() != perm.size())
    throw InputError("make_signed_permutation: signs/permutation size mismatch");
  std::vector<bool> seen(n, false);
  for (Index j = 0; j < n; ++j) {
    if (perm[j] < 0 || perm[j] >= n || seen[perm[j]])
      throw InputError("make_signed_permutation: not a permutation");
    seen[perm[j]] = true;
    if (signs[j] != 1 && signs[j] != -1)
      throw InputError("make_signed_permutation: signs must be +1 or -1");
  }
  Matrix R = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) R(perm[j], j) = signs[j];
  long long order = 1;
  std::vector<bool> visited(n, false);
  for (Index start = 0; start < n; ++start) {
    if (visited[start]) continue;
    long long length = 0;
    int sign_product = 1;
    Index j = start;
    do {
      visited[j] = true;
      sign_product *= signs[j];
      j = perm[j];
      ++length;
    } while (j != start);
    order = std::lcm(order, sign_product < 0 ? 2 * length : length);
  }
  if (order < 2)
    throw InputError("make_signed_permutation: this is the identity");
  return FiniteOrderIsometry(std::move(R), static_cast<int>(order));
}

namespace detail {

/// Powers Id, R, ..., R^(m-1).
inline std::vector<Matrix> powers_upto(const Matrix& R, int m) {
  std::vector<Matrix> P;
  P.reserve(m);
  P.push_back(Matrix::Identity(R.rows(), R.cols()));
  for (int k = 1; k < m; ++k) P.push_back(P.back() * R);
  return P;
}

}  // namespace detail

/// The averaged power sum (1/m) sum_k R^k reproduces the fixed-space
/// projector; r_shift checks that left-multiplying by R fixes the sum.
struct ProjectorSeries {
  Matrix series;
  double r_projector;
  double r_shift;
};

inline ProjectorSeries projector_series(const FiniteOrderIsometry& iso,
                                        const Tolerances& tol = {}) {
  const auto P = detail::powers_upto(iso.R, iso.order);
  Matrix sum = Matrix::Zero(iso.R.rows(), iso.R.cols());
  for (const Matrix& Pk : P) sum += Pk;
  Matrix series = sum / static_cast<double>(iso.order);
  Factorization f = factor_fundamental(
      Matrix(Matrix::Identity(iso.R.rows(), iso.R.cols()) - iso.R), tol);
  return ProjectorSeries{series,
                         operator_norm(series - projector(f.kernel)),
                         operator_norm(iso.R * series - series)};
}

/// Finite series form of the selection: S = (1/2m) sum_{k=1}^{m-1} (m-2k) R^k.
/// It is skew (S^T = -S), which r_skew certifies directly.
struct SelectionSeries {
  Matrix series;
  double r_vs_selection;
  double r_skew;
};

inline SelectionSeries selection_series(const FiniteOrderIsometry& iso,
                                        const DisplacementAnalysis& a) {
  const int m = iso.order;
  const auto P = detail::powers_upto(iso.R, m);
  Matrix series = Matrix::Zero(iso.R.rows(), iso.R.cols());
  for (int k = 1; k < m; ++k)
    series += static_cast<double>(m - 2 * k) * P[k];
  series /= 2.0 * static_cast<double>(m);
  return SelectionSeries{series, operator_norm(series - a.selection),
                         operator_norm(series + series.transpose())};
}

/// Sandwiched symmetric part of R on the moving space, against its closed
/// form (1/m)(-Id - sum_{k=2}^{m-2} R^k + (max(1, m-2)/2)(R + R^(m-1))).
/// The middle sum is empty for m in {2, 3}.
struct SymmetricSandwich {
  Matrix lhs;
  Matrix rhs;
  double residual;
};

inline SymmetricSandwich symmetric_sandwich(const FiniteOrderIsometry& iso,
                                            const DisplacementAnalysis& a) {
  const int m = iso.order;
  const Index n = iso.R.rows();
  const auto P = detail::powers_upto(iso.R, m);
  Matrix lhs = 0.5 * a.proj_moving *
               (iso.R + Matrix(iso.R.transpose())) * a.proj_moving;
  Matrix middle = Matrix::Zero(n, n);
  for (int k = 2; k <= m - 2; ++k) middle += P[k];
  const double endpoint_weight = 0.5 * std::max(1, m - 2);
  Matrix rhs = (-Matrix::Identity(n, n) - middle +
                endpoint_weight * (P[1] + P[m - 1])) /
               static_cast<double>(m);
  return SymmetricSandwich{lhs, rhs, operator_norm(lhs - rhs)};
}

/// Shift identities of the full power sum T = sum_{k<m} R^k:
///   R T = T = R^(m-1) T (r_shift_up / r_shift_down),
///   every power fixes it (r_shift_all), and
///   (R + R^(m-1)) T = 2 T (r_pair).
struct PowerSumIdentities {
  double r_shift_up;
  double r_shift_down;
  double r_shift_all;
  double r_pair;
};

inline PowerSumIdentities power_sum_identities(const FiniteOrderIsometry& iso) {
  const int m = iso.order;
  const auto P = detail::powers_upto(iso.R, m);
  Matrix sum = Matrix::Zero(iso.R.rows(), iso.R.cols());
  for (const Matrix& Pk : P) sum += Pk;
  PowerSumIdentities out{};
  out.r_shift_up = operator_norm(iso.R * sum - sum);
  out.r_shift_down = operator_norm(P[m - 1] * sum - sum);
  double worst = 0.0;
  for (int l = 1; l < m; ++l)
    worst = std::max(worst, operator_norm(P[l] * sum - sum));
  out.r_shift_all = worst;
  out.r_pair = operator_norm((P[1] + P[m - 1]) * sum - 2.0 * sum);
  return out;
}

}  // namespace dispmap
