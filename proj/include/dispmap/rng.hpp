#pragma once

// Deterministic random inputs. std::normal_distribution is
// implementation-defined, so reports seeded through it would not be
// reproducible across standard libraries; this sampler pins the whole chain:
// mt19937_64 -> 53-bit uniforms -> Box-Muller pairs (cosine branch first)
// -> matrices filled row-major.

#include <dispmap/numlin.hpp>

#include <cmath>
#include <cstdint>
#include <random>

namespace dispmap {

class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on (0,1] x [0,1).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double v = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u));
    const double angle = 6.283185307179586476925286766559 * v;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  Matrix gaussian(Index rows, Index cols) {
    Matrix G(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) G(i, j) = normal();
    return G;
  }

  /// Orthonormal n x k frame: thin Q of a Gaussian matrix. Signs are fixed so
  /// the frame is a deterministic function of the seed alone.
  Matrix orthonormal(Index n, Index k) {
    if (k < 0 || k > n) throw InputError("orthonormal: need 0 <= k <= n");
    if (k == 0) return Matrix(n, 0);
    Matrix G = gaussian(n, k);
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ() * Matrix::Identity(n, k);
    Matrix Rdiag = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (Index j = 0; j < k; ++j)
      if (Rdiag(j, j) < 0.0) Q.col(j) = -Q.col(j);
    return Q;
  }

  /// Dense operator rescaled to the requested norm (norm_cap in (0, 1]).
  Matrix nonexpansive(Index n, double norm_cap) {
    if (!(norm_cap > 0.0) || norm_cap > 1.0)
      throw InputError("nonexpansive: norm_cap must lie in (0, 1]");
    Matrix G = gaussian(n, n);
    const double g = operator_norm(G);
    if (g == 0.0) return Matrix::Zero(n, n);
    return (norm_cap / g) * G;
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dispmap
