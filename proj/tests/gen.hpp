#pragma once

// Small seeded generators for property tests.

#include <cmath>
#include <cstdint>
#include <random>

#include "gradnorm/problems.hpp"

namespace gradnorm::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

  Vec vec(int d, double scale = 1.0) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = scale * normal();
    return v;
  }

  // Symmetric PSD matrix with spectrum in [0, L] and largest eigenvalue L.
  Mat psd(int d, double L) {
    Mat G(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) G(i, j) = normal();
    Eigen::HouseholderQR<Mat> qr(G);
    const Mat U = qr.householderQ();
    Vec lam(d);
    lam[0] = L;
    for (int i = 1; i < d; ++i) lam[i] = uniform(0.0, L);
    return U * lam.asDiagonal() * U.transpose();
  }

  // (eta, alpha) in the 1/L-cocoercive region; on_curve puts it on eta^2 + alpha^2 = L eta.
  LinearOperatorSpec rotation(int half, double L, bool on_curve = false) {
    LinearOperatorSpec s;
    s.eta = uniform(0.05 * L, L);
    const double amax = std::sqrt(std::max(0.0, L * s.eta - s.eta * s.eta));
    s.alpha = on_curve ? amax : uniform(0.0, amax);
    s.b = vec(2 * half);
    return s;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace gradnorm::testing
