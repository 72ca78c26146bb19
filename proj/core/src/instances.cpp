#include "gradnorm/instances.hpp"

#include <cmath>
#include <random>

#include <Eigen/QR>

#include "gradnorm/errors.hpp"
#include "gradnorm/methods.hpp"

namespace gradnorm {
namespace {

Vec gaussian(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> N(0.0, 1.0);
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = N(rng);
  return v;
}

Mat orthogonal(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> N(0.0, 1.0);
  Mat G(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) G(i, j) = N(rng);
  }
  Eigen::HouseholderQR<Mat> qr(G);
  Mat Q = qr.householderQ();
  const Mat R = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  }
  return Q;
}

Mat symmetrize(const Mat& M) { return 0.5 * (M + M.transpose()); }

}  // namespace

Mat haar_orthogonal(int d, std::uint64_t seed) {
  if (d < 1) throw InvalidArgument("dimension must be positive");
  std::mt19937_64 rng(seed);
  return orthogonal(rng, d);
}

SmoothInstance random_quadratic(std::uint64_t seed, int dimension, double L) {
  if (!(L > 0.0)) throw InvalidArgument("L must be positive");
  std::mt19937_64 rng(seed);
  int d = dimension;
  if (d == 0) d = std::uniform_int_distribution<int>(2, 50)(rng);
  if (d < 1) throw InvalidArgument("dimension must be positive");
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Vec lambda(d);
  lambda[0] = L;
  for (int i = 1; i < d; ++i) lambda[i] = L * U(rng);
  const Mat V = orthogonal(rng, d);
  const Mat Q = symmetrize(V * lambda.asDiagonal() * V.transpose());
  const Vec xs = gaussian(rng, d);
  const Vec c = -Q * xs;
  const Vec x0 = gaussian(rng, d);
  return {"quadratic-" + std::to_string(seed), make_quadratic(Q, c, L), x0};
}

std::vector<SmoothInstance> quadratic_suite(int count, double L) {
  std::vector<SmoothInstance> out;
  out.reserve(count);
  for (int i = 1; i <= count; ++i) out.push_back(random_quadratic(1000 + i, 0, L));
  return out;
}

SmoothInstance logsumexp_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int m = 20, d = 5;
  Mat rows(m, d);
  for (int i = 0; i < m; ++i) rows.row(i) = gaussian(rng, d).transpose();
  // Centered rows put the origin inside their convex hull, so a minimizer exists.
  rows.rowwise() -= rows.colwise().mean();
  const SmoothProblem p = make_logsumexp(rows, 1.0);
  const Vec x0 = gaussian(rng, d);
  return {"logsumexp-" + std::to_string(seed), with_reference_optimum(p, x0), x0};
}

SmoothInstance spectral_quadratic(std::uint64_t seed, int dimension, double L) {
  if (dimension < 2) throw InvalidArgument("spectral_quadratic needs dimension >= 2");
  if (!(L > 0.0)) throw InvalidArgument("L must be positive");
  std::mt19937_64 rng(seed);
  const int d = dimension;
  Vec lambda(d);
  for (int i = 0; i < d; ++i) {
    const double t = static_cast<double>(i) / (d - 1);
    lambda[i] = L * t * t;
  }
  const Mat V = orthogonal(rng, d);
  const Mat Q = symmetrize(V * lambda.asDiagonal() * V.transpose());
  Vec w = gaussian(rng, d);
  w[0] = 0.0;
  const Vec xs = V * w;
  const Vec c = -Q * xs;
  return {"spectral-" + std::to_string(seed), make_quadratic(Q, c, L), Vec::Zero(d)};
}

OperatorInstance random_rotation(std::uint64_t seed, double L) {
  if (!(L > 0.0)) throw InvalidArgument("L must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int half = std::uniform_int_distribution<int>(1, 10)(rng);
  LinearOperatorSpec spec;
  spec.eta = L * (0.1 + 0.9 * U(rng));
  const double amax = std::sqrt(std::max(0.0, L * spec.eta - spec.eta * spec.eta));
  spec.alpha = amax * U(rng);
  spec.b = gaussian(rng, 2 * half);
  const Vec u0 = gaussian(rng, 2 * half);
  return {"rotation-" + std::to_string(seed), make_rotation_operator(spec, L), u0};
}

std::vector<OperatorInstance> rotation_suite(int count, double L) {
  std::vector<OperatorInstance> out;
  out.reserve(count);
  for (int i = 1; i <= count; ++i) out.push_back(random_rotation(2000 + i, L));
  return out;
}

}  // namespace gradnorm
