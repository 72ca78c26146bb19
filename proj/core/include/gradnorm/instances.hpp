#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gradnorm/problems.hpp"

namespace gradnorm {

// Seeded test instances. All generators use std::mt19937_64, so instances are
// reproducible for a given standard library.

struct SmoothInstance {
  std::string name;
  SmoothProblem problem;
  Vec x0;
};

struct OperatorInstance {
  std::string name;
  OperatorProblem problem;
  Vec u0;
};

// Q = U diag(lambda) U^T with Haar U, lambda_max = L, other eigenvalues uniform
// on [0, L]; x* Gaussian, c = -Q x*, x0 Gaussian. dimension 0 draws d in [2, 50].
SmoothInstance random_quadratic(std::uint64_t seed, int dimension = 0, double L = 1.0);
std::vector<SmoothInstance> quadratic_suite(int count = 20, double L = 1.0);

// Log-sum-exp with 20 centered Gaussian rows in dimension 5, rho = 1; x* from
// with_reference_optimum.
SmoothInstance logsumexp_instance(std::uint64_t seed = 7);

// Quadratic with eigenvalues L (i/(d-1))^2, i = 0..d-1, in a Haar-random basis,
// x* orthogonal to the null direction, x0 = 0. Many small eigenvalues make the
// worst case of accelerated methods visible at moderate K.
SmoothInstance spectral_quadratic(std::uint64_t seed, int dimension = 300, double L = 1.0);

// Rotation operator with eta uniform on [0.1 L, L], alpha uniform on [0, sqrt(L eta - eta^2)],
// half-dimension in [1, 10], Gaussian b and u0.
OperatorInstance random_rotation(std::uint64_t seed, double L = 1.0);
std::vector<OperatorInstance> rotation_suite(int count = 20, double L = 1.0);

// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, sign-corrected).
Mat haar_orthogonal(int d, std::uint64_t seed);

}  // namespace gradnorm
