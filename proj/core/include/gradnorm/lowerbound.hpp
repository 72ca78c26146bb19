#pragma once

#include <ostream>
#include <vector>

#include "gradnorm/methods.hpp"
#include "gradnorm/polynomial.hpp"

namespace gradnorm {

// Stationary linear method u_k = C_0(A) u_{k-1} + N(A) b on F(u) = A u + b.
struct ScliMethod {
  Polynomial c0;
  Polynomial n;
  int p = 1;  // degree bound: deg C_0 <= p, deg N <= p - 1
};

// GDA(eta) and KM(alpha) give one-step polynomials; Halpern is unrolled over
// `horizon` steps into a single step of degree horizon. `param` is eta for GDA,
// alpha for KM and ignored for Halpern.
ScliMethod method_to_scli(Method m, double param, int horizon, double L);

// Largest coefficient of C_0(y) - 1 - N(y) y.
double consistency_check(const ScliMethod& m);

// sqrt(eta^2 + alpha^2) |c_0(eta + alpha i)|^K = ||F(u_K)|| / ||u_0 - u*|| on the
// rotation instance with u_0 = 0. Throws if (eta, alpha) is not 1/L-cocoercive
// or m is inconsistent.
double eval_scli_norm(const ScliMethod& m, int K, double eta, double alpha, double L);

// Same ratio from explicit 2x2 matrix iteration with u_0 = 0 and u* = (D, 0).
double simulate_scli_norm(const ScliMethod& m, int K, double eta, double alpha, double L,
                          double D = 1.0);

// Re c_0(eta + alpha i) with alpha^2 = L eta - eta^2, as a polynomial in eta.
Polynomial real_part_on_curve(const Polynomial& c0, double L);

struct HardInstanceSweep {
  int K = 0;
  double L = 1.0;
  int p = 1;
  std::vector<double> eta;
  std::vector<double> alpha;
  std::vector<double> ratio;
  double sup = 0.0;
  double sup_eta = 0.0;
  double theorem_bound = 0.0;  // L / (4 p sqrt(5 K))
  double margin = 0.0;         // sup / theorem_bound
  bool bound_satisfied = false;
};

inline constexpr int kMinSweepGrid = 1000;
inline constexpr double kSweepGridSlack = 1e-3;

// Log-spaced eta grid on [1e-6 L, L], alpha on the boundary curve. Grid points
// are split across `threads` workers (0 picks hardware concurrency) and reduced
// in chunk order, so the result does not depend on the thread count.
HardInstanceSweep sweep_hard_instances(const ScliMethod& m, int K, double L, int grid_size,
                                       int threads = 0);

// CSV "eta,alpha,ratio" followed by a "# sup=..., bound=..., margin=..." line.
void write_sweep_csv(const HardInstanceSweep& s, std::ostream& out);

struct PolySupResult {
  double sup = 0.0;
  double argmax = 0.0;
  double bound = 0.0;  // L / (40 p^2 k)
  int p = 1;
  bool satisfied = false;
};

// sup_{y in (0, L]} y |r(y)|^k by a 10^4-point log grid plus golden-section
// refinement around the best three grid points. Requires r(0) = 1.
PolySupResult poly_sup_check(const Polynomial& r, int k, double L);

}  // namespace gradnorm
