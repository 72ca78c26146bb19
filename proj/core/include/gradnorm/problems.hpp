#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gradnorm/kvdoc.hpp"

namespace gradnorm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Smooth convex objective accessed through value and gradient oracles.
// Immutable: with_optimum() returns a modified copy.
class SmoothProblem {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;

  SmoothProblem(std::string kind, int dimension, double L, ValueFn value, GradFn gradient,
                KvDoc params = {});

  const std::string& kind() const { return kind_; }
  int dimension() const { return dim_; }
  double L() const { return L_; }

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;

  bool has_optimum() const { return x_star_.has_value(); }
  const Vec& x_star() const;
  double f_star() const;
  SmoothProblem with_optimum(Vec x_star, double f_star) const;

  // Returns false for problems built from arbitrary lambdas.
  bool serializable() const { return kind_ != "custom"; }
  KvDoc to_doc() const;
  const KvDoc& params() const { return params_; }

 private:
  void check_dim(const Vec& x) const;

  std::string kind_;
  int dim_;
  double L_;
  ValueFn value_;
  GradFn gradient_;
  KvDoc params_;
  std::optional<Vec> x_star_;
  double f_star_ = 0.0;
};

// Operator F with 1/L-cocoercivity modulus, optionally with a known zero u*.
class OperatorProblem {
 public:
  using OpFn = std::function<Vec(const Vec&)>;

  OperatorProblem(std::string kind, int dimension, double L, OpFn op, KvDoc params = {});

  const std::string& kind() const { return kind_; }
  int dimension() const { return dim_; }
  double L() const { return L_; }

  Vec apply(const Vec& u) const;

  bool has_zero() const { return u_star_.has_value(); }
  const Vec& u_star() const;
  OperatorProblem with_zero(Vec u_star) const;

  bool serializable() const { return kind_ != "custom"; }
  KvDoc to_doc() const;
  const KvDoc& params() const { return params_; }

 private:
  std::string kind_;
  int dim_;
  double L_;
  OpFn op_;
  KvDoc params_;
  std::optional<Vec> u_star_;
};

// F(u) = A u + b with A = [[eta I, alpha I], [-alpha I, eta I]].
struct LinearOperatorSpec {
  double eta = 0.0;
  double alpha = 0.0;
  Vec b;  // length d, d even

  int half_dimension() const { return static_cast<int>(b.size() / 2); }
};

// Relative slack allowed when checking eigenvalue and cocoercivity bounds.
inline constexpr double kSpectralTol = 1e-10;

SmoothProblem make_quadratic(const Mat& Q, const Vec& c, double L);
// L defaults to 1.01 times a 50-step power-iteration estimate of ||rows||^2 / rho.
SmoothProblem make_logsumexp(const Mat& rows, double rho, std::optional<double> L = std::nullopt);
// Separable Huber function sum_i h_delta(x_i - center_i); L = 1/delta.
SmoothProblem make_huber(const Vec& center, double delta);
SmoothProblem make_custom_smooth(int dimension, double L, SmoothProblem::ValueFn value,
                                 SmoothProblem::GradFn gradient);

OperatorProblem make_rotation_operator(const LinearOperatorSpec& spec, double L);
// Operator [grad_x phi; -grad_y phi] of
// phi(x, y) = eta/2 |x|^2 - eta/2 |y|^2 + alpha x'y + b1'x - b2'y.
OperatorProblem make_saddle_quadratic(double eta, double alpha, const Vec& b1, const Vec& b2,
                                      double L);
OperatorProblem gradient_as_operator(const SmoothProblem& p);
OperatorProblem make_custom_operator(int dimension, double L, OperatorProblem::OpFn op);

SmoothProblem smooth_problem_from_doc(const KvDoc& doc);
OperatorProblem operator_problem_from_doc(const KvDoc& doc);
bool is_operator_kind(const std::string& kind);

struct VerifierCheck {
  std::string name;
  double worst_violation = 0.0;  // relative; <= tol means the inequality held
  int samples = 0;
  bool passed = true;
};

struct VerifierReport {
  std::vector<VerifierCheck> checks;
  double tol = 1e-10;
  bool passed = true;

  const VerifierCheck& at(const std::string& name) const;
};

// Samples pairs in the ball of `radius` around the origin (half of them close
// pairs) and reports the worst relative violation of each defining inequality.
VerifierReport verify_smooth_convex(const SmoothProblem& p, int n_samples, double radius,
                                    std::uint64_t seed, double tol = 1e-10);
VerifierReport verify_cocoercive(const OperatorProblem& p, int n_samples, double radius,
                                 std::uint64_t seed, double tol = 1e-10);

}  // namespace gradnorm
