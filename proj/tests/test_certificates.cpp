#include <gtest/gtest.h>

#include <cmath>

#include "gen.hpp"
#include "gradnorm/certificates.hpp"
#include "gradnorm/errors.hpp"
#include "gradnorm/instances.hpp"
#include "gradnorm/tamper.hpp"

namespace gradnorm {
namespace {

using testing::Gen;

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

SmoothProblem half_square(int d = 1, double L = 1.0) {
  return make_quadratic(L * Mat::Identity(d, d), Vec::Zero(d), L);
}

OperatorProblem half_rotation() { return make_rotation_operator({0.5, 0.5, Vec::Zero(2)}, 1.0); }

void expect_pass(const CertificateReport& r, const std::string& what) {
  EXPECT_TRUE(r.passed) << what << ": worst " << r.worst_violation << " at k=" << r.worst_k
                        << " tau=" << r.tolerance << " first failure k=" << r.first_failure();
  for (const std::string& f : r.failures()) ADD_FAILURE() << what << ": " << f;
}

TEST(Tolerance, HybridScale) {
  EXPECT_EQ(potential_tolerance(0.0), 1e-9);
  EXPECT_EQ(potential_tolerance(-0.5), 1e-9);
  EXPECT_EQ(potential_tolerance(-1e4), 1e-5);
}

TEST(CheckGd, DiagonalQuadratic) {
  const SmoothProblem p = make_quadratic(vec({1, 4}).asDiagonal(), Vec::Zero(2), 4.0);
  const CertificateReport r = check_gd(run_gd(p, vec({1, 1}), 100), p);
  expect_pass(r, "gd");
  EXPECT_EQ(r.steps.size(), 101u);
  EXPECT_LE(r.worst_violation, r.tolerance);
  EXPECT_TRUE(r.at("averaged_bound").passed);
  EXPECT_TRUE(r.at("grad_envelope").applicable);
}

TEST(CheckGd, ConstantFunctionHasZeroDeltas) {
  const SmoothProblem p = make_custom_smooth(
      3, 1.0, [](const Vec&) { return 2.0; }, [](const Vec&) -> Vec { return Vec::Zero(3); });
  const CertificateReport r = check_gd(run_gd(p, vec({1, 2, 3}), 10), p);
  expect_pass(r, "constant");
  for (const CertificateStep& s : r.steps) {
    if (s.delta) EXPECT_EQ(*s.delta, 0.0);
  }
  EXPECT_FALSE(r.at("grad_envelope").applicable);
}

TEST(CheckGd, AscentStepFailsAtFirstTamperedStep) {
  const SmoothInstance in = random_quadratic(1, 10);
  const Trace t = tamper(run_gd(in.problem, in.x0, 30), in.problem, "ascent_step");
  const CertificateReport r = check_gd(t, in.problem);
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(r.first_failure(), 1);
}

TEST(CheckGd, SuiteAndLogSumExp) {
  auto suite = quadratic_suite(20);
  suite.push_back(logsumexp_instance());
  for (const SmoothInstance& in : suite) {
    expect_pass(check_gd(run_gd(in.problem, in.x0, 1000), in.problem), in.name);
  }
}

TEST(CheckGd, WrongMethodMismatch) {
  const SmoothInstance in = random_quadratic(2, 5);
  EXPECT_THROW(check_gd(run_fgm(in.problem, in.x0, 5), in.problem), MethodMismatch);
}

TEST(CheckFgm, SuiteK200) {
  auto suite = quadratic_suite(20);
  suite.push_back(logsumexp_instance());
  for (const SmoothInstance& in : suite) {
    const CertificateReport r = check_fgm(run_fgm(in.problem, in.x0, 200), in.problem);
    expect_pass(r, in.name);
    EXPECT_TRUE(r.at("gap_envelope").applicable);
    EXPECT_TRUE(r.at("grad_envelope").applicable);
  }
}

// With x0 = 1 on x^2/2: C_0 = B_0 f_0 = 1/2, x1 = v1 = 0, so C_1 = a_0 g_0^2 = 1/2.
// The slack (L/2)(|x* - v_1|^2 - |x* - v_2|^2) is 0 since g_1 = 0 keeps v_2 = v_1 = x*.
TEST(CheckFgm, KEqualsOneHandNumbers) {
  const CertificateReport r = check_fgm(run_fgm(half_square(), vec({1}), 1), half_square());
  expect_pass(r, "fgm K=1");
  ASSERT_EQ(r.steps.size(), 2u);
  EXPECT_DOUBLE_EQ(r.steps[0].potential, 0.5);
  EXPECT_DOUBLE_EQ(r.steps[1].potential, 0.5);
  EXPECT_DOUBLE_EQ(*r.steps[1].delta, 0.0);
  EXPECT_DOUBLE_EQ(*r.steps[1].slack, 0.0);
}

TEST(CheckFgm, MissingOptimum) {
  const SmoothProblem p = make_custom_smooth(
      1, 1.0, [](const Vec& x) { return 0.5 * x.squaredNorm(); }, [](const Vec& x) -> Vec { return x; });
  EXPECT_THROW(check_fgm(run_fgm(p, vec({1}), 3), p), MissingOptimum);
}

TEST(CheckFgm, MinGradientEnvelope) {
  for (const SmoothInstance& in : quadratic_suite(5)) {
    const Trace t = run_fgm(in.problem, in.x0, 500);
    const RateEnvelope env = rate_envelope(Method::FGM, in.problem, in.x0, 500);
    const std::vector<double> m = envelope_measure(t);
    for (int k = 0; k <= 500; ++k) EXPECT_LE(m[k], env.bound[k] * (1 + 1e-8));
  }
}

TEST(CheckOgmg, KEqualsOneIsTight) {
  const SmoothProblem p = half_square(3, 2.0);
  const CertificateReport r = check_ogmg(run_ogmg(p, vec({1, -2, 0.5}), 1), p);
  expect_pass(r, "ogmg K=1");
  const double C0 = r.steps[0].potential, C1 = r.steps[1].potential;
  EXPECT_LE(std::abs(C1 - C0), 1e-12 * std::abs(C0));
}

TEST(CheckOgmg, RandomQuadraticsAllHorizons) {
  Gen g(61);
  for (int K = 1; K <= 100; K += (K < 10 ? 1 : 9)) {
    const int d = g.integer(2, 30);
    const double L = g.uniform(0.5, 3.0);
    const Mat Q = g.psd(d, L);
    const SmoothProblem p = make_quadratic(Q, -Q * g.vec(d), L);
    const CertificateReport r = check_ogmg(run_ogmg(p, g.vec(d), K), p);
    expect_pass(r, "K=" + std::to_string(K));
    EXPECT_TRUE(r.at("grad_envelope").applicable);
  }
}

TEST(CheckOgmg, OptimumFree) {
  const SmoothProblem p = make_custom_smooth(
      2, 1.0, [](const Vec& x) { return 0.5 * x.squaredNorm(); }, [](const Vec& x) -> Vec { return x; });
  const CertificateReport r = check_ogmg(run_ogmg(p, vec({1, 2}), 10), p);
  expect_pass(r, "no optimum");
  EXPECT_FALSE(r.at("grad_envelope").applicable);
}

TEST(CheckOgmg, RejectsOtherTraces) {
  const SmoothInstance in = random_quadratic(3, 5);
  EXPECT_THROW(check_ogmg(run_gd(in.problem, in.x0, 5), in.problem), MethodMismatch);
  EXPECT_THROW(check_ogmg(run_ogmg(in.problem, in.x0, 5), in.problem, ogmg_schedule(6)),
               MethodMismatch);
}

TEST(CheckComposition, PassesOnSuite) {
  for (const SmoothInstance& in : quadratic_suite(10)) {
    for (int K : {2, 3, 10, 101}) {
      const CertificateReport r = check_fgm_then_ogmg(run_fgm_then_ogmg(in.problem, in.x0, K), in.problem);
      expect_pass(r, in.name + " K=" + std::to_string(K));
      EXPECT_TRUE(r.at("fgm.terminal").applicable);
      EXPECT_TRUE(r.at("ogmg.terminal").applicable);
    }
  }
}

TEST(CheckGda, HalfRotationClosedForm) {
  const Vec u0 = vec({1, 0});
  const Trace t = run_gda(half_rotation(), u0, 50, GdaParams::optimal(1.0));
  const CertificateReport r = check_gda(t, half_rotation());
  expect_pass(r, "rotation");
  for (const StepRecord& s : t.records) EXPECT_NEAR(std::sqrt(s.norm_sq), std::pow(2.0, -(s.k + 1) / 2.0), 1e-15);
}

TEST(CheckGda, ScaledIdentity) {
  const OperatorProblem p = make_rotation_operator({2.0, 0.0, vec({1, 1})}, 2.0);
  expect_pass(check_gda(run_gda(p, vec({3, -1}), 10, GdaParams::optimal(2.0)), p), "L Id");
}

TEST(CheckGda, LongStepSkipsEnvelopeKeepsMonotonicity) {
  for (const OperatorInstance& in : rotation_suite(20)) {
    const double L = in.problem.L();
    const CertificateReport r =
        check_gda(run_gda(in.problem, in.u0, 1000, {1.99 / L}), in.problem);
    expect_pass(r, in.name);
    EXPECT_FALSE(r.at("norm_envelope").applicable);
    EXPECT_TRUE(r.at("norm_monotone").applicable);
  }
}

TEST(CheckGda, KmTracesCertify) {
  for (const OperatorInstance& in : rotation_suite(5)) {
    const auto T = NonexpansiveMap::from_operator(in.problem);
    const CertificateReport half = check_gda(run_km(T, in.u0, 300, 0.5), in.problem);
    expect_pass(half, in.name);
    EXPECT_TRUE(half.at("norm_envelope").applicable);
    expect_pass(check_gda(run_km(T, in.u0, 300, 0.8), in.problem), in.name);
  }
}

TEST(CheckGda, MissingZero) {
  const OperatorProblem p = make_custom_operator(2, 1.0, [](const Vec& u) -> Vec { return u; });
  EXPECT_THROW(check_gda(run_gda(p, vec({1, 1}), 3, {1.0}), p), MissingOptimum);
}

TEST(CheckHalpern, TightFirstStep) {
  const CertificateReport r = check_halpern(run_halpern(half_rotation(), vec({1, 0}), 10), half_rotation());
  expect_pass(r, "halpern");
  const RateEnvelope env = rate_envelope(Method::Halpern, half_rotation(), vec({1, 0}), 10);
  EXPECT_DOUBLE_EQ(env.bound[1], 0.5);
  EXPECT_NEAR(r.at("norm_envelope").violation, 0.0, 1e-15);
}

TEST(CheckHalpern, ScaledIdentityPotentialIsZero) {
  const OperatorProblem p = make_rotation_operator({1.0, 0.0, Vec::Zero(2)}, 1.0);
  const CertificateReport r = check_halpern(run_halpern(p, vec({1, 0}), 5), p);
  expect_pass(r, "L Id");
  EXPECT_EQ(r.steps[1].potential, 0.0);
}

TEST(CheckHalpern, RotationSuiteK1000) {
  for (const OperatorInstance& in : rotation_suite(20)) {
    const CertificateReport r = check_halpern(run_halpern(in.problem, in.u0, 1000), in.problem);
    expect_pass(r, in.name);
    for (const CertificateStep& s : r.steps) EXPECT_LE(s.potential, r.tolerance);
  }
}

TEST(CheckHalpern, ZeroFreeSkipsEnvelope) {
  const OperatorProblem p = make_custom_operator(2, 1.0, [](const Vec& u) -> Vec { return 0.5 * u; });
  const CertificateReport r = check_halpern(run_halpern(p, vec({1, 1}), 20), p);
  expect_pass(r, "no zero");
  EXPECT_FALSE(r.at("norm_envelope").applicable);
}

TEST(Certify, Dispatch) {
  const SmoothInstance in = random_quadratic(4, 6);
  EXPECT_EQ(certify(run_fgm(in.problem, in.x0, 20), in.problem).method, Method::FGM);
  const OperatorInstance op = random_rotation(4);
  EXPECT_EQ(certify(run_halpern(op.problem, op.u0, 20), op.problem).method, Method::Halpern);
  EXPECT_THROW(certify(run_halpern(op.problem, op.u0, 20), in.problem), MethodMismatch);
}

TEST(Certify, TraceMustMatchProblem) {
  const SmoothInstance a = random_quadratic(4, 6);
  const SmoothProblem scaled = make_quadratic(2.0 * Mat::Identity(6, 6), Vec::Zero(6), 2.0);
  EXPECT_THROW(check_gd(run_gd(a.problem, a.x0, 5), scaled), InvalidArgument);
}

// Fact: (1/2L) |grad f(x_k)|^2 <= f(x_k) - f* on every smooth convex trace.
TEST(Certify, GradientGapOnAllSmoothMethods) {
  for (const SmoothInstance& in : quadratic_suite(5)) {
    for (const Trace& t : {run_gd(in.problem, in.x0, 200), run_fgm(in.problem, in.x0, 200),
                           run_ogmg(in.problem, in.x0, 50)}) {
      EXPECT_TRUE(certify(t, in.problem).at("gradient_gap").passed) << method_name(t.method);
    }
  }
}

TEST(RateEnvelope, SpecValues) {
  // GD, L = 1, f0 - f* = 1: bound(0) = 2.
  const SmoothProblem gd = make_quadratic(Mat::Identity(1, 1), Vec::Zero(1), 1.0);
  EXPECT_DOUBLE_EQ(rate_envelope(Method::GD, gd, vec({std::sqrt(2.0)}), 3).bound[0], 2.0);
  // OGM-G, K = 1, L = 1, f0 - f* = 1/2: 16 (1/2) / 9.
  EXPECT_DOUBLE_EQ(rate_envelope(Method::OGMG, gd, vec({1.0}), 1).bound[1], 8.0 / 9.0);
  // Halpern, D = 1, L = 1, k = 1: 1/2.
  EXPECT_DOUBLE_EQ(rate_envelope(Method::Halpern, half_rotation(), vec({0.0, 1.0}), 1).bound[1], 0.5);
  EXPECT_DOUBLE_EQ(rate_envelope(Method::GDA, half_rotation(), vec({0.0, 1.0}), 2).bound[2],
                   1.0 / std::sqrt(2.0));
}

TEST(RateEnvelope, PositiveNonincreasing) {
  const SmoothInstance in = random_quadratic(6);
  for (Method m : {Method::GD, Method::FGM, Method::OGMG, Method::FgmThenOgmg}) {
    const RateEnvelope env = rate_envelope(m, in.problem, in.x0, 300);
    for (std::size_t k = 0; k < env.bound.size(); ++k) {
      if (m == Method::FgmThenOgmg && k < 2) continue;
      EXPECT_GT(env.bound[k], 0.0);
      if (k > 2) EXPECT_LE(env.bound[k], env.bound[k - 1]);
    }
    EXPECT_TRUE(env.squared);
  }
  const OperatorInstance op = random_rotation(6);
  for (Method m : {Method::GDA, Method::KM, Method::Halpern}) {
    const RateEnvelope env = rate_envelope(m, op.problem, op.u0, 300);
    EXPECT_FALSE(env.squared);
    for (std::size_t k = 1; k < env.bound.size(); ++k) EXPECT_LE(env.bound[k], env.bound[k - 1]);
  }
}

TEST(RateEnvelope, MissingConstantsAndWrongFamily) {
  const SmoothProblem p = make_custom_smooth(
      1, 1.0, [](const Vec& x) { return 0.5 * x.squaredNorm(); }, [](const Vec& x) -> Vec { return x; });
  EXPECT_THROW(rate_envelope(Method::GD, p, vec({1}), 3), MissingOptimum);
  EXPECT_THROW(rate_envelope(Method::GDA, half_square(), vec({1}), 3), MethodMismatch);
  EXPECT_THROW(rate_envelope(Method::GD, half_rotation(), vec({1, 0}), 3), MethodMismatch);
}

// Envelope domination on certified runs: measured <= bound + 1e-8 bound(0).
TEST(RateEnvelope, DominatesCertifiedRuns) {
  for (const SmoothInstance& in : quadratic_suite(5)) {
    for (Method m : {Method::GD, Method::FGM}) {
      const Trace t = m == Method::GD ? run_gd(in.problem, in.x0, 1000) : run_fgm(in.problem, in.x0, 1000);
      const RateEnvelope env = rate_envelope(m, in.problem, in.x0, 1000);
      const std::vector<double> meas = envelope_measure(t);
      for (int k = 0; k <= 1000; ++k) EXPECT_LE(meas[k], env.bound[k] + 1e-8 * env.bound[0]);
    }
  }
  for (const OperatorInstance& in : rotation_suite(5)) {
    const Trace t = run_halpern(in.problem, in.u0, 1000);
    const RateEnvelope env = rate_envelope(Method::Halpern, in.problem, in.u0, 1000);
    const std::vector<double> meas = envelope_measure(t);
    for (int k = 0; k <= 1000; ++k) EXPECT_LE(meas[k], env.bound[k] + 1e-8 * env.bound[0]);
  }
}

}  // namespace
}  // namespace gradnorm
