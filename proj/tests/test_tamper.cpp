#include <gtest/gtest.h>

#include "gradnorm/certificates.hpp"
#include "gradnorm/errors.hpp"
#include "gradnorm/instances.hpp"
#include "gradnorm/tamper.hpp"

namespace gradnorm {
namespace {

Trace run_smooth(Method m, const SmoothInstance& in, int K) {
  switch (m) {
    case Method::GD: return run_gd(in.problem, in.x0, K);
    case Method::FGM: return run_fgm(in.problem, in.x0, K);
    case Method::OGMG: return run_ogmg(in.problem, in.x0, K);
    default: return run_fgm_then_ogmg(in.problem, in.x0, K);
  }
}

Trace run_op(Method m, const OperatorInstance& in, int K) {
  switch (m) {
    case Method::GDA: return run_gda(in.problem, in.u0, K, GdaParams::optimal(in.problem.L()));
    case Method::KM: return run_km(NonexpansiveMap::from_operator(in.problem), in.u0, K, 0.5);
    default: return run_halpern(in.problem, in.u0, K);
  }
}

TEST(Tamper, FivePerMethod) {
  for (Method m : {Method::GD, Method::FGM, Method::OGMG, Method::FgmThenOgmg, Method::GDA,
                   Method::KM, Method::Halpern}) {
    EXPECT_EQ(tamperings_for(m).size(), 5u) << method_name(m);
  }
}

TEST(Tamper, HonestTracesPass) {
  for (const SmoothInstance& in : quadratic_suite(20)) {
    for (Method m : {Method::GD, Method::FGM, Method::OGMG, Method::FgmThenOgmg}) {
      EXPECT_TRUE(certify(run_smooth(m, in, 60), in.problem).passed) << in.name << ' ' << method_name(m);
    }
  }
}

// Mutation testing: every tampering is rejected on every quadratic of the suite.
TEST(Tamper, SmoothCertificatesRejectEveryTampering) {
  for (const SmoothInstance& in : quadratic_suite(20)) {
    for (Method m : {Method::GD, Method::FGM, Method::OGMG, Method::FgmThenOgmg}) {
      const Trace honest = run_smooth(m, in, 60);
      for (const std::string& name : tamperings_for(m)) {
        const CertificateReport r = certify(tamper(honest, in.problem, name), in.problem);
        EXPECT_FALSE(r.passed) << in.name << ' ' << method_name(m) << ' ' << name;
        EXPECT_GE(r.first_failure(), 0);
      }
    }
  }
}

TEST(Tamper, OperatorCertificatesRejectEveryTampering) {
  for (const OperatorInstance& in : rotation_suite(20)) {
    for (Method m : {Method::GDA, Method::KM, Method::Halpern}) {
      const Trace honest = run_op(m, in, 60);
      EXPECT_TRUE(certify(honest, in.problem).passed) << in.name << ' ' << method_name(m);
      for (const std::string& name : tamperings_for(m)) {
        const CertificateReport r = certify(tamper(honest, in.problem, name), in.problem);
        EXPECT_FALSE(r.passed) << in.name << ' ' << method_name(m) << ' ' << name;
      }
    }
  }
}

TEST(Tamper, DoesNotModifyInput) {
  const SmoothInstance in = random_quadratic(3, 8);
  const Trace t = run_gd(in.problem, in.x0, 20);
  const Trace copy = t;
  (void)tamper(t, in.problem, "swap");
  for (std::size_t i = 0; i < t.records.size(); ++i) EXPECT_EQ(t.records[i].point, copy.records[i].point);
}

TEST(Tamper, RejectsUnknownAndShortTraces) {
  const SmoothInstance in = random_quadratic(3, 8);
  EXPECT_THROW(tamper(run_gd(in.problem, in.x0, 20), in.problem, "nope"), InvalidArgument);
  EXPECT_THROW(tamper(run_gd(in.problem, in.x0, 1), in.problem, "swap"), InvalidArgument);
  const OperatorInstance op = random_rotation(3);
  EXPECT_THROW(tamper(run_halpern(op.problem, op.u0, 20), op.problem, "corrupt_value"),
               InvalidArgument);
}

}  // namespace
}  // namespace gradnorm
