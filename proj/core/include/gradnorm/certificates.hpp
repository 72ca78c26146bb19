#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gradnorm/methods.hpp"

namespace gradnorm {

// One potential evaluation. For k = 0 only the potential is set.
struct CertificateStep {
  int k = 0;
  double potential = 0.0;
  std::optional<double> delta;      // C_k - C_{k-1}
  std::optional<double> slack;      // allowed increase E_k
  std::optional<double> violation;  // delta - slack
  double tol = 0.0;
  int phase = 0;
};

// A named side condition. `violation` <= `tol` passes; inapplicable checks
// (missing optimum, unanalysed step size) are listed but never fail.
struct CertificateCheck {
  std::string name;
  double violation = 0.0;
  double tol = 0.0;
  int worst_k = -1;
  int first_fail_k = -1;
  bool applicable = true;
  bool passed = true;
};

struct CertificateReport {
  Method method = Method::GD;
  std::vector<CertificateStep> steps;
  std::vector<CertificateCheck> checks;
  double worst_violation = 0.0;  // over per-step violations
  int worst_k = -1;
  double tolerance = 0.0;  // tau = 1e-9 max(1, |C_0|) of the first phase
  bool passed = true;

  const CertificateCheck& at(const std::string& name) const;
  std::vector<std::string> failures() const;
  // First k whose per-step inequality or a side condition failed; -1 if none.
  int first_failure() const;
};

double potential_tolerance(double C0);

CertificateReport check_gd(const Trace& t, const SmoothProblem& p);
CertificateReport check_fgm(const Trace& t, const SmoothProblem& p, const FgmSchedule& s);
CertificateReport check_fgm(const Trace& t, const SmoothProblem& p);
CertificateReport check_ogmg(const Trace& t, const SmoothProblem& p, const OgmgSchedule& s);
CertificateReport check_ogmg(const Trace& t, const SmoothProblem& p);
// FGM certificate on the first phase (when x* is known) and OGM-G certificate on the second.
CertificateReport check_fgm_then_ogmg(const Trace& t, const SmoothProblem& p);
// Accepts GDA traces and KM traces built from an operator (eta = 2 alpha / L).
CertificateReport check_gda(const Trace& t, const OperatorProblem& p);
CertificateReport check_halpern(const Trace& t, const OperatorProblem& p);

// Dispatch on t.method.
CertificateReport certify(const Trace& t, const SmoothProblem& p);
CertificateReport certify(const Trace& t, const OperatorProblem& p);

// Closed-form right-hand side of each convergence theorem, k = 0..K.
// `squared` tells whether the bound is on ||g||^2 (smooth methods) or on
// ||F|| (operator methods). FGM's bound is on min_{i<=k} ||g_i||^2; OGM-G and
// fgm_then_ogmg bound the terminal iterate of a run with horizon k.
struct RateEnvelope {
  Method method = Method::GD;
  std::vector<double> bound;
  bool squared = true;
};

RateEnvelope rate_envelope(Method m, const SmoothProblem& p, const Vec& x0, int K);
RateEnvelope rate_envelope(Method m, const OperatorProblem& p, const Vec& u0, int K);
// FGM optimality-gap envelope 4 L D^2 / ((k+1)(k+2)).
std::vector<double> fgm_gap_envelope(const SmoothProblem& p, const Vec& x0, int K);

// The quantity each envelope bounds, read off a trace: ||g_k||^2, the running
// minimum of ||g_k||^2 for FGM, or ||F(u_k)|| for operator methods.
std::vector<double> envelope_measure(const Trace& t);

}  // namespace gradnorm
