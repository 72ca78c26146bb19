#include "gradnorm/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gradnorm/errors.hpp"

namespace gradnorm {
namespace {

constexpr double kEnvelopeRel = 1e-8;
constexpr double kConsistencyTol = 1e-12;
constexpr double kMonotoneRel = 1e-9;

double envelope_tolerance(double env0) { return kEnvelopeRel * std::abs(env0); }

// Re-evaluation is deterministic, so recorded data must match to rounding
// relative to the fresh value itself.
double mismatch(double diff, double scale) {
  if (diff == 0.0) return 0.0;
  return scale > 0.0 ? diff / scale : std::numeric_limits<double>::infinity();
}

double mismatch(const Vec& recorded, const Vec& fresh) {
  if (recorded.size() != fresh.size()) return std::numeric_limits<double>::infinity();
  return mismatch((recorded - fresh).norm(), fresh.norm());
}

// Running maximum of a violation sequence, remembering where it peaked and
// where it first exceeded the tolerance.
struct Worst {
  double tol = 0.0;
  double v = -std::numeric_limits<double>::infinity();
  int k = -1;
  int first = -1;

  explicit Worst(double t) : tol(t) {}
  void update(double x, int at) {
    if (x > v || k < 0) {
      v = x;
      k = at;
    }
    if (first < 0 && !(x <= tol)) first = at;
  }
};

class Builder {
 public:
  explicit Builder(Method m) { r_.method = m; }

  void step(int k, double C, double tol, int phase) {
    CertificateStep s;
    s.k = k;
    s.potential = C;
    s.tol = tol;
    s.phase = phase;
    r_.steps.push_back(s);
  }
  void step(int k, double C, double delta, double slack, double tol, int phase) {
    CertificateStep s;
    s.k = k;
    s.potential = C;
    s.delta = delta;
    s.slack = slack;
    s.violation = delta - slack;
    s.tol = tol;
    s.phase = phase;
    r_.steps.push_back(s);
  }
  void check(const std::string& name, const Worst& w) {
    CertificateCheck c;
    c.name = name;
    c.tol = w.tol;
    c.violation = w.k < 0 ? 0.0 : w.v;
    c.worst_k = w.k;
    c.first_fail_k = w.first;
    c.passed = w.first < 0;
    r_.checks.push_back(c);
  }
  void skipped(const std::string& name) {
    CertificateCheck c;
    c.name = name;
    c.applicable = false;
    r_.checks.push_back(c);
  }
  void set_tolerance(double tau) { r_.tolerance = tau; }

  CertificateReport finish() {
    r_.passed = true;
    r_.worst_violation = 0.0;
    r_.worst_k = -1;
    bool any = false;
    for (const CertificateStep& s : r_.steps) {
      if (!s.violation) continue;
      if (!any || *s.violation > r_.worst_violation) {
        r_.worst_violation = *s.violation;
        r_.worst_k = s.k;
        any = true;
      }
      if (!(*s.violation <= s.tol)) r_.passed = false;
    }
    for (const CertificateCheck& c : r_.checks) {
      if (c.applicable && !c.passed) r_.passed = false;
    }
    return std::move(r_);
  }

 private:
  CertificateReport r_;
};

// Oracle values re-evaluated at the recorded points.
struct Fresh {
  std::vector<Vec> x;
  std::vector<Vec> g;
  std::vector<double> gsq;
  std::vector<double> f;  // smooth problems only
};

void check_trace_shape(const Trace& t, double L) {
  if (t.records.empty()) throw InvalidArgument("trace has no records");
  if (std::abs(t.L - L) > 1e-12 * L) {
    throw InvalidArgument("trace L " + format_double(t.L) + " differs from problem L " +
                          format_double(L));
  }
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    if (t.records[i].k != static_cast<int>(i)) throw InvalidArgument("trace records out of order");
  }
}

Fresh evaluate(const Trace& t, const SmoothProblem& p, Builder& b) {
  check_trace_shape(t, p.L());
  Fresh e;
  Worst og(kConsistencyTol), ov(kConsistencyTol);
  for (const StepRecord& r : t.records) {
    if (r.point.size() != p.dimension()) throw InvalidArgument("trace point has wrong dimension");
    Vec g = p.gradient(r.point);
    const double f = p.value(r.point);
    og.update(mismatch(r.oracle, g), r.k);
    if (r.value) ov.update(mismatch(std::abs(*r.value - f), std::abs(f)), r.k);
    e.x.push_back(r.point);
    e.gsq.push_back(g.squaredNorm());
    e.g.push_back(std::move(g));
    e.f.push_back(f);
  }
  b.check("oracle_consistency", og);
  b.check("value_consistency", ov);
  return e;
}

Fresh evaluate(const Trace& t, const OperatorProblem& p, Builder& b) {
  check_trace_shape(t, p.L());
  Fresh e;
  Worst og(kConsistencyTol);
  for (const StepRecord& r : t.records) {
    if (r.point.size() != p.dimension()) throw InvalidArgument("trace point has wrong dimension");
    Vec F = p.apply(r.point);
    og.update(mismatch(r.oracle, F), r.k);
    e.x.push_back(r.point);
    e.gsq.push_back(F.squaredNorm());
    e.g.push_back(std::move(F));
  }
  b.check("oracle_consistency", og);
  return e;
}

void require_method(const Trace& t, std::initializer_list<Method> allowed, const char* who) {
  for (Method m : allowed) {
    if (t.method == m) return;
  }
  throw MethodMismatch(std::string(who) + " cannot certify a " + method_name(t.method) +
                       " trace");
}

// (1/2L) ||g||^2 <= f - f*, a consequence of smoothness and convexity.
void gradient_gap_check(Builder& b, const std::string& name, const Fresh& e, const SmoothProblem& p,
                        int lo, int hi, double tau) {
  if (!p.has_optimum()) {
    b.skipped(name);
    return;
  }
  Worst w(tau);
  for (int i = lo; i <= hi; ++i) w.update(e.gsq[i] / (2.0 * p.L()) - (e.f[i] - p.f_star()), i);
  b.check(name, w);
}

// FGM potential on records lo..lo+n, treated as iterates 0..n of a run with schedule s.
void fgm_phase(Builder& b, const Fresh& e, const SmoothProblem& p, const FgmSchedule& s, int lo,
               int n, const std::string& prefix, bool record_tau) {
  if (s.K < n) throw MethodMismatch("FGM schedule horizon is shorter than the trace");
  if (std::abs(s.L - p.L()) > 1e-12 * p.L()) {
    throw MethodMismatch("FGM schedule was built for a different L");
  }
  const double L = p.L();
  const Vec& xs = p.x_star();
  const double fs = p.f_star();
  const Vec& x0 = e.x[lo];
  const double D = (x0 - xs).norm();

  std::vector<double> C(n + 1);
  double grad_sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    C[i] = grad_sum + s.B[i] * (e.f[lo + i] - fs);
    grad_sum += s.a[i] * e.gsq[lo + i];
  }
  const double tau = potential_tolerance(C[0]);
  if (record_tau) b.set_tolerance(tau);

  Vec v = x0;
  b.step(lo, C[0], tau, 0);
  for (int i = 1; i <= n; ++i) {
    // v_i from v_{i-1}, then v_{i+1}: the slack at step i telescopes the
    // distance of v to x*.
    v -= (s.b[i - 1] / L) * e.g[lo + i - 1];
    const Vec v_next = v - (s.b[i] / L) * e.g[lo + i];
    const double slack = 0.5 * L * ((xs - v).squaredNorm() - (xs - v_next).squaredNorm());
    b.step(lo + i, C[i], C[i] - C[i - 1], slack, tau, 0);
  }

  const double bound = s.B[0] * (e.f[lo] - fs) + 0.5 * L * D * D;
  Worst term(tau);
  for (int i = 0; i <= n; ++i) term.update(C[i] - bound, lo + i);
  b.check(prefix + "terminal", term);
  gradient_gap_check(b, prefix + "gradient_gap", e, p, lo, lo + n, tau);

  // Closed-form rates assume the standard schedule started at B_0 = 1.
  const bool standard = s.B[0] == 1.0 && validate_schedule(s).passed;
  if (!standard) {
    b.skipped(prefix + "gap_envelope");
    b.skipped(prefix + "grad_envelope");
    return;
  }
  auto gap_env = [&](int k) { return 4.0 * L * D * D / ((k + 1.0) * (k + 2.0)); };
  auto grad_env = [&](int k) { return 18.0 * L * L * D * D / ((k + 1.0) * (k + 2.0) * (k + 3.0)); };
  Worst gap(envelope_tolerance(gap_env(0))), grad(envelope_tolerance(grad_env(0)));
  double running = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    running = std::min(running, e.gsq[lo + i]);
    gap.update(e.f[lo + i] - fs - gap_env(i), lo + i);
    grad.update(running - grad_env(i), lo + i);
  }
  b.check(prefix + "gap_envelope", gap);
  b.check(prefix + "grad_envelope", grad);
}

void ogmg_phase(Builder& b, const Fresh& e, const SmoothProblem& p, const OgmgSchedule& s, int lo,
                int n, const std::string& prefix, int phase, bool record_tau) {
  if (s.K != n) {
    throw MethodMismatch("OGM-G schedule horizon " + std::to_string(s.K) +
                         " does not match trace horizon " + std::to_string(n));
  }
  const double L = p.L();
  auto x = [&](int i) -> const Vec& { return e.x[lo + i]; };
  auto g = [&](int i) -> const Vec& { return e.g[lo + i]; };
  const double gK = e.gsq[lo + n];
  const double fK = e.f[lo + n];

  std::vector<double> C(n + 1);
  for (int i = 0; i <= n; ++i) {
    C[i] = s.A[i] * ((e.gsq[lo + i] + gK) / (2.0 * L) + e.f[lo + i] - fK);
  }
  const double tau = potential_tolerance(C[0]);
  if (record_tau) b.set_tolerance(tau);

  // y_{-1} = x_0 and y_i = x_i - g_i / L.
  std::vector<Vec> y(n + 2);
  y[0] = x(0);
  for (int i = 0; i <= n; ++i) y[i + 1] = x(i) - g(i) / L;
  auto Y = [&](int i) -> const Vec& { return y[i + 1]; };

  b.step(lo, C[0], tau, phase);
  for (int i = 1; i <= n; ++i) {
    double slack = s.A[i] * g(i).dot(x(i) - Y(i - 1)) -
                   s.A[i - 1] * g(i - 1).dot(x(i - 1) - Y(i - 2)) +
                   g(i - 1).dot(s.A[i] * Y(i - 1) - s.A[i - 1] * Y(i - 2) - s.a[i] * Y(n));
    b.step(lo + i, C[i], C[i] - C[i - 1], slack, tau, phase);
  }

  Worst term(tau);
  term.update(C[n] - C[0], lo + n);
  b.check(prefix + "terminal", term);
  gradient_gap_check(b, prefix + "gradient_gap", e, p, lo, lo + n, tau);

  if (!p.has_optimum() || !validate_schedule(s).passed) {
    b.skipped(prefix + "grad_envelope");
    return;
  }
  const double env = 16.0 * L * (e.f[lo] - p.f_star()) / ((n + 2.0) * (n + 2.0));
  const double env0 = 16.0 * L * (e.f[lo] - p.f_star()) / 4.0;
  Worst w(envelope_tolerance(env0));
  w.update(gK - env, lo + n);
  b.check(prefix + "grad_envelope", w);
}

double distance_to(const Vec& a, const Vec& b) { return (a - b).norm(); }

}  // namespace

const CertificateCheck& CertificateReport::at(const std::string& name) const {
  for (const CertificateCheck& c : checks) {
    if (c.name == name) return c;
  }
  throw InvalidArgument("no certificate check named '" + name + "'");
}

std::vector<std::string> CertificateReport::failures() const {
  std::vector<std::string> out;
  for (const CertificateStep& s : steps) {
    if (s.violation && !(*s.violation <= s.tol)) out.push_back("step " + std::to_string(s.k));
  }
  for (const CertificateCheck& c : checks) {
    if (c.applicable && !c.passed) out.push_back(c.name);
  }
  return out;
}

int CertificateReport::first_failure() const {
  int first = -1;
  auto take = [&](int k) {
    if (k >= 0 && (first < 0 || k < first)) first = k;
  };
  for (const CertificateStep& s : steps) {
    if (s.violation && !(*s.violation <= s.tol)) take(s.k);
  }
  for (const CertificateCheck& c : checks) {
    if (c.applicable && !c.passed) take(c.first_fail_k);
  }
  return first;
}

double potential_tolerance(double C0) { return 1e-9 * std::max(1.0, std::abs(C0)); }

CertificateReport check_gd(const Trace& t, const SmoothProblem& p) {
  require_method(t, {Method::GD}, "check_gd");
  Builder b(Method::GD);
  const Fresh e = evaluate(t, p, b);
  const double L = p.L();
  const int n = static_cast<int>(e.x.size()) - 1;

  std::vector<double> C(n + 1);
  for (int k = 0; k <= n; ++k) C[k] = k / L * e.gsq[k] + e.f[k];
  const double tau = potential_tolerance(C[0]);
  b.set_tolerance(tau);
  b.step(0, C[0], tau, 0);
  for (int k = 1; k <= n; ++k) b.step(k, C[k], C[k] - C[k - 1], 0.0, tau, 0);

  // (1/(k+1)) sum_{i<=k} ||g_i||^2 <= 2L (f_0 - f_{k+1}) / (k+1), scaled by (k+1)/(2L).
  Worst avg(tau);
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    sum += e.gsq[k];
    avg.update(sum / (2.0 * L) - (e.f[0] - e.f[k + 1]), k + 1);
  }
  b.check("averaged_bound", avg);

  Worst mono(kMonotoneRel * e.gsq[0]);
  for (int k = 1; k <= n; ++k) mono.update(e.gsq[k] - e.gsq[k - 1], k);
  b.check("grad_monotone", mono);

  gradient_gap_check(b, "gradient_gap", e, p, 0, n, tau);
  if (p.has_optimum()) {
    const RateEnvelope env = rate_envelope(Method::GD, p, e.x[0], n);
    Worst w(envelope_tolerance(env.bound[0]));
    for (int k = 0; k <= n; ++k) w.update(e.gsq[k] - env.bound[k], k);
    b.check("grad_envelope", w);
  } else {
    b.skipped("grad_envelope");
  }
  return b.finish();
}

CertificateReport check_fgm(const Trace& t, const SmoothProblem& p, const FgmSchedule& s) {
  require_method(t, {Method::FGM}, "check_fgm");
  if (!p.has_optimum()) throw MissingOptimum("FGM certificate needs x* and f*");
  Builder b(Method::FGM);
  const Fresh e = evaluate(t, p, b);
  fgm_phase(b, e, p, s, 0, static_cast<int>(e.x.size()) - 1, "", true);
  return b.finish();
}

CertificateReport check_fgm(const Trace& t, const SmoothProblem& p) {
  if (t.fgm) return check_fgm(t, p, *t.fgm);
  return check_fgm(t, p, fgm_schedule(t.horizon, 1.0, p.L()));
}

CertificateReport check_ogmg(const Trace& t, const SmoothProblem& p, const OgmgSchedule& s) {
  require_method(t, {Method::OGMG}, "check_ogmg");
  const int n = static_cast<int>(t.records.size()) - 1;
  if (n != t.horizon) throw MethodMismatch("OGM-G trace is not complete");
  Builder b(Method::OGMG);
  const Fresh e = evaluate(t, p, b);
  ogmg_phase(b, e, p, s, 0, n, "", 0, true);
  return b.finish();
}

CertificateReport check_ogmg(const Trace& t, const SmoothProblem& p) {
  if (t.ogmg) return check_ogmg(t, p, *t.ogmg);
  return check_ogmg(t, p, ogmg_schedule(t.horizon));
}

CertificateReport check_fgm_then_ogmg(const Trace& t, const SmoothProblem& p) {
  require_method(t, {Method::FgmThenOgmg}, "check_fgm_then_ogmg");
  const int K = t.horizon;
  if (static_cast<int>(t.records.size()) != K + 1) {
    throw MethodMismatch("fgm_then_ogmg trace is not complete");
  }
  const int m = t.phase_split;
  const int n = K - m;
  if (m != K / 2) throw MethodMismatch("fgm_then_ogmg trace has an unexpected phase split");
  const FgmSchedule fs = t.fgm ? *t.fgm : fgm_schedule(m, 1.0, p.L());
  const OgmgSchedule os = t.ogmg ? *t.ogmg : ogmg_schedule(n);

  Builder b(Method::FgmThenOgmg);
  const Fresh e = evaluate(t, p, b);
  if (p.has_optimum()) {
    fgm_phase(b, e, p, fs, 0, m, "fgm.", true);
  } else {
    for (const char* name : {"fgm.terminal", "fgm.gradient_gap", "fgm.gap_envelope",
                             "fgm.grad_envelope"}) {
      b.skipped(name);
    }
  }
  ogmg_phase(b, e, p, os, m, n, "ogmg.", 1, !p.has_optimum());

  if (p.has_optimum()) {
    const RateEnvelope env = rate_envelope(Method::FgmThenOgmg, p, e.x[0], K);
    Worst w(envelope_tolerance(env.bound[0]));
    w.update(e.gsq[K] - env.bound[K], K);
    b.check("grad_envelope", w);
  } else {
    b.skipped("grad_envelope");
  }
  return b.finish();
}

CertificateReport check_gda(const Trace& t, const OperatorProblem& p) {
  require_method(t, {Method::GDA, Method::KM}, "check_gda");
  if (!p.has_zero()) throw MissingOptimum("GDA certificate needs u*");
  const double L = p.L();
  double eta = t.step;
  if (t.method == Method::KM) {
    if (!(t.step > 0.0)) throw MethodMismatch("check_gda needs a KM trace with constant weight");
    eta = GdaParams::from_km(t.step, L).eta;
  }
  Builder b(t.method);
  const Fresh e = evaluate(t, p, b);
  const Vec& us = p.u_star();
  const int n = static_cast<int>(e.x.size()) - 1;

  std::vector<double> C(n + 1);
  for (int k = 0; k <= n; ++k) C[k] = k / (2.0 * L) * e.gsq[k] + e.g[k].dot(e.x[k] - us);
  const double tau = potential_tolerance(C[0]);
  b.set_tolerance(tau);
  b.step(0, C[0], tau, 0);
  for (int k = 1; k <= n; ++k) {
    const Vec u_tilde = e.x[k] - e.g[k] / L;
    const double slack =
        0.5 * L * ((e.x[k] - us).squaredNorm() - (u_tilde - us).squaredNorm());
    b.step(k, C[k], C[k] - C[k - 1], slack, tau, 0);
  }

  Worst mono(kMonotoneRel * e.gsq[0]);
  for (int k = 1; k <= n; ++k) mono.update(e.gsq[k] - e.gsq[k - 1], k);
  b.check("norm_monotone", mono);

  if (std::abs(eta * L - 1.0) <= 1e-12) {
    const RateEnvelope env = rate_envelope(Method::GDA, p, e.x[0], n);
    Worst w(envelope_tolerance(env.bound[0]));
    for (int k = 0; k <= n; ++k) w.update(std::sqrt(e.gsq[k]) - env.bound[k], k);
    b.check("norm_envelope", w);
  } else {
    b.skipped("norm_envelope");
  }
  return b.finish();
}

CertificateReport check_halpern(const Trace& t, const OperatorProblem& p) {
  require_method(t, {Method::Halpern}, "check_halpern");
  Builder b(Method::Halpern);
  const Fresh e = evaluate(t, p, b);
  const double L = p.L();
  const int n = static_cast<int>(e.x.size()) - 1;
  const Vec& u0 = e.x[0];

  std::vector<double> C(n + 1);
  for (int k = 0; k <= n; ++k) {
    C[k] = HalpernParams::A(k, L) * e.gsq[k] + HalpernParams::B(k) * e.g[k].dot(e.x[k] - u0);
  }
  const double tau = potential_tolerance(C[0]);
  b.set_tolerance(tau);
  b.step(0, C[0], tau, 0);
  for (int k = 1; k <= n; ++k) b.step(k, C[k], C[k] - C[k - 1], 0.0, tau, 0);

  Worst nonpos(tau);
  for (int k = 1; k <= n; ++k) nonpos.update(C[k], k);
  b.check("nonpositive", nonpos);

  if (p.has_zero()) {
    const RateEnvelope env = rate_envelope(Method::Halpern, p, u0, n);
    Worst w(envelope_tolerance(env.bound[0]));
    for (int k = 0; k <= n; ++k) w.update(std::sqrt(e.gsq[k]) - env.bound[k], k);
    b.check("norm_envelope", w);
  } else {
    b.skipped("norm_envelope");
  }
  return b.finish();
}

CertificateReport certify(const Trace& t, const SmoothProblem& p) {
  switch (t.method) {
    case Method::GD:
      return check_gd(t, p);
    case Method::FGM:
      return check_fgm(t, p);
    case Method::OGMG:
      return check_ogmg(t, p);
    case Method::FgmThenOgmg:
      return check_fgm_then_ogmg(t, p);
    default:
      throw MethodMismatch(method_name(t.method) + " is an operator method");
  }
}

CertificateReport certify(const Trace& t, const OperatorProblem& p) {
  switch (t.method) {
    case Method::GDA:
    case Method::KM:
      return check_gda(t, p);
    case Method::Halpern:
      return check_halpern(t, p);
    default:
      throw MethodMismatch(method_name(t.method) + " is a smooth minimization method");
  }
}

RateEnvelope rate_envelope(Method m, const SmoothProblem& p, const Vec& x0, int K) {
  if (K < 0) throw InvalidArgument("horizon must be nonnegative");
  if (is_operator_method(m)) {
    throw MethodMismatch(method_name(m) + " envelopes need an operator problem");
  }
  if (!p.has_optimum()) throw MissingOptimum("rate envelopes need x* and f*");
  const double L = p.L();
  const double gap0 = p.value(x0) - p.f_star();
  const double D = distance_to(x0, p.x_star());
  RateEnvelope env;
  env.method = m;
  env.squared = true;
  env.bound.resize(K + 1);
  for (int k = 0; k <= K; ++k) {
    const double kk = k;
    switch (m) {
      case Method::GD:
        env.bound[k] = 2.0 * L * gap0 / (2.0 * kk + 1.0);
        break;
      case Method::FGM:
        env.bound[k] = 18.0 * L * L * D * D / ((kk + 1.0) * (kk + 2.0) * (kk + 3.0));
        break;
      case Method::OGMG:
        env.bound[k] = 16.0 * L * gap0 / ((kk + 2.0) * (kk + 2.0));
        break;
      case Method::FgmThenOgmg: {
        const double fm = k / 2;
        const double n = k - k / 2;
        env.bound[k] = 64.0 * L * L * D * D / ((fm + 1.0) * (fm + 2.0) * (n + 2.0) * (n + 2.0));
        break;
      }
      default:
        break;
    }
  }
  return env;
}

RateEnvelope rate_envelope(Method m, const OperatorProblem& p, const Vec& u0, int K) {
  if (K < 0) throw InvalidArgument("horizon must be nonnegative");
  if (!is_operator_method(m)) {
    throw MethodMismatch(method_name(m) + " envelopes need a smooth problem");
  }
  if (!p.has_zero()) throw MissingOptimum("rate envelopes need u*");
  const double L = p.L();
  const double D = distance_to(u0, p.u_star());
  RateEnvelope env;
  env.method = m;
  env.squared = false;
  env.bound.resize(K + 1);
  for (int k = 0; k <= K; ++k) {
    if (m == Method::Halpern) {
      env.bound[k] = L * D / (k + 1.0);
    } else {
      // GDA with eta = 1/L, equivalently KM with alpha = 1/2.
      env.bound[k] = L * D / std::sqrt(k / 2.0 + 1.0);
    }
  }
  return env;
}

std::vector<double> fgm_gap_envelope(const SmoothProblem& p, const Vec& x0, int K) {
  if (!p.has_optimum()) throw MissingOptimum("rate envelopes need x* and f*");
  const double D = distance_to(x0, p.x_star());
  std::vector<double> out(K + 1);
  for (int k = 0; k <= K; ++k) out[k] = 4.0 * p.L() * D * D / ((k + 1.0) * (k + 2.0));
  return out;
}

std::vector<double> envelope_measure(const Trace& t) {
  std::vector<double> out;
  out.reserve(t.records.size());
  double running = std::numeric_limits<double>::infinity();
  for (const StepRecord& r : t.records) {
    if (is_operator_method(t.method)) {
      out.push_back(std::sqrt(r.norm_sq));
    } else if (t.method == Method::FGM) {
      running = std::min(running, r.norm_sq);
      out.push_back(running);
    } else {
      out.push_back(r.norm_sq);
    }
  }
  return out;
}

}  // namespace gradnorm
