#include "gradnorm/methods.hpp"

#include <cmath>

#include "gradnorm/errors.hpp"

namespace gradnorm {

std::string method_name(Method m) {
  switch (m) {
    case Method::GD: return "gd";
    case Method::FGM: return "fgm";
    case Method::OGMG: return "ogmg";
    case Method::FgmThenOgmg: return "fgm_then_ogmg";
    case Method::GDA: return "gda";
    case Method::KM: return "km";
    case Method::Halpern: return "halpern";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::GD, Method::FGM, Method::OGMG, Method::FgmThenOgmg, Method::GDA,
                   Method::KM, Method::Halpern}) {
    if (method_name(m) == name) return m;
  }
  throw InvalidArgument("unknown method '" + name + "'");
}

bool is_operator_method(Method m) {
  return m == Method::GDA || m == Method::KM || m == Method::Halpern;
}

namespace {

void require_finite(int k, const Vec& v, const char* what) {
  if (!v.allFinite()) throw NumericFault(k, what);
}

void require_finite(int k, double v, const char* what) {
  if (!std::isfinite(v)) throw NumericFault(k, what);
}

void check_start(int dim, const Vec& x0, int K) {
  if (K < 1) throw InvalidArgument("horizon K must be >= 1");
  if (x0.size() != dim) throw InvalidArgument("initial point has wrong dimension");
  if (!x0.allFinite()) throw InvalidArgument("initial point is not finite");
}

// Evaluates gradient and value at x and appends the record.
StepRecord& record_smooth(Trace& t, const SmoothProblem& p, int k, const Vec& x) {
  StepRecord r;
  r.k = k;
  r.point = x;
  r.oracle = p.gradient(x);
  ++t.oracle_calls;
  require_finite(k, r.oracle, "gradient");
  r.value = p.value(x);
  ++t.value_calls;
  require_finite(k, *r.value, "value");
  r.norm_sq = r.oracle.squaredNorm();
  t.records.push_back(std::move(r));
  return t.records.back();
}

StepRecord& record_operator(Trace& t, int k, const Vec& u, Vec Fu) {
  require_finite(k, Fu, "operator");
  StepRecord r;
  r.k = k;
  r.point = u;
  r.oracle = std::move(Fu);
  r.norm_sq = r.oracle.squaredNorm();
  ++t.oracle_calls;
  t.records.push_back(std::move(r));
  return t.records.back();
}

bool should_stop(const RunOptions& opts, const StepRecord& r) {
  return opts.epsilon > 0.0 && std::sqrt(r.norm_sq) <= opts.epsilon;
}

void check_epsilon(const RunOptions& opts) {
  if (!(opts.epsilon >= 0.0)) throw InvalidArgument("epsilon must be >= 0");
}

// FGM steps 1..K appended to `t` starting from the record already at `base`.
void fgm_steps(Trace& t, const SmoothProblem& p, int base, int K, const FgmSchedule& s,
               const RunOptions& opts) {
  const double L = p.L();
  Vec v = t.records[base].point;
  t.records[base].v = v;
  for (int k = 1; k <= K; ++k) {
    const StepRecord& prev = t.records[base + k - 1];
    v -= (s.b[k - 1] / L) * prev.oracle;
    Vec x = (s.B[k - 1] / s.B[k]) * (prev.point - prev.oracle / L) + (s.b[k] / s.B[k]) * v;
    require_finite(base + k, x, "iterate");
    StepRecord& r = record_smooth(t, p, base + k, x);
    r.v = v;
    if (should_stop(opts, r)) {
      t.stopped_early = true;
      return;
    }
  }
}

// OGM-G steps 1..K appended after the record at `base`, which holds x_0 and its gradient.
void ogmg_steps(Trace& t, const SmoothProblem& p, int base, int K, const OgmgSchedule& s,
                int phase) {
  const double L = p.L();
  const auto& A = s.A;
  const auto& a = s.a;
  {
    StepRecord& r0 = t.records[base];
    r0.phase = phase;
    r0.y = Vec(r0.point - r0.oracle / L);
  }
  Vec v = t.records[base].point - (A[1] / (a[1] * L)) * t.records[base].oracle;
  Vec G = a[1] * t.records[base].oracle;
  t.records[base].v = v;
  t.records[base].g_acc = G;
  for (int k = 1; k < K; ++k) {
    const Vec y_prev = *t.records[base + k - 1].y;
    Vec x = (A[k] / A[k + 1]) * y_prev + (a[k + 1] / A[k + 1]) * v - G / (a[k + 1] * L);
    require_finite(base + k, x, "iterate");
    StepRecord& r = record_smooth(t, p, base + k, x);
    r.phase = phase;
    r.y = Vec(r.point - r.oracle / L);
    v -= (A[k + 1] / (a[k + 1] * L)) * r.oracle;
    G += a[k + 1] * r.oracle;
    r.v = v;
    r.g_acc = G;
  }
  const Vec xK = *t.records[base + K - 1].y - G / (A[K] * L);
  require_finite(base + K, xK, "iterate");
  StepRecord& r = record_smooth(t, p, base + K, xK);
  r.phase = phase;
  r.y = Vec(r.point - r.oracle / L);
}

void check_fgm_schedule(const SmoothProblem& p, int K, const FgmSchedule& s) {
  if (s.K != K) {
    throw InvalidArgument("FGM schedule horizon " + std::to_string(s.K) + " does not match K = " +
                          std::to_string(K));
  }
  if (s.L != p.L()) throw InvalidArgument("FGM schedule L does not match the problem");
  const std::size_t n = static_cast<std::size_t>(K) + 1;
  if (s.B.size() != n || s.b.size() != n || s.a.size() != n) {
    throw InvalidArgument("FGM schedule arrays must have K+1 entries");
  }
  for (double B : s.B) {
    if (!(B > 0.0)) throw InvalidArgument("FGM schedule needs B_k > 0");
  }
}

}  // namespace

Trace run_gd(const SmoothProblem& p, const Vec& x0, int K, const RunOptions& opts) {
  check_start(p.dimension(), x0, K);
  check_epsilon(opts);
  Trace t;
  t.method = Method::GD;
  t.horizon = K;
  t.L = p.L();
  t.step = 1.0 / p.L();
  t.records.reserve(K + 1);
  if (should_stop(opts, record_smooth(t, p, 0, x0))) {
    t.stopped_early = true;
    return t;
  }
  for (int k = 1; k <= K; ++k) {
    const StepRecord& prev = t.records.back();
    Vec x = prev.point - prev.oracle / p.L();
    require_finite(k, x, "iterate");
    if (should_stop(opts, record_smooth(t, p, k, x))) {
      t.stopped_early = true;
      break;
    }
  }
  return t;
}

Trace run_fgm(const SmoothProblem& p, const Vec& x0, int K, const FgmSchedule& s,
              const RunOptions& opts) {
  check_start(p.dimension(), x0, K);
  check_epsilon(opts);
  check_fgm_schedule(p, K, s);
  Trace t;
  t.method = Method::FGM;
  t.horizon = K;
  t.L = p.L();
  t.fgm = s;
  t.records.reserve(K + 1);
  if (should_stop(opts, record_smooth(t, p, 0, x0))) {
    t.records[0].v = x0;
    t.stopped_early = true;
    return t;
  }
  fgm_steps(t, p, 0, K, s, opts);
  return t;
}

Trace run_fgm(const SmoothProblem& p, const Vec& x0, int K, const RunOptions& opts) {
  return run_fgm(p, x0, K, fgm_schedule(K, 1.0, p.L()), opts);
}

Trace run_ogmg(const SmoothProblem& p, const Vec& x0, int K, const OgmgSchedule& s) {
  check_start(p.dimension(), x0, K);
  if (s.K != K) {
    throw InvalidArgument("OGM-G schedule horizon " + std::to_string(s.K) +
                          " does not match K = " + std::to_string(K) +
                          "; OGM-G cannot be run past its fixed horizon");
  }
  Trace t;
  t.method = Method::OGMG;
  t.horizon = K;
  t.L = p.L();
  t.ogmg = s;
  t.records.reserve(K + 1);
  record_smooth(t, p, 0, x0);
  ogmg_steps(t, p, 0, K, s, 0);
  return t;
}

Trace run_ogmg(const SmoothProblem& p, const Vec& x0, int K) {
  if (K < 1) throw InvalidArgument("horizon K must be >= 1");
  return run_ogmg(p, x0, K, ogmg_schedule(K));
}

Trace run_fgm_then_ogmg(const SmoothProblem& p, const Vec& x0, int K) {
  if (K < 2) throw InvalidArgument("fgm_then_ogmg needs K >= 2");
  check_start(p.dimension(), x0, K);
  const int m = K / 2;
  const int n = K - m;
  Trace t;
  t.method = Method::FgmThenOgmg;
  t.horizon = K;
  t.L = p.L();
  t.phase_split = m;
  t.fgm = fgm_schedule(m, 1.0, p.L());
  t.ogmg = ogmg_schedule(n);
  t.records.reserve(K + 1);
  record_smooth(t, p, 0, x0);
  fgm_steps(t, p, 0, m, *t.fgm, {});
  // The junction iterate is x_0 of the OGM-G phase; its gradient is reused.
  ogmg_steps(t, p, m, n, *t.ogmg, 1);
  return t;
}

Trace run_gda(const OperatorProblem& p, const Vec& u0, int K, const GdaParams& params,
              const RunOptions& opts) {
  check_start(p.dimension(), u0, K);
  check_epsilon(opts);
  const double eta = params.eta;
  if (!(eta > 0.0) || !(eta < 2.0 / p.L())) {
    throw InvalidArgument("GDA step must lie in (0, 2/L)");
  }
  Trace t;
  t.method = Method::GDA;
  t.horizon = K;
  t.L = p.L();
  t.step = eta;
  t.records.reserve(K + 1);
  if (should_stop(opts, record_operator(t, 0, u0, p.apply(u0)))) {
    t.stopped_early = true;
    return t;
  }
  for (int k = 1; k <= K; ++k) {
    const StepRecord& prev = t.records.back();
    Vec u = prev.point - eta * prev.oracle;
    require_finite(k, u, "iterate");
    if (should_stop(opts, record_operator(t, k, u, p.apply(u)))) {
      t.stopped_early = true;
      break;
    }
  }
  return t;
}

NonexpansiveMap NonexpansiveMap::from_operator(const OperatorProblem& p) {
  NonexpansiveMap m;
  m.dim_ = p.dimension();
  m.op_ = p;
  const double s = 2.0 / p.L();
  m.T_ = [p, s](const Vec& u) -> Vec { return u - s * p.apply(u); };
  return m;
}

NonexpansiveMap NonexpansiveMap::custom(int dimension, std::function<Vec(const Vec&)> T) {
  if (dimension < 1) throw InvalidArgument("map dimension must be positive");
  if (!T) throw InvalidArgument("map must be set");
  NonexpansiveMap m;
  m.dim_ = dimension;
  m.T_ = std::move(T);
  return m;
}

Vec NonexpansiveMap::apply(const Vec& u) const {
  if (u.size() != dim_) throw InvalidArgument("point has wrong dimension for map");
  return T_(u);
}

Trace run_km(const NonexpansiveMap& T, const Vec& u0, int K, const std::vector<double>& alpha,
             const RunOptions& opts) {
  check_start(T.dimension(), u0, K);
  check_epsilon(opts);
  if (alpha.size() != 1 && alpha.size() != static_cast<std::size_t>(K)) {
    throw InvalidArgument("KM weights must be a single value or K values");
  }
  for (double a : alpha) {
    if (!(a > 0.0) || !(a < 1.0)) throw InvalidArgument("KM weights must lie in (0, 1)");
  }
  const OperatorProblem* op = T.op();
  Trace t;
  t.method = Method::KM;
  t.horizon = K;
  t.L = op ? op->L() : 1.0;
  t.step = alpha.size() == 1 ? alpha[0] : 0.0;
  t.records.reserve(K + 1);

  // Operator-backed maps record F(u); generic maps record the residual u - T(u).
  auto oracle = [&](const Vec& u) -> Vec { return op ? op->apply(u) : Vec(u - T.apply(u)); };
  if (should_stop(opts, record_operator(t, 0, u0, oracle(u0)))) {
    t.stopped_early = true;
    return t;
  }
  for (int k = 1; k <= K; ++k) {
    const double a = alpha.size() == 1 ? alpha[0] : alpha[k - 1];
    const StepRecord& prev = t.records.back();
    Vec u;
    if (op) {
      const double eta = a * (2.0 / op->L());
      u = prev.point - eta * prev.oracle;
    } else {
      u = prev.point - a * prev.oracle;
    }
    require_finite(k, u, "iterate");
    if (should_stop(opts, record_operator(t, k, u, oracle(u)))) {
      t.stopped_early = true;
      break;
    }
  }
  return t;
}

Trace run_km(const NonexpansiveMap& T, const Vec& u0, int K, double alpha, const RunOptions& opts) {
  return run_km(T, u0, K, std::vector<double>{alpha}, opts);
}

Trace run_halpern(const OperatorProblem& p, const Vec& u0, int K, const RunOptions& opts) {
  check_start(p.dimension(), u0, K);
  check_epsilon(opts);
  const double L = p.L();
  Trace t;
  t.method = Method::Halpern;
  t.horizon = K;
  t.L = L;
  t.records.reserve(K + 1);
  if (should_stop(opts, record_operator(t, 0, u0, p.apply(u0)))) {
    t.stopped_early = true;
    return t;
  }
  for (int k = 1; k <= K; ++k) {
    const StepRecord& prev = t.records.back();
    const double lam = HalpernParams::lambda(k);
    Vec u = lam * u0 + (1.0 - lam) * (prev.point - (2.0 / L) * prev.oracle);
    require_finite(k, u, "iterate");
    if (should_stop(opts, record_operator(t, k, u, p.apply(u)))) {
      t.stopped_early = true;
      break;
    }
  }
  return t;
}

std::vector<Vec> ogmg_beta_form(const Trace& t, const BetaTable& beta) {
  if (t.method != Method::OGMG || !t.ogmg) throw MethodMismatch("beta form needs an OGM-G trace");
  const int K = t.horizon;
  if (beta.K() != K) throw InvalidArgument("beta table horizon does not match trace");
  const auto& A = t.ogmg->A;
  const auto& a = t.ogmg->a;
  const double L = t.L;
  const Vec& x0 = t.records[0].point;
  std::vector<Vec> xs;
  xs.push_back(x0);
  for (int k = 1; k < K; ++k) {
    Vec acc = Vec::Zero(x0.size());
    for (int j = 0; j < k; ++j) acc += beta(j, k) * t.records[j].oracle;
    xs.push_back(x0 - acc / L);
  }
  // x_K = y_{K-1} - (1/(L A_K)) sum_k a_{k+1} g_k
  Vec acc = Vec::Zero(x0.size());
  for (int j = 0; j < K; ++j) acc += (beta(j, K - 1) + a[j + 1] / A[K]) * t.records[j].oracle;
  xs.push_back(x0 - acc / L);
  return xs;
}

SmoothProblem with_reference_optimum(const SmoothProblem& p, const Vec& x0, int max_iters) {
  if (x0.size() != p.dimension()) throw InvalidArgument("initial point has wrong dimension");
  const double L = p.L();
  const double target = 1e-12 * L * std::max(x0.norm(), 1.0);
  double B = 1.0, b = 1.0;
  Vec x = x0, v = x0;
  Vec g = p.gradient(x);
  for (int k = 1; k <= max_iters && g.norm() > target; ++k) {
    v -= (b / L) * g;
    const double bn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * B));
    const double Bn = B + bn;
    x = (B / Bn) * (x - g / L) + (bn / Bn) * v;
    B = Bn;
    b = bn;
    g = p.gradient(x);
    require_finite(k, g, "gradient");
  }
  if (g.norm() > target) {
    throw Error("reference solve did not reach ||grad|| <= " + format_double(target) + " in " +
                std::to_string(max_iters) + " iterations");
  }
  return p.with_optimum(x, p.value(x));
}

}  // namespace gradnorm
