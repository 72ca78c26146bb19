#include "gradnorm/problems.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "gradnorm/errors.hpp"

namespace gradnorm {

SmoothProblem::SmoothProblem(std::string kind, int dimension, double L, ValueFn value,
                             GradFn gradient, KvDoc params)
    : kind_(std::move(kind)),
      dim_(dimension),
      L_(L),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      params_(std::move(params)) {
  if (dim_ < 1) throw InvalidArgument("dimension must be positive");
  if (!(L_ > 0.0) || !std::isfinite(L_)) throw InvalidArgument("L must be positive and finite");
  if (!value_ || !gradient_) throw InvalidArgument("oracles must be set");
}

void SmoothProblem::check_dim(const Vec& x) const {
  if (x.size() != dim_) {
    throw InvalidArgument("point has dimension " + std::to_string(x.size()) + ", problem has " +
                          std::to_string(dim_));
  }
}

double SmoothProblem::value(const Vec& x) const {
  check_dim(x);
  return value_(x);
}

Vec SmoothProblem::gradient(const Vec& x) const {
  check_dim(x);
  Vec g = gradient_(x);
  if (g.size() != dim_) throw InvalidArgument("gradient oracle returned wrong dimension");
  return g;
}

const Vec& SmoothProblem::x_star() const {
  if (!x_star_) throw MissingOptimum("problem '" + kind_ + "' has no known optimum");
  return *x_star_;
}

double SmoothProblem::f_star() const {
  if (!x_star_) throw MissingOptimum("problem '" + kind_ + "' has no known optimum");
  return f_star_;
}

SmoothProblem SmoothProblem::with_optimum(Vec x_star, double f_star) const {
  check_dim(x_star);
  SmoothProblem out = *this;
  out.x_star_ = std::move(x_star);
  out.f_star_ = f_star;
  return out;
}

KvDoc SmoothProblem::to_doc() const {
  if (!serializable()) throw InvalidArgument("custom problems cannot be serialized");
  KvDoc doc;
  doc.set("kind", kind_);
  doc.set_int("dimension", dim_);
  doc.set_double("L", L_);
  for (const auto& k : params_.keys()) doc.set(k, params_.get(k));
  if (x_star_) {
    doc.set_vector("x_star", *x_star_);
    doc.set_double("f_star", f_star_);
  }
  return doc;
}

OperatorProblem::OperatorProblem(std::string kind, int dimension, double L, OpFn op,
                                 KvDoc params)
    : kind_(std::move(kind)), dim_(dimension), L_(L), op_(std::move(op)), params_(std::move(params)) {
  if (dim_ < 1) throw InvalidArgument("dimension must be positive");
  if (!(L_ > 0.0) || !std::isfinite(L_)) throw InvalidArgument("L must be positive and finite");
  if (!op_) throw InvalidArgument("operator oracle must be set");
}

Vec OperatorProblem::apply(const Vec& u) const {
  if (u.size() != dim_) {
    throw InvalidArgument("point has dimension " + std::to_string(u.size()) + ", problem has " +
                          std::to_string(dim_));
  }
  Vec f = op_(u);
  if (f.size() != dim_) throw InvalidArgument("operator oracle returned wrong dimension");
  return f;
}

const Vec& OperatorProblem::u_star() const {
  if (!u_star_) throw MissingOptimum("operator '" + kind_ + "' has no known zero");
  return *u_star_;
}

OperatorProblem OperatorProblem::with_zero(Vec u_star) const {
  if (u_star.size() != dim_) throw InvalidArgument("zero point has wrong dimension");
  OperatorProblem out = *this;
  out.u_star_ = std::move(u_star);
  return out;
}

KvDoc OperatorProblem::to_doc() const {
  if (!serializable()) throw InvalidArgument("custom operators cannot be serialized");
  KvDoc doc;
  doc.set("kind", kind_);
  doc.set_int("dimension", dim_);
  doc.set_double("L", L_);
  for (const auto& k : params_.keys()) doc.set(k, params_.get(k));
  if (u_star_) doc.set_vector("u_star", *u_star_);
  return doc;
}

SmoothProblem make_quadratic(const Mat& Q, const Vec& c, double L) {
  const auto d = Q.rows();
  if (Q.cols() != d || c.size() != d || d == 0) {
    throw InvalidArgument("make_quadratic: Q must be square and match c");
  }
  if (!(L > 0.0)) throw InvalidArgument("make_quadratic: L must be positive");
  const double qn = std::max(1.0, Q.cwiseAbs().maxCoeff());
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * qn) {
    throw InvalidArgument("make_quadratic: Q is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(Q);
  const Vec& lam = eig.eigenvalues();
  const double lmax = lam.maxCoeff();
  const double lmin = lam.minCoeff();
  if (lmax > L * (1.0 + kSpectralTol)) {
    throw InvalidArgument("make_quadratic: spectral bound " + format_double(lmax) + " exceeds L = " +
                          format_double(L));
  }
  if (lmin < -kSpectralTol * L) {
    throw InvalidArgument("make_quadratic: Q is not positive semidefinite (min eigenvalue " +
                          format_double(lmin) + ")");
  }

  // Pseudo-inverse solve; for singular Q, c must lie in range(Q).
  const Mat& U = eig.eigenvectors();
  const Vec w = U.transpose() * c;
  Vec z = Vec::Zero(d);
  const double cut = kSpectralTol * L;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (lam[i] > cut) {
      z[i] = -w[i] / lam[i];
    } else if (std::abs(w[i]) > 1e-10 * (1.0 + c.norm())) {
      throw InvalidArgument("make_quadratic: c is not in range(Q); f is unbounded below");
    }
  }
  Vec xs = U * z;

  auto Qp = std::make_shared<const Mat>(Q);
  auto cp = std::make_shared<const Vec>(c);
  KvDoc params;
  params.set_matrix("Q", Q);
  params.set_vector("c", c);
  SmoothProblem p(
      "quadratic", static_cast<int>(d), L,
      [Qp, cp](const Vec& x) { return 0.5 * x.dot(*Qp * x) + cp->dot(x); },
      [Qp, cp](const Vec& x) -> Vec { return *Qp * x + *cp; }, params);
  const double fs = 0.5 * c.dot(xs);
  return p.with_optimum(std::move(xs), fs);
}

SmoothProblem make_logsumexp(const Mat& rows, double rho, std::optional<double> L) {
  if (rows.rows() < 1 || rows.cols() < 1) throw InvalidArgument("make_logsumexp: rows is empty");
  if (!(rho > 0.0)) throw InvalidArgument("make_logsumexp: rho must be positive");
  double Lv;
  if (L) {
    if (!(*L > 0.0)) throw InvalidArgument("make_logsumexp: L must be positive");
    Lv = *L;
  } else {
    Vec v = Vec::Ones(rows.cols()).normalized();
    double est = 0.0;
    for (int it = 0; it < 50; ++it) {
      Vec w = rows.transpose() * (rows * v);
      est = v.dot(w);
      const double n = w.norm();
      if (n == 0.0) break;
      v = w / n;
    }
    // Power iteration stalls on an all-ones start orthogonal to the top
    // eigenvector; the Frobenius norm is then the only safe fallback.
    if (est <= 0.0) est = rows.squaredNorm();
    Lv = 1.01 * est / rho;
  }

  auto R = std::make_shared<const Mat>(rows);
  KvDoc params;
  params.set_matrix("rows", rows);
  params.set_double("rho", rho);
  return SmoothProblem(
      "logsumexp", static_cast<int>(rows.cols()), Lv,
      [R, rho](const Vec& x) {
        const Vec z = (*R * x) / rho;
        const double m = z.maxCoeff();
        return rho * (m + std::log((z.array() - m).exp().sum()));
      },
      [R, rho](const Vec& x) -> Vec {
        const Vec z = (*R * x) / rho;
        Vec p = (z.array() - z.maxCoeff()).exp();
        p /= p.sum();
        return R->transpose() * p;
      },
      params);
}

SmoothProblem make_huber(const Vec& center, double delta) {
  if (center.size() < 1) throw InvalidArgument("make_huber: empty center");
  if (!(delta > 0.0)) throw InvalidArgument("make_huber: delta must be positive");
  KvDoc params;
  params.set_vector("center", center);
  params.set_double("delta", delta);
  const Vec c = center;
  SmoothProblem p(
      "huber", static_cast<int>(center.size()), 1.0 / delta,
      [c, delta](const Vec& x) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
          const double t = std::abs(x[i] - c[i]);
          s += t <= delta ? 0.5 * t * t / delta : t - 0.5 * delta;
        }
        return s;
      },
      [c, delta](const Vec& x) -> Vec {
        Vec g(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
          g[i] = std::clamp((x[i] - c[i]) / delta, -1.0, 1.0);
        }
        return g;
      },
      params);
  return p.with_optimum(center, 0.0);
}

SmoothProblem make_custom_smooth(int dimension, double L, SmoothProblem::ValueFn value,
                                 SmoothProblem::GradFn gradient) {
  return SmoothProblem("custom", dimension, L, std::move(value), std::move(gradient));
}

namespace {

void check_rotation_params(double eta, double alpha, double L) {
  if (!(L > 0.0)) throw InvalidArgument("rotation operator: L must be positive");
  if (!(eta >= 0.0) || eta > L * (1.0 + kSpectralTol)) {
    throw InvalidArgument("rotation operator: eta must lie in [0, L]");
  }
  if (!(alpha >= 0.0)) throw InvalidArgument("rotation operator: alpha must be nonnegative");
  if (alpha * alpha > L * eta - eta * eta + kSpectralTol * L * L) {
    throw InvalidArgument("rotation operator: alpha^2 > L*eta - eta^2, operator is not " +
                          std::string("1/L-cocoercive"));
  }
}

std::optional<Vec> rotation_zero(double eta, double alpha, const Vec& b) {
  const auto h = b.size() / 2;
  const double det = eta * eta + alpha * alpha;
  if (det == 0.0) {
    if (b.isZero(0.0)) return Vec::Zero(b.size());
    return std::nullopt;
  }
  const auto b1 = b.head(h), b2 = b.tail(h);
  Vec u(b.size());
  u.head(h) = -(eta * b1 - alpha * b2) / det;
  u.tail(h) = -(alpha * b1 + eta * b2) / det;
  return u;
}

}  // namespace

OperatorProblem make_rotation_operator(const LinearOperatorSpec& spec, double L) {
  if (spec.b.size() < 2 || spec.b.size() % 2 != 0) {
    throw InvalidArgument("rotation operator: b must have positive even length");
  }
  check_rotation_params(spec.eta, spec.alpha, L);
  const auto h = spec.b.size() / 2;
  const double eta = spec.eta, alpha = spec.alpha;
  const Vec b = spec.b;
  KvDoc params;
  params.set_double("eta", eta);
  params.set_double("alpha", alpha);
  params.set_vector("b", b);
  OperatorProblem p("rotation", static_cast<int>(b.size()), L,
                    [eta, alpha, b, h](const Vec& u) -> Vec {
                      Vec f(u.size());
                      f.head(h) = eta * u.head(h) + alpha * u.tail(h) + b.head(h);
                      f.tail(h) = -alpha * u.head(h) + eta * u.tail(h) + b.tail(h);
                      return f;
                    },
                    params);
  if (auto z = rotation_zero(eta, alpha, b)) return p.with_zero(std::move(*z));
  return p;
}

OperatorProblem make_saddle_quadratic(double eta, double alpha, const Vec& b1, const Vec& b2,
                                      double L) {
  if (b1.size() < 1 || b1.size() != b2.size()) {
    throw InvalidArgument("saddle quadratic: b1 and b2 must have equal positive length");
  }
  check_rotation_params(eta, alpha, L);
  const auto h = b1.size();
  KvDoc params;
  params.set_double("eta", eta);
  params.set_double("alpha", alpha);
  params.set_vector("b1", b1);
  params.set_vector("b2", b2);
  OperatorProblem p("saddle_quadratic", static_cast<int>(2 * h), L,
                    [eta, alpha, b1, b2, h](const Vec& u) -> Vec {
                      const auto x = u.head(h);
                      const auto y = u.tail(h);
                      Vec f(u.size());
                      // grad_x phi = eta x + alpha y + b1
                      f.head(h) = eta * x + alpha * y + b1;
                      // -grad_y phi = -(-eta y + alpha x - b2)
                      f.tail(h) = -alpha * x + eta * y + b2;
                      return f;
                    },
                    params);
  Vec b(2 * h);
  b << b1, b2;
  if (auto z = rotation_zero(eta, alpha, b)) return p.with_zero(std::move(*z));
  return p;
}

OperatorProblem gradient_as_operator(const SmoothProblem& p) {
  KvDoc params;
  if (p.serializable()) params.merge(p.to_doc(), "smooth.");
  OperatorProblem op(p.serializable() ? "gradient" : "custom", p.dimension(), p.L(),
                     [p](const Vec& u) { return p.gradient(u); }, params);
  if (p.has_optimum()) return op.with_zero(p.x_star());
  return op;
}

OperatorProblem make_custom_operator(int dimension, double L, OperatorProblem::OpFn op) {
  return OperatorProblem("custom", dimension, L, std::move(op));
}

bool is_operator_kind(const std::string& kind) {
  return kind == "rotation" || kind == "saddle_quadratic" || kind == "gradient";
}

SmoothProblem smooth_problem_from_doc(const KvDoc& doc) {
  const std::string kind = doc.get("kind");
  SmoothProblem p = [&]() {
    if (kind == "quadratic") {
      doc.require_known({"kind", "dimension", "L", "Q", "c", "x_star", "f_star"});
      return make_quadratic(doc.get_matrix("Q"), doc.get_vector("c"), doc.get_double("L"));
    }
    if (kind == "logsumexp") {
      doc.require_known({"kind", "dimension", "L", "rows", "rho", "x_star", "f_star"});
      std::optional<double> L;
      if (doc.has("L")) L = doc.get_double("L");
      return make_logsumexp(doc.get_matrix("rows"), doc.get_double("rho"), L);
    }
    if (kind == "huber") {
      doc.require_known({"kind", "dimension", "L", "center", "delta", "x_star", "f_star"});
      return make_huber(doc.get_vector("center"), doc.get_double("delta"));
    }
    throw ParseError("unknown smooth problem kind '" + kind + "'");
  }();
  if (doc.has("dimension") && doc.get_int("dimension") != p.dimension()) {
    throw ParseError("dimension does not match problem data");
  }
  if (doc.has("x_star") && kind == "logsumexp") {
    if (!doc.has("f_star")) throw ParseError("x_star given without f_star");
    p = p.with_optimum(doc.get_vector("x_star"), doc.get_double("f_star"));
  }
  return p;
}

OperatorProblem operator_problem_from_doc(const KvDoc& doc) {
  const std::string kind = doc.get("kind");
  if (kind == "rotation") {
    doc.require_known({"kind", "dimension", "L", "eta", "alpha", "b", "u_star"});
    LinearOperatorSpec s{doc.get_double("eta"), doc.get_double("alpha"), doc.get_vector("b")};
    return make_rotation_operator(s, doc.get_double("L"));
  }
  if (kind == "saddle_quadratic") {
    doc.require_known({"kind", "dimension", "L", "eta", "alpha", "b1", "b2", "u_star"});
    return make_saddle_quadratic(doc.get_double("eta"), doc.get_double("alpha"),
                                 doc.get_vector("b1"), doc.get_vector("b2"), doc.get_double("L"));
  }
  if (kind == "gradient") {
    doc.require_known({"kind", "dimension", "L", "smooth.", "u_star"});
    return gradient_as_operator(smooth_problem_from_doc(doc.sub("smooth.")));
  }
  throw ParseError("unknown operator kind '" + kind + "'");
}

const VerifierCheck& VerifierReport::at(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw InvalidArgument("verifier report has no check '" + name + "'");
}

namespace {

constexpr double kTiny = 1e-300;

class PairSampler {
 public:
  PairSampler(int d, double radius, std::uint64_t seed) : d_(d), radius_(radius), rng_(seed) {}

  Vec point() {
    Vec v(d_);
    for (int i = 0; i < d_; ++i) v[i] = normal_(rng_);
    const double n = v.norm();
    // Uniform in the ball: direction times radius * U^(1/d).
    const double r = radius_ * std::pow(unif_(rng_), 1.0 / d_);
    return n > 0 ? Vec(v * (r / n)) : v;
  }

  // Even draws are independent pairs; odd draws are close pairs, which probe
  // the local curvature where the inequalities are tightest.
  std::pair<Vec, Vec> pair(int i) {
    Vec x = point();
    if (i % 2 == 0) return {x, point()};
    Vec dir = point();
    const double scale = std::pow(10.0, -1.0 - 4.0 * unif_(rng_));
    return {x, x + scale * dir};
  }

 private:
  int d_;
  double radius_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

void finish(VerifierReport& r) {
  r.passed = true;
  for (auto& c : r.checks) {
    c.passed = c.worst_violation <= r.tol;
    r.passed = r.passed && c.passed;
  }
}

}  // namespace

VerifierReport verify_smooth_convex(const SmoothProblem& p, int n_samples, double radius,
                                    std::uint64_t seed, double tol) {
  if (n_samples < 1) throw InvalidArgument("verify_smooth_convex: n_samples must be >= 1");
  const double L = p.L();
  VerifierCheck eq3{"cocoercive_gap", -INFINITY, 0, true};
  VerifierCheck eq2{"smoothness_upper", -INFINITY, 0, true};
  VerifierCheck lip{"lipschitz_gradient", -INFINITY, 0, true};
  PairSampler s(p.dimension(), radius, seed);
  for (int i = 0; i < n_samples; ++i) {
    auto [x, y] = s.pair(i);
    const double fx = p.value(x), fy = p.value(y);
    const Vec gx = p.gradient(x), gy = p.gradient(y);
    const Vec dxy = y - x;
    const double lin = gx.dot(dxy);
    const double fscale = std::abs(fx) + std::abs(fy) + std::abs(lin);

    // (1/2L)|gy - gx|^2 <= f(y) - f(x) - <gx, y - x>
    const double lhs3 = (gy - gx).squaredNorm() / (2.0 * L);
    const double rhs3 = fy - fx - lin;
    eq3.worst_violation = std::max(eq3.worst_violation, (lhs3 - rhs3) / (lhs3 + fscale + kTiny));

    // f(y) <= f(x) + <gx, y - x> + (L/2)|y - x|^2
    const double quad = 0.5 * L * dxy.squaredNorm();
    eq2.worst_violation =
        std::max(eq2.worst_violation, (rhs3 - quad) / (quad + fscale + kTiny));

    const double gd = (gy - gx).norm(), bound = L * dxy.norm();
    lip.worst_violation = std::max(lip.worst_violation, (gd - bound) / (bound + kTiny));
    eq3.samples = eq2.samples = lip.samples = i + 1;
  }
  VerifierReport r;
  r.tol = tol;
  r.checks = {eq3, eq2, lip};
  if (p.has_optimum()) {
    const Vec& xs = p.x_star();
    const double tol_zero = 1e-10 * L * (1.0 + xs.norm());
    const double gnorm = p.gradient(xs).norm();
    r.checks.push_back({"optimum_stationary", (gnorm - tol_zero) / tol_zero, 1, true});
    const double fs = p.value(xs);
    r.checks.push_back({"optimum_value", std::abs(fs - p.f_star()) / (1.0 + std::abs(fs)), 1, true});
  }
  finish(r);
  return r;
}

VerifierReport verify_cocoercive(const OperatorProblem& p, int n_samples, double radius,
                                 std::uint64_t seed, double tol) {
  if (n_samples < 1) throw InvalidArgument("verify_cocoercive: n_samples must be >= 1");
  const double L = p.L();
  VerifierCheck coco{"cocoercive", -INFINITY, 0, true};
  VerifierCheck mono{"monotone", -INFINITY, 0, true};
  VerifierCheck star{"star_gap", -INFINITY, 0, true};
  PairSampler s(p.dimension(), radius, seed);
  for (int i = 0; i < n_samples; ++i) {
    auto [u, v] = s.pair(i);
    const Vec fu = p.apply(u), fv = p.apply(v);
    const Vec df = fu - fv, du = u - v;
    const double inner = df.dot(du);
    const double sq = df.squaredNorm() / L;
    coco.worst_violation =
        std::max(coco.worst_violation, (sq - inner) / (sq + std::abs(inner) + kTiny));
    mono.worst_violation =
        std::max(mono.worst_violation, -inner / (df.norm() * du.norm() + kTiny));
    if (p.has_zero()) {
      const Vec& us = p.u_star();
      const double gap = fu.dot(u - us);
      const double nsq = fu.squaredNorm() / L;
      star.worst_violation =
          std::max(star.worst_violation, (nsq - gap) / (nsq + std::abs(gap) + kTiny));
      star.samples = i + 1;
    }
    coco.samples = mono.samples = i + 1;
  }
  VerifierReport r;
  r.tol = tol;
  r.checks = {coco, mono};
  if (p.has_zero()) {
    r.checks.push_back(star);
    const Vec& us = p.u_star();
    const double tol_zero = 1e-10 * L * (1.0 + us.norm());
    r.checks.push_back({"zero", (p.apply(us).norm() - tol_zero) / tol_zero, 1, true});
  }
  finish(r);
  return r;
}

}  // namespace gradnorm
