#include "gradnorm/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

#include "gradnorm/errors.hpp"
#include "gradnorm/kvdoc.hpp"

namespace gradnorm {
namespace {

constexpr double kConsistencyTol = 1e-12;

void require_consistent(const ScliMethod& m) {
  double scale = 1.0;
  for (double c : m.c0.coeffs()) scale = std::max(scale, std::abs(c));
  if (consistency_check(m) > kConsistencyTol * scale) {
    throw InvalidArgument("method is not consistent: C_0(y) != 1 + N(y) y");
  }
}

void require_cocoercive(double eta, double alpha, double L) {
  if (!(L > 0.0)) throw InvalidArgument("L must be positive");
  if (!(eta >= 0.0 && eta <= L) || !(alpha >= 0.0)) {
    throw InvalidArgument("need 0 <= eta <= L and alpha >= 0");
  }
  if (eta * eta + alpha * alpha > L * eta * (1.0 + 1e-12) + 1e-300) {
    throw InvalidArgument("eta^2 + alpha^2 exceeds L eta; operator is not 1/L-cocoercive");
  }
}

// p(A) for A = [[eta, alpha], [-alpha, eta]] by Horner on 2x2 matrices.
Eigen::Matrix2d matrix_poly(const Polynomial& p, const Eigen::Matrix2d& A) {
  Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = acc * A + *it * Eigen::Matrix2d::Identity();
  }
  return acc;
}

double golden_max(const std::function<double(double)>& f, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

}  // namespace

ScliMethod method_to_scli(Method m, double param, int horizon, double L) {
  if (!(L > 0.0)) throw InvalidArgument("L must be positive");
  ScliMethod out;
  switch (m) {
    case Method::GDA:
    case Method::KM: {
      const double eta = m == Method::GDA ? param : GdaParams::from_km(param, L).eta;
      if (!(eta > 0.0)) throw InvalidArgument("step must be positive");
      out.c0 = Polynomial({1.0, -eta});
      out.n = Polynomial::constant(-eta);
      out.p = 1;
      return out;
    }
    case Method::Halpern: {
      if (horizon < 1) throw InvalidArgument("Halpern block needs horizon >= 1");
      // u_k = lambda_k u_0 + (1 - lambda_k)((1 - 2y/L) u_{k-1} - (2/L) b).
      const Polynomial step({1.0, -2.0 / L});
      Polynomial P = Polynomial::constant(1.0);
      Polynomial Q;
      for (int k = 1; k <= horizon; ++k) {
        const double lam = HalpernParams::lambda(k);
        P = Polynomial::constant(lam) + (1.0 - lam) * (step * P);
        Q = (1.0 - lam) * (step * Q - Polynomial::constant(2.0 / L));
      }
      out.c0 = P;
      out.n = Q;
      out.p = horizon;
      return out;
    }
    default:
      throw InvalidArgument("no stationary linear form for method " + method_name(m));
  }
}

double consistency_check(const ScliMethod& m) {
  const Polynomial rhs = Polynomial::constant(1.0) + m.n * Polynomial({0.0, 1.0});
  return max_coeff_diff(m.c0, rhs);
}

double eval_scli_norm(const ScliMethod& m, int K, double eta, double alpha, double L) {
  if (K < 0) throw InvalidArgument("K must be nonnegative");
  require_cocoercive(eta, alpha, L);
  require_consistent(m);
  const std::complex<double> z(eta, alpha);
  return std::abs(z) * std::pow(std::abs(m.c0(z)), K);
}

double simulate_scli_norm(const ScliMethod& m, int K, double eta, double alpha, double L,
                          double D) {
  if (K < 0) throw InvalidArgument("K must be nonnegative");
  require_cocoercive(eta, alpha, L);
  if (!(D > 0.0)) throw InvalidArgument("D must be positive");
  Eigen::Matrix2d A;
  A << eta, alpha, -alpha, eta;
  require_consistent(m);
  // Iterate in error coordinates e_k = u_k - u*. For a consistent method
  // C u* + N b = u* with b = -A u*, so e_k = C e_{k-1}; forming A u_K + b
  // directly would cancel to rounding level once the residual is small.
  const Eigen::Matrix2d C = matrix_poly(m.c0, A);
  Eigen::Vector2d e(-D, 0.0);
  for (int k = 0; k < K; ++k) e = C * e;
  return (A * e).norm() / D;
}

Polynomial real_part_on_curve(const Polynomial& c0, double L) {
  // (eta + i alpha)^j = R_j + i alpha S_j with alpha^2 = L eta - eta^2.
  const Polynomial eta({0.0, 1.0});
  const Polynomial alpha_sq({0.0, L, -1.0});
  Polynomial R = Polynomial::constant(1.0), S;
  Polynomial out;
  for (int j = 0; j <= c0.degree(); ++j) {
    out = out + c0.coeff(j) * R;
    const Polynomial Rn = eta * R - alpha_sq * S;
    S = R + eta * S;
    R = Rn;
  }
  return out;
}

HardInstanceSweep sweep_hard_instances(const ScliMethod& m, int K, double L, int grid_size,
                                       int threads) {
  if (grid_size < kMinSweepGrid) {
    throw InvalidArgument("sweep grid must have at least " + std::to_string(kMinSweepGrid) +
                          " points");
  }
  if (K < 1) throw InvalidArgument("K must be >= 1");
  if (!(L > 0.0)) throw InvalidArgument("L must be positive");
  require_consistent(m);

  HardInstanceSweep s;
  s.K = K;
  s.L = L;
  s.p = std::max(1, m.p);
  s.eta.resize(grid_size);
  s.alpha.resize(grid_size);
  s.ratio.resize(grid_size);
  const double lo = std::log(1e-6);
  for (int j = 0; j < grid_size; ++j) {
    const double t = static_cast<double>(j) / (grid_size - 1);
    s.eta[j] = j == grid_size - 1 ? L : L * std::exp(lo * (1.0 - t));
    s.alpha[j] = std::sqrt(std::max(0.0, L * s.eta[j] - s.eta[j] * s.eta[j]));
  }

  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, grid_size);
  std::vector<int> best(workers, -1);
  auto work = [&](int w) {
    const int begin = static_cast<int>(static_cast<long>(grid_size) * w / workers);
    const int end = static_cast<int>(static_cast<long>(grid_size) * (w + 1) / workers);
    for (int j = begin; j < end; ++j) {
      const std::complex<double> z(s.eta[j], s.alpha[j]);
      s.ratio[j] = std::abs(z) * std::pow(std::abs(m.c0(z)), K);
      if (best[w] < 0 || s.ratio[j] > s.ratio[best[w]]) best[w] = j;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (std::thread& t : pool) t.join();
  }
  int arg = -1;
  for (int w = 0; w < workers; ++w) {
    if (best[w] >= 0 && (arg < 0 || s.ratio[best[w]] > s.ratio[arg])) arg = best[w];
  }
  s.sup = s.ratio[arg];
  s.sup_eta = s.eta[arg];
  s.theorem_bound = L / (4.0 * s.p * std::sqrt(5.0 * K));
  s.margin = s.sup / s.theorem_bound;
  s.bound_satisfied = s.sup >= s.theorem_bound * (1.0 - kSweepGridSlack);
  return s;
}

void write_sweep_csv(const HardInstanceSweep& s, std::ostream& out) {
  out << "eta,alpha,ratio\n";
  for (std::size_t j = 0; j < s.eta.size(); ++j) {
    out << format_double(s.eta[j]) << ',' << format_double(s.alpha[j]) << ','
        << format_double(s.ratio[j]) << '\n';
  }
  out << "# sup=" << format_double(s.sup) << ", bound=" << format_double(s.theorem_bound)
      << ", margin=" << format_double(s.margin) << '\n';
}

PolySupResult poly_sup_check(const Polynomial& r, int k, double L) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  if (!(L > 0.0)) throw InvalidArgument("L must be positive");
  if (std::abs(r(0.0) - 1.0) > 1e-12) throw InvalidArgument("polynomial must satisfy r(0) = 1");
  PolySupResult res;
  res.p = std::max(1, r.degree());
  res.bound = L / (40.0 * res.p * res.p * k);

  auto f = [&](double y) { return y * std::pow(std::abs(r(y)), k); };
  constexpr int kGrid = 10000;
  const double lo = std::log(L / (20.0 * res.p * res.p * k) * 1e-2);
  const double hi = std::log(L);
  std::vector<double> ys(kGrid), vals(kGrid);
  for (int j = 0; j < kGrid; ++j) {
    ys[j] = j == kGrid - 1 ? L : std::exp(lo + (hi - lo) * j / (kGrid - 1));
    vals[j] = f(ys[j]);
  }
  std::vector<int> order(kGrid);
  for (int j = 0; j < kGrid; ++j) order[j] = j;
  std::partial_sort(order.begin(), order.begin() + 3, order.end(),
                    [&](int a, int b) { return vals[a] > vals[b] || (vals[a] == vals[b] && a < b); });

  res.sup = vals[order[0]];
  res.argmax = ys[order[0]];
  for (int i = 0; i < 3; ++i) {
    const int j = order[i];
    const double a = ys[std::max(0, j - 1)];
    const double b = ys[std::min(kGrid - 1, j + 1)];
    const double y = golden_max(f, a, b);
    const double v = f(y);
    if (v > res.sup) {
      res.sup = v;
      res.argmax = y;
    }
  }
  res.satisfied = res.sup > res.bound;
  return res;
}

}  // namespace gradnorm
