#include "gradnorm/schedules.hpp"

#include <algorithm>
#include <cmath>

#include "gradnorm/errors.hpp"

namespace gradnorm {

BetaTable::BetaTable(int K) : K_(K), data_(static_cast<std::size_t>(K) * (K + 1) / 2, 0.0) {
  if (K < 1) throw InvalidArgument("beta table needs K >= 1");
}

std::size_t BetaTable::index(int j, int k) const {
  if (j < 0 || k >= K_ || j > k) {
    throw InvalidArgument("beta index (" + std::to_string(j) + ", " + std::to_string(k) +
                          ") out of range");
  }
  return static_cast<std::size_t>(k) * (k + 1) / 2 + j;
}

FgmSchedule fgm_schedule(int K, double B0, double L) {
  if (K < 1) throw InvalidArgument("fgm_schedule: K must be >= 1");
  if (!(B0 > 0.0)) throw InvalidArgument("fgm_schedule: B0 must be positive");
  if (!(L > 0.0)) throw InvalidArgument("fgm_schedule: L must be positive");
  FgmSchedule s;
  s.K = K;
  s.L = L;
  s.B.resize(K + 1);
  s.b.resize(K + 1);
  s.a.resize(K + 1);
  s.B[0] = B0;
  s.b[0] = B0;
  for (int k = 1; k <= K; ++k) {
    // positive root of b^2 - b - B_{k-1} = 0
    s.b[k] = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * s.B[k - 1]));
    s.B[k] = s.B[k - 1] + s.b[k];
  }
  for (int k = 0; k <= K; ++k) s.a[k] = s.B[k] / (2.0 * L);
  return s;
}

OgmgSchedule ogmg_schedule(int K) {
  if (K < 1) throw InvalidArgument("ogmg_schedule: K must be >= 1");
  std::vector<double> A(K + 1);
  A[K] = 1.0;
  for (int k = K - 1; k >= 0; --k) {
    const double n = A[k + 1];
    A[k] = n * (1.0 + 0.5 * n - 0.5 * std::sqrt(n * (4.0 + n)));
  }
  return ogmg_schedule_from(std::move(A));
}

OgmgSchedule ogmg_schedule_from(std::vector<double> A) {
  if (A.size() < 2) throw InvalidArgument("OGM-G schedule needs at least A_0 and A_1");
  OgmgSchedule s;
  s.K = static_cast<int>(A.size()) - 1;
  s.a.resize(A.size());
  s.a[0] = A[0];
  for (std::size_t k = 1; k < A.size(); ++k) s.a[k] = A[k] - A[k - 1];
  s.A = std::move(A);
  return s;
}

BetaTable ogmg_betas(const OgmgSchedule& s) {
  const int K = s.K;
  if (K > kMaxBetaHorizon) {
    throw InvalidArgument("ogmg_betas: table is capped at K = " + std::to_string(kMaxBetaHorizon));
  }
  const auto& A = s.A;
  const auto& a = s.a;
  BetaTable beta(K);
  for (int j = 0; j < K; ++j) {
    const double cj = A[j + 1] / a[j + 1];
    beta(j, K - 1) = cj - a[j + 1] / A[K];
    // A_{k+1} beta_{j,k} = A_k beta_{j,k-1} + a_{k+1} c_j + a_{j+1} c_k, solved for beta_{j,k-1}
    for (int k = K - 1; k > j; --k) {
      const double ck = A[k + 1] / a[k + 1];
      beta(j, k - 1) = (A[k + 1] * beta(j, k) - a[k + 1] * cj - a[j + 1] * ck) / A[k];
    }
  }
  return beta;
}

namespace {

// c_j = beta_{j,K-1} + a_{j+1}/A_K for the table fixed by cond-2 and beta_{j,j} = 1.
std::vector<double> cond2_closure(const OgmgSchedule& s) {
  const int K = s.K;
  std::vector<double> c(K);
  double tail = 0.0;
  for (int j = K - 1; j >= 0; --j) {
    c[j] = 1.0 + (s.a[j + 1] / s.A[j + 1]) * (1.0 + tail);
    tail += c[j];
  }
  return c;
}

}  // namespace

BetaTable solve_betas(const OgmgSchedule& s) {
  const int K = s.K;
  if (K > kMaxBetaHorizon) {
    throw InvalidArgument("solve_betas: table is capped at K = " + std::to_string(kMaxBetaHorizon));
  }
  const auto c = cond2_closure(s);
  BetaTable beta(K);
  for (int j = 0; j < K; ++j) {
    double S = s.A[j + 1];
    beta(j, j) = 1.0;
    for (int k = j + 1; k < K; ++k) {
      S += s.a[k + 1] * c[j] + s.a[j + 1] * c[k];
      beta(j, k) = S / s.A[k + 1];
    }
  }
  return beta;
}

const ValidationItem& ValidationReport::at(const std::string& name) const {
  for (const auto& it : items) {
    if (it.name == name) return it;
  }
  throw InvalidArgument("validation report has no item '" + name + "'");
}

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  for (const auto& it : items) {
    if (it.applicable && !it.passed) out.push_back(it.name);
  }
  return out;
}

namespace {

void add(ValidationReport& r, std::string name, double residual, double tol) {
  ValidationItem it{std::move(name), residual, tol, true, residual <= tol};
  r.passed = r.passed && it.passed;
  r.items.push_back(std::move(it));
}

void skip(ValidationReport& r, std::string name) {
  r.items.push_back({std::move(name), 0.0, 0.0, false, true});
}

}  // namespace

ValidationReport validate_schedule(const FgmSchedule& s) {
  ValidationReport r;
  const int K = s.K;
  const std::size_t n = static_cast<std::size_t>(K) + 1;
  if (K < 1 || s.B.size() != n || s.b.size() != n || s.a.size() != n) {
    add(r, "shape", 1.0, 0.0);
    return r;
  }
  double nonpos = 0.0;
  for (int k = 0; k <= K; ++k) {
    if (!(s.B[k] > 0.0) || !(s.b[k] > 0.0) || !(s.a[k] > 0.0)) nonpos += 1.0;
  }
  add(r, "positive", nonpos, 0.0);
  add(r, "b0_equals_B0", std::abs(s.b[0] - s.B[0]) / s.B[0], 1e-15);

  double sums = 0.0, bsq = -INFINITY, aw = -INFINITY, growth = -INFINITY, gsum = -INFINITY;
  double total = 0.0;
  for (int k = 0; k <= K; ++k) {
    if (k >= 1) {
      sums = std::max(sums, std::abs(s.B[k] - s.B[k - 1] - s.b[k]) / std::abs(s.B[k]));
      bsq = std::max(bsq, (s.b[k] * s.b[k] - s.B[k]) / s.B[k]);
    }
    aw = std::max(aw, (s.a[k] - s.B[k] / (2.0 * s.L)) * 2.0 * s.L / s.B[k]);
    const double kk = k;
    growth = std::max(growth, ((kk + 1) * (kk + 2) / 4.0 - s.B[k]) / s.B[k]);
    total += s.B[k];
    gsum = std::max(gsum, ((kk + 1) * (kk + 2) * (kk + 3) / 12.0 - total) / total);
  }
  add(r, "partial_sums", sums, 1e-14);
  add(r, "b_squared_le_B", bsq, 1e-12);
  add(r, "a_le_B_over_2L", aw, 1e-14);
  add(r, "growth_B", growth, 1e-9);
  add(r, "growth_sum_B", gsum, 1e-9);
  return r;
}

ValidationReport validate_schedule(const OgmgSchedule& s) {
  ValidationReport r;
  const int K = s.K;
  const std::size_t n = static_cast<std::size_t>(K) + 1;
  if (K < 1 || s.A.size() != n || s.a.size() != n) {
    add(r, "shape", 1.0, 0.0);
    return r;
  }
  const auto& A = s.A;
  const auto& a = s.a;

  add(r, "terminal_one", std::abs(A[K] - 1.0), 1e-15);
  double nonpos = A[0] > 0.0 ? 0.0 : 1.0;
  for (int k = 1; k <= K; ++k) {
    if (!(a[k] > 0.0)) nonpos += 1.0;
  }
  add(r, "increasing", nonpos, 0.0);
  if (nonpos > 0.0) return r;  // the remaining residuals divide by a_k

  double rec = 0.0, rec1 = 0.0, lower = -INFINITY, growth = -INFINITY;
  for (int k = 0; k < K; ++k) {
    const double m = A[k + 1];
    const double want = m * (1.0 + 0.5 * m - 0.5 * std::sqrt(m * (4.0 + m)));
    rec = std::max(rec, std::abs(A[k] - want) / A[k]);
  }
  for (int k = 1; k <= K; ++k) {
    const double lhs = 1.0 / A[k - 1];
    rec1 = std::max(rec1, std::abs(lhs - 1.0 / A[k] - A[k] / a[k]) / lhs);
    growth = std::max(growth, (a[k] * a[k] / A[k] - A[K]) / A[K]);
  }
  for (int m = 0; m <= K; ++m) {
    const double bound = (m + 2.0) * (m + 2.0) / 4.0;
    lower = std::max(lower, (bound - A[K] / A[K - m]) / bound);
  }
  add(r, "recursion", rec, 1e-12);
  add(r, "recursive_1", rec1, 1e-12);
  add(r, "lower_bound_D", lower, 1e-12);
  add(r, "max_growth", growth, 0.0);
  add(r, "final_ratio", a[K] / A[K] - 0.5 * (std::sqrt(5.0) - 1.0), 1e-12);

  if (K > kMaxBetaHorizon) {
    for (const char* name : {"cond_1", "cond_2", "beta_diagonal", "beta_nonneg"}) skip(r, name);
    return r;
  }
  // cond-1 against the table that cond-2 alone determines for this A.
  const auto c = cond2_closure(s);
  double c1 = -INFINITY;
  for (int k = 0; k < K; ++k) {
    const double cap = A[k + 1] / a[k + 1];
    c1 = std::max(c1, (c[k] - cap) / cap);
  }
  add(r, "cond_1", c1, 1e-10);

  const BetaTable beta = ogmg_betas(s);
  double c2 = 0.0, diag = 0.0, neg = -INFINITY;
  for (int k = 0; k < K; ++k) {
    diag = std::max(diag, std::abs(beta(k, k) - 1.0));
    for (int j = 0; j <= k; ++j) neg = std::max(neg, -beta(j, k));
    const double ck = beta(k, K - 1) + a[k + 1] / A[K];
    for (int j = 0; j < k; ++j) {
      const double cj = beta(j, K - 1) + a[j + 1] / A[K];
      const double t1 = A[k + 1] * beta(j, k), t2 = A[k] * beta(j, k - 1);
      const double t3 = a[k + 1] * cj, t4 = a[j + 1] * ck;
      const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4);
      c2 = std::max(c2, std::abs(t1 - t2 - t3 - t4) / scale);
    }
  }
  add(r, "cond_2", c2, 1e-10);
  add(r, "beta_diagonal", diag, 1e-9);
  add(r, "beta_nonneg", neg, 1e-12);
  return r;
}

KvDoc schedule_to_doc(const FgmSchedule& s) {
  KvDoc doc;
  doc.set("kind", "fgm_schedule");
  doc.set_int("K", s.K);
  doc.set_double("L", s.L);
  auto vec = [](const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  };
  doc.set_vector("B", vec(s.B));
  doc.set_vector("b", vec(s.b));
  doc.set_vector("a", vec(s.a));
  return doc;
}

KvDoc schedule_to_doc(const OgmgSchedule& s) {
  KvDoc doc;
  doc.set("kind", "ogmg_schedule");
  doc.set_int("K", s.K);
  doc.set_vector("A", Eigen::Map<const Eigen::VectorXd>(s.A.data(),
                                                        static_cast<Eigen::Index>(s.A.size())));
  return doc;
}

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

FgmSchedule fgm_schedule_from_doc(const KvDoc& doc) {
  doc.require_known({"kind", "K", "L", "B", "b", "a"});
  if (doc.get("kind") != "fgm_schedule") throw ParseError("not an FGM schedule document");
  FgmSchedule s;
  s.K = static_cast<int>(doc.get_int("K"));
  s.L = doc.get_double("L");
  s.B = to_std(doc.get_vector("B"));
  s.b = to_std(doc.get_vector("b"));
  s.a = to_std(doc.get_vector("a"));
  const std::size_t n = static_cast<std::size_t>(s.K) + 1;
  if (s.K < 1 || s.B.size() != n || s.b.size() != n || s.a.size() != n) {
    throw ParseError("FGM schedule arrays must have K+1 entries");
  }
  return s;
}

OgmgSchedule ogmg_schedule_from_doc(const KvDoc& doc) {
  doc.require_known({"kind", "K", "A"});
  if (doc.get("kind") != "ogmg_schedule") throw ParseError("not an OGM-G schedule document");
  const long K = doc.get_int("K");
  auto A = to_std(doc.get_vector("A"));
  if (K < 1 || A.size() != static_cast<std::size_t>(K) + 1) {
    throw ParseError("OGM-G schedule needs K+1 entries in A");
  }
  return ogmg_schedule_from(std::move(A));
}

}  // namespace gradnorm
