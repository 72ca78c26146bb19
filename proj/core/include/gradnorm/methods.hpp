#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gradnorm/problems.hpp"
#include "gradnorm/schedules.hpp"

namespace gradnorm {

enum class Method { GD, FGM, OGMG, FgmThenOgmg, GDA, KM, Halpern };

std::string method_name(Method m);
Method parse_method(const std::string& name);
bool is_operator_method(Method m);

// One iterate. `oracle` is grad f(x_k) or F(u_k); auxiliaries are set only by
// the methods that define them (FGM: v; OGM-G: v, y, g_acc).
struct StepRecord {
  int k = 0;
  Vec point;
  Vec oracle;
  double norm_sq = 0.0;
  std::optional<double> value;
  std::optional<Vec> v;
  std::optional<Vec> y;
  std::optional<Vec> g_acc;
  int phase = 0;  // 1 for the OGM-G part of fgm_then_ogmg
};

struct Trace {
  Method method = Method::GD;
  int horizon = 0;
  double L = 1.0;
  double step = 0.0;  // GDA: eta; KM: alpha (constant sequences only)
  std::vector<StepRecord> records;
  long oracle_calls = 0;
  long value_calls = 0;
  bool stopped_early = false;
  int phase_split = 0;  // fgm_then_ogmg: index of the junction iterate
  std::optional<FgmSchedule> fgm;
  std::optional<OgmgSchedule> ogmg;

  const StepRecord& back() const { return records.back(); }
};

struct RunOptions {
  // Stop after the first recorded iterate with ||g_k|| <= epsilon (0 disables).
  double epsilon = 0.0;
};

struct GdaParams {
  double eta = 0.0;

  static GdaParams optimal(double L) { return {1.0 / L}; }
  // Step matching KM with averaging weight alpha on T = I - (2/L) F.
  static GdaParams from_km(double alpha, double L) { return {alpha * (2.0 / L)}; }
};

struct HalpernParams {
  static double lambda(int k) { return 1.0 / (k + 1.0); }
  static double A(int k, double L) { return k * (k + 1.0) / L; }
  static double B(int k) { return k + 1.0; }
};

// Nonexpansive map for KM. Built from an operator it is T = I - (2/L) F and
// KM evaluates u - (alpha (2/L)) F(u), the same arithmetic as GDA.
class NonexpansiveMap {
 public:
  static NonexpansiveMap from_operator(const OperatorProblem& p);
  static NonexpansiveMap custom(int dimension, std::function<Vec(const Vec&)> T);

  int dimension() const { return dim_; }
  Vec apply(const Vec& u) const;
  const OperatorProblem* op() const { return op_ ? &*op_ : nullptr; }

 private:
  int dim_ = 0;
  std::optional<OperatorProblem> op_;
  std::function<Vec(const Vec&)> T_;
};

Trace run_gd(const SmoothProblem& p, const Vec& x0, int K, const RunOptions& opts = {});
Trace run_fgm(const SmoothProblem& p, const Vec& x0, int K, const FgmSchedule& s,
              const RunOptions& opts = {});
Trace run_fgm(const SmoothProblem& p, const Vec& x0, int K, const RunOptions& opts = {});
Trace run_ogmg(const SmoothProblem& p, const Vec& x0, int K, const OgmgSchedule& s);
Trace run_ogmg(const SmoothProblem& p, const Vec& x0, int K);
Trace run_fgm_then_ogmg(const SmoothProblem& p, const Vec& x0, int K);
Trace run_gda(const OperatorProblem& p, const Vec& u0, int K, const GdaParams& params,
              const RunOptions& opts = {});
Trace run_km(const NonexpansiveMap& T, const Vec& u0, int K, const std::vector<double>& alpha,
             const RunOptions& opts = {});
Trace run_km(const NonexpansiveMap& T, const Vec& u0, int K, double alpha,
             const RunOptions& opts = {});
Trace run_halpern(const OperatorProblem& p, const Vec& u0, int K, const RunOptions& opts = {});

// OGM-G iterates rebuilt from the beta table: x_k = x0 - (1/L) sum_j beta_{j,k} g_j,
// using the gradients recorded in `t`. Entry K uses the x_K step.
std::vector<Vec> ogmg_beta_form(const Trace& t, const BetaTable& beta);

// Runs FGM until ||grad|| <= 1e-12 L max(||x0||, 1) (at most max_iters steps)
// and attaches the final iterate as x*. Throws if the threshold is not met.
SmoothProblem with_reference_optimum(const SmoothProblem& p, const Vec& x0,
                                     int max_iters = 100000);

}  // namespace gradnorm
