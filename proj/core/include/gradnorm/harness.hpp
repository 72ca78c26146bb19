#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gradnorm/certificates.hpp"
#include "gradnorm/kvdoc.hpp"
#include "gradnorm/methods.hpp"

namespace gradnorm {

// Process exit codes shared by the CLI and the library drivers.
enum ExitCode : int {
  kExitOk = 0,
  kExitCertificateFailed = 1,
  kExitUsage = 2,
  kExitNumericFault = 3,
  kExitError = 4,
};

// Flat key-value experiment description.
//
//   method = gd | fgm | ogmg | fgm_then_ogmg | gda | km | halpern
//   K = <int >= 1>
//   epsilon = <double >= 0>          early stop on ||g_k||, default 0
//   step = <double>                  gda: eta (default 1/L); km: alpha (default 1/2)
//   certificate = true | false       default true
//   svg = true | false               default true
//   output = <dir>                   default $GRADNORM_OUTPUT_DIR or "runs"
//   name = <run name>                default <method>-K<K>-s<seed>
//   seed = <int>                     default 0
//   x0 = <v_1 ... v_n>               default: generator start, else Gaussian(seed)
//   problem = <file>                 problem document on disk, or inline keys:
//   problem.kind = ...               any serializable kind, or a generator:
//                                    random_quadratic, spectral_quadratic,
//                                    logsumexp_instance, random_rotation
//   problem.dimension = <int>        generator dimension (quadratics only)
//   problem.L = <double>             generator L, default 1
struct ExperimentConfig {
  Method method = Method::GD;
  int K = 1;
  double epsilon = 0.0;
  std::optional<double> step;
  bool certificate = true;
  bool svg = true;
  std::string output;
  std::string name;
  std::uint64_t seed = 0;
  std::optional<Vec> x0;
  std::optional<std::string> problem_file;
  KvDoc problem;  // inline problem keys without the "problem." prefix

  static ExperimentConfig from_doc(const KvDoc& doc);
  // `overrides` replace keys of the file before parsing (CLI flags).
  static ExperimentConfig from_file(const std::string& path, const KvDoc& overrides = {});
  KvDoc to_doc() const;
  // Throws InvalidArgument on a violated invariant.
  void validate() const;
  std::string run_name() const;
};

// Problem and start point resolved from a config.
struct ResolvedProblem {
  std::variant<SmoothProblem, OperatorProblem> problem;
  Vec x0;

  bool is_operator() const { return problem.index() == 1; }
  const SmoothProblem& smooth() const { return std::get<0>(problem); }
  const OperatorProblem& op() const { return std::get<1>(problem); }
};

ResolvedProblem resolve_problem(const ExperimentConfig& cfg);
Trace run_method(const ExperimentConfig& cfg, const ResolvedProblem& rp);

struct RunSummary {
  Method method = Method::GD;
  int K = 0;
  int iterations = 0;  // last recorded k
  bool stopped_early = false;
  double final_norm = 0.0;
  double min_norm = 0.0;
  long oracle_calls = 0;
  std::optional<bool> certificate_passed;
  std::optional<double> worst_violation;
  std::optional<double> tolerance;
  std::vector<std::string> certificate_failures;
  std::optional<double> envelope_margin;  // min_k (bound(k) - measured(k))
  std::string output_dir;
  int exit_code = kExitOk;

  KvDoc to_doc() const;
};

// Runs one experiment, writes trace.csv, certificate.csv, summary.txt,
// config.txt and trace.svg into <output>/<name>/, and returns the summary.
// Numeric faults are reported through exit_code rather than thrown.
RunSummary run_config(const ExperimentConfig& cfg);

// Runs the configured method, optionally applies a named tampering, and
// certifies the result. Returns kExitOk iff the certificate passes.
int check_config(const ExperimentConfig& cfg, const std::string& tampering, std::ostream& log);

// One row of the trace CSV. Columns: k, grad_norm, grad_norm_sq, value, gap,
// potential, envelope. `gap` is f - f* or <F(u), u - u*>; `envelope` bounds
// grad_norm_sq for smooth methods (the running minimum for FGM) and grad_norm
// for operator methods. Horizon-fixed methods carry it only at k = K.
struct TraceRow {
  int k = 0;
  double grad_norm = 0.0;
  double grad_norm_sq = 0.0;
  std::optional<double> value;
  std::optional<double> gap;
  std::optional<double> potential;
  std::optional<double> envelope;
};

struct TraceTable {
  Method method = Method::GD;
  std::vector<TraceRow> rows;
};

inline constexpr const char* kTraceCsvHeader = "k,grad_norm,grad_norm_sq,value,gap,potential,envelope";

TraceTable make_trace_table(const Trace& t, const ResolvedProblem& rp,
                            const CertificateReport* report);
void write_trace_csv(const TraceTable& table, std::ostream& out);
TraceTable parse_trace_csv(std::istream& in);

void write_certificate_csv(const CertificateReport& r, std::ostream& out);

// Log-log line chart of the enveloped quantity against k, with the envelope.
std::string trace_svg(const TraceTable& table, const std::string& title);

struct EnvelopeSeries {
  std::string label;
  std::vector<double> k;
  std::vector<double> measured;
  std::vector<double> bound;  // empty, or same length as measured; NaN marks no bound
};

struct EnvelopeComparison {
  std::string label;
  double slope = 0.0;  // least-squares fit of log(measured) on log(k)
  double intercept = 0.0;
  int points = 0;
  std::optional<double> min_margin;  // min (bound - measured)
};

// Points with k <= 0 or measured <= 0 are dropped; fewer than 4 remaining throws.
std::vector<EnvelopeComparison> compare_envelopes(const std::vector<EnvelopeSeries>& series);
void write_comparison(const std::vector<EnvelopeComparison>& rows, std::ostream& out);

// Default output root: $GRADNORM_OUTPUT_DIR or "runs".
std::string default_output_dir();

}  // namespace gradnorm
