#include "gradnorm/harness.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "gradnorm/errors.hpp"
#include "gradnorm/instances.hpp"
#include "gradnorm/tamper.hpp"

namespace gradnorm {
namespace {

const std::vector<std::string> kGenerators = {"random_quadratic", "spectral_quadratic",
                                              "logsumexp_instance", "random_rotation"};

bool is_generator(const std::string& kind) {
  for (const std::string& g : kGenerators) {
    if (g == kind) return true;
  }
  return false;
}

bool horizon_fixed(Method m) { return m == Method::OGMG || m == Method::FgmThenOgmg; }

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ParseError("trace csv line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

std::optional<double> parse_optional(const std::string& s, int line) {
  if (s.empty()) return std::nullopt;
  return parse_number(s, line);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

// The quantity the envelope column bounds.
double measured(Method m, const TraceRow& r, double& running_min) {
  if (is_operator_method(m)) return r.grad_norm;
  if (m == Method::FGM) {
    running_min = std::min(running_min, r.grad_norm_sq);
    return running_min;
  }
  return r.grad_norm_sq;
}

std::optional<RateEnvelope> envelope_for(const Trace& t, const ResolvedProblem& rp, const Vec& x0) {
  const double L = t.L;
  const int K = t.records.back().k;
  try {
    if (rp.is_operator()) {
      if (t.method == Method::GDA && std::abs(t.step * L - 1.0) > 1e-12) return std::nullopt;
      if (t.method == Method::KM && std::abs(t.step - 0.5) > 1e-12) return std::nullopt;
      return rate_envelope(t.method, rp.op(), x0, K);
    }
    return rate_envelope(t.method, rp.smooth(), x0, K);
  } catch (const MissingOptimum&) {
    return std::nullopt;
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_doc(const KvDoc& doc) {
  doc.require_known({"method", "K", "epsilon", "step", "certificate", "svg", "output", "name",
                     "seed", "x0", "problem", "problem."});
  ExperimentConfig c;
  if (!doc.has("method")) throw ParseError("config: missing key 'method'");
  if (!doc.has("K")) throw ParseError("config: missing key 'K'");
  c.method = parse_method(doc.get("method"));
  c.K = static_cast<int>(doc.get_int("K"));
  if (doc.has("epsilon")) c.epsilon = doc.get_double("epsilon");
  if (doc.has("step")) c.step = doc.get_double("step");
  if (doc.has("certificate")) c.certificate = doc.get_bool("certificate");
  if (doc.has("svg")) c.svg = doc.get_bool("svg");
  c.output = doc.get_or("output", "");
  c.name = doc.get_or("name", "");
  if (doc.has("seed")) {
    const long s = doc.get_int("seed");
    if (s < 0) throw ParseError("config: seed must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (doc.has("x0")) c.x0 = doc.get_vector("x0");
  c.problem = doc.sub("problem.");
  if (doc.has("problem")) {
    if (!c.problem.keys().empty()) {
      throw ParseError("config: give either 'problem' (a file) or 'problem.*' keys, not both");
    }
    c.problem_file = doc.get("problem");
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path, const KvDoc& overrides) {
  KvDoc doc = KvDoc::read_file(path);
  doc.merge(overrides, "");
  ExperimentConfig c = from_doc(doc);
  // Problem files named in the config resolve relative to the config file.
  if (c.problem_file && !overrides.has("problem") &&
      std::filesystem::path(*c.problem_file).is_relative()) {
    c.problem_file = (std::filesystem::path(path).parent_path() / *c.problem_file).string();
  }
  return c;
}

KvDoc ExperimentConfig::to_doc() const {
  KvDoc d;
  d.set("method", method_name(method));
  d.set_int("K", K);
  d.set_double("epsilon", epsilon);
  if (step) d.set_double("step", *step);
  d.set_bool("certificate", certificate);
  d.set_bool("svg", svg);
  if (!output.empty()) d.set("output", output);
  d.set("name", run_name());
  d.set_int("seed", static_cast<long>(seed));
  if (x0) d.set_vector("x0", *x0);
  if (problem_file) d.set("problem", *problem_file);
  d.merge(problem, "problem.");
  return d;
}

void ExperimentConfig::validate() const {
  if (K < 1) throw InvalidArgument("config: K must be >= 1");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("config: epsilon must be finite and >= 0");
  }
  if (horizon_fixed(method) && epsilon > 0.0) {
    throw InvalidArgument("config: " + method_name(method) +
                          " has a fixed horizon and does not support early stopping");
  }
  if (method == Method::FgmThenOgmg && K < 2) {
    throw InvalidArgument("config: fgm_then_ogmg needs K >= 2");
  }
  if (step) {
    if (method != Method::GDA && method != Method::KM) {
      throw InvalidArgument("config: 'step' applies to gda and km only");
    }
    if (!(*step > 0.0)) throw InvalidArgument("config: step must be positive");
    if (method == Method::KM && !(*step < 1.0)) {
      throw InvalidArgument("config: km weight must lie in (0, 1)");
    }
  }
  if (!problem_file && !problem.has("kind")) {
    throw InvalidArgument("config: no problem given ('problem' or 'problem.kind')");
  }
  if (x0 && !x0->allFinite()) throw InvalidArgument("config: x0 is not finite");
}

std::string ExperimentConfig::run_name() const {
  if (!name.empty()) return name;
  return method_name(method) + "-K" + std::to_string(K) + "-s" + std::to_string(seed);
}

ResolvedProblem resolve_problem(const ExperimentConfig& cfg) {
  const KvDoc doc = cfg.problem_file ? KvDoc::read_file(*cfg.problem_file) : cfg.problem;
  const std::string kind = doc.get("kind");
  std::optional<SmoothProblem> smooth;
  std::optional<OperatorProblem> op;
  std::optional<Vec> start;

  if (is_generator(kind)) {
    doc.require_known({"kind", "dimension", "L"});
    const double L = doc.has("L") ? doc.get_double("L") : 1.0;
    const int dim = doc.has("dimension") ? static_cast<int>(doc.get_int("dimension")) : -1;
    if (kind == "random_quadratic") {
      SmoothInstance in = random_quadratic(cfg.seed, dim < 0 ? 0 : dim, L);
      smooth = in.problem;
      start = in.x0;
    } else if (kind == "spectral_quadratic") {
      SmoothInstance in = spectral_quadratic(cfg.seed, dim < 0 ? 300 : dim, L);
      smooth = in.problem;
      start = in.x0;
    } else if (kind == "logsumexp_instance") {
      if (doc.has("dimension") || doc.has("L")) {
        throw InvalidArgument("logsumexp_instance takes no dimension or L");
      }
      SmoothInstance in = logsumexp_instance(cfg.seed);
      smooth = in.problem;
      start = in.x0;
    } else {
      if (doc.has("dimension")) throw InvalidArgument("random_rotation takes no dimension");
      OperatorInstance in = random_rotation(cfg.seed, L);
      op = in.problem;
      start = in.u0;
    }
  } else if (is_operator_kind(kind)) {
    op = operator_problem_from_doc(doc);
  } else {
    smooth = smooth_problem_from_doc(doc);
  }

  if (is_operator_method(cfg.method)) {
    if (!op) op = gradient_as_operator(*smooth);
  } else if (!smooth) {
    throw InvalidArgument(method_name(cfg.method) + " needs a smooth problem, got '" + kind + "'");
  }

  const int dim = op ? op->dimension() : smooth->dimension();
  Vec x0;
  if (cfg.x0) {
    x0 = *cfg.x0;
    if (x0.size() != dim) {
      throw InvalidArgument("x0 has dimension " + std::to_string(x0.size()) + ", problem has " +
                            std::to_string(dim));
    }
  } else if (start) {
    x0 = *start;
  } else {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> N(0.0, 1.0);
    x0.resize(dim);
    for (int i = 0; i < dim; ++i) x0[i] = N(rng);
  }
  if (is_operator_method(cfg.method)) return {*op, x0};
  return {*smooth, x0};
}

Trace run_method(const ExperimentConfig& cfg, const ResolvedProblem& rp) {
  const RunOptions opts{cfg.epsilon};
  switch (cfg.method) {
    case Method::GD:
      return run_gd(rp.smooth(), rp.x0, cfg.K, opts);
    case Method::FGM:
      return run_fgm(rp.smooth(), rp.x0, cfg.K, opts);
    case Method::OGMG:
      return run_ogmg(rp.smooth(), rp.x0, cfg.K);
    case Method::FgmThenOgmg:
      return run_fgm_then_ogmg(rp.smooth(), rp.x0, cfg.K);
    case Method::GDA: {
      const double eta = cfg.step ? *cfg.step : GdaParams::optimal(rp.op().L()).eta;
      return run_gda(rp.op(), rp.x0, cfg.K, GdaParams{eta}, opts);
    }
    case Method::KM:
      return run_km(NonexpansiveMap::from_operator(rp.op()), rp.x0, cfg.K,
                    cfg.step ? *cfg.step : 0.5, opts);
    case Method::Halpern:
      return run_halpern(rp.op(), rp.x0, cfg.K, opts);
  }
  throw InvalidArgument("unknown method");
}

KvDoc RunSummary::to_doc() const {
  KvDoc d;
  d.set("method", method_name(method));
  d.set_int("K", K);
  d.set_int("iterations", iterations);
  d.set_bool("stopped_early", stopped_early);
  d.set_double("final_norm", final_norm);
  d.set_double("min_norm", min_norm);
  d.set_int("oracle_calls", oracle_calls);
  d.set("certificate", certificate_passed ? (*certificate_passed ? "pass" : "fail") : "off");
  if (worst_violation) d.set_double("worst_violation", *worst_violation);
  if (tolerance) d.set_double("tolerance", *tolerance);
  if (!certificate_failures.empty()) {
    std::string joined;
    for (const std::string& f : certificate_failures) joined += (joined.empty() ? "" : " ") + f;
    d.set("failures", joined);
  }
  if (envelope_margin) d.set_double("envelope_margin", *envelope_margin);
  d.set_int("exit_code", exit_code);
  return d;
}

RunSummary run_config(const ExperimentConfig& cfg) {
  cfg.validate();
  RunSummary s;
  s.method = cfg.method;
  s.K = cfg.K;
  const std::filesystem::path root = cfg.output.empty() ? default_output_dir() : cfg.output;
  const std::filesystem::path dir = root / cfg.run_name();
  std::filesystem::create_directories(dir);
  s.output_dir = dir.string();
  write_text(dir / "config.txt", cfg.to_doc().serialize());

  const ResolvedProblem rp = resolve_problem(cfg);
  Trace trace;
  try {
    trace = run_method(cfg, rp);
  } catch (const NumericFault& e) {
    s.exit_code = kExitNumericFault;
    KvDoc d = s.to_doc();
    d.set("error", e.what());
    write_text(dir / "summary.txt", d.serialize());
    return s;
  }

  std::optional<CertificateReport> report;
  std::string cert_error;
  if (cfg.certificate) {
    try {
      report = rp.is_operator() ? certify(trace, rp.op()) : certify(trace, rp.smooth());
    } catch (const MissingOptimum& e) {
      cert_error = e.what();
    }
  }

  const TraceTable table = make_trace_table(trace, rp, report ? &*report : nullptr);
  {
    std::ostringstream csv;
    write_trace_csv(table, csv);
    write_text(dir / "trace.csv", csv.str());
  }
  if (report) {
    std::ostringstream csv;
    write_certificate_csv(*report, csv);
    write_text(dir / "certificate.csv", csv.str());
  }
  if (cfg.svg) write_text(dir / "trace.svg", trace_svg(table, cfg.run_name()));

  s.iterations = trace.records.back().k;
  s.stopped_early = trace.stopped_early;
  s.oracle_calls = trace.oracle_calls;
  s.final_norm = std::sqrt(trace.records.back().norm_sq);
  s.min_norm = s.final_norm;
  for (const StepRecord& r : trace.records) s.min_norm = std::min(s.min_norm, std::sqrt(r.norm_sq));
  double running = std::numeric_limits<double>::infinity();
  for (const TraceRow& r : table.rows) {
    const double m = measured(table.method, r, running);
    if (!r.envelope) continue;
    const double margin = *r.envelope - m;
    if (!s.envelope_margin || margin < *s.envelope_margin) s.envelope_margin = margin;
  }

  if (report) {
    s.certificate_passed = report->passed;
    s.worst_violation = report->worst_violation;
    s.tolerance = report->tolerance;
    s.certificate_failures = report->failures();
    if (!report->passed) s.exit_code = kExitCertificateFailed;
  } else if (!cert_error.empty()) {
    s.exit_code = kExitError;
  }
  KvDoc d = s.to_doc();
  if (!cert_error.empty()) d.set("error", cert_error);
  write_text(dir / "summary.txt", d.serialize());
  return s;
}

int check_config(const ExperimentConfig& cfg, const std::string& tampering, std::ostream& log) {
  cfg.validate();
  const ResolvedProblem rp = resolve_problem(cfg);
  Trace trace;
  try {
    trace = run_method(cfg, rp);
  } catch (const NumericFault& e) {
    log << "numeric fault: " << e.what() << '\n';
    return kExitNumericFault;
  }
  if (!tampering.empty()) {
    trace = rp.is_operator() ? tamper(trace, rp.op(), tampering)
                             : tamper(trace, rp.smooth(), tampering);
  }
  CertificateReport r;
  try {
    r = rp.is_operator() ? certify(trace, rp.op()) : certify(trace, rp.smooth());
  } catch (const MissingOptimum& e) {
    log << "certificate unavailable: " << e.what() << '\n';
    return kExitError;
  }
  log << method_name(trace.method) << (tampering.empty() ? "" : " [" + tampering + "]") << ": "
      << (r.passed ? "PASS" : "FAIL") << " worst_violation=" << format_double(r.worst_violation)
      << " at k=" << r.worst_k << " tau=" << format_double(r.tolerance) << '\n';
  for (const CertificateCheck& c : r.checks) {
    if (!c.applicable) continue;
    log << "  " << c.name << ": " << (c.passed ? "ok" : "FAIL")
        << " violation=" << format_double(c.violation) << " tol=" << format_double(c.tol);
    if (!c.passed) log << " first_k=" << c.first_fail_k;
    log << '\n';
  }
  if (!r.passed) log << "  first failing k: " << r.first_failure() << '\n';
  return r.passed ? kExitOk : kExitCertificateFailed;
}

TraceTable make_trace_table(const Trace& t, const ResolvedProblem& rp,
                            const CertificateReport* report) {
  TraceTable table;
  table.method = t.method;
  const Vec& x0 = t.records.front().point;
  std::map<int, double> potential;
  if (report) {
    for (const CertificateStep& s : report->steps) potential[s.k] = s.potential;
  }
  const std::optional<RateEnvelope> env = envelope_for(t, rp, x0);
  const int last = t.records.back().k;

  for (const StepRecord& r : t.records) {
    TraceRow row;
    row.k = r.k;
    row.grad_norm = std::sqrt(r.norm_sq);
    row.grad_norm_sq = r.norm_sq;
    row.value = r.value;
    if (rp.is_operator()) {
      if (rp.op().has_zero()) row.gap = r.oracle.dot(r.point - rp.op().u_star());
    } else if (rp.smooth().has_optimum() && r.value) {
      row.gap = *r.value - rp.smooth().f_star();
    }
    if (auto it = potential.find(r.k); it != potential.end()) row.potential = it->second;
    if (env && (!horizon_fixed(t.method) || r.k == last)) row.envelope = env->bound[r.k];
    table.rows.push_back(row);
  }
  return table;
}

void write_trace_csv(const TraceTable& table, std::ostream& out) {
  out << kTraceCsvHeader << '\n';
  for (const TraceRow& r : table.rows) {
    out << r.k << ',' << format_double(r.grad_norm) << ',' << format_double(r.grad_norm_sq) << ','
        << cell(r.value) << ',' << cell(r.gap) << ',' << cell(r.potential) << ','
        << cell(r.envelope) << '\n';
  }
}

TraceTable parse_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceCsvHeader) {
    throw ParseError("trace csv: unexpected header");
  }
  TraceTable table;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != 7) {
      throw ParseError("trace csv line " + std::to_string(lineno) + ": expected 7 fields");
    }
    TraceRow r;
    r.k = static_cast<int>(parse_number(f[0], lineno));
    r.grad_norm = parse_number(f[1], lineno);
    r.grad_norm_sq = parse_number(f[2], lineno);
    r.value = parse_optional(f[3], lineno);
    r.gap = parse_optional(f[4], lineno);
    r.potential = parse_optional(f[5], lineno);
    r.envelope = parse_optional(f[6], lineno);
    table.rows.push_back(r);
  }
  return table;
}

void write_certificate_csv(const CertificateReport& r, std::ostream& out) {
  out << "k,phase,potential,delta,slack,violation,tol\n";
  for (const CertificateStep& s : r.steps) {
    out << s.k << ',' << s.phase << ',' << format_double(s.potential) << ',' << cell(s.delta)
        << ',' << cell(s.slack) << ',' << cell(s.violation) << ',' << format_double(s.tol)
        << '\n';
  }
}

std::vector<EnvelopeComparison> compare_envelopes(const std::vector<EnvelopeSeries>& series) {
  std::vector<EnvelopeComparison> out;
  for (const EnvelopeSeries& s : series) {
    if (s.k.size() != s.measured.size()) {
      throw InvalidArgument(s.label + ": k and measured differ in length");
    }
    if (!s.bound.empty() && s.bound.size() != s.measured.size()) {
      throw InvalidArgument(s.label + ": bound and measured differ in length");
    }
    EnvelopeComparison c;
    c.label = s.label;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < s.k.size(); ++i) {
      if (!s.bound.empty() && !std::isnan(s.bound[i])) {
        const double m = s.bound[i] - s.measured[i];
        if (!c.min_margin || m < *c.min_margin) c.min_margin = m;
      }
      if (!(s.k[i] > 0.0) || !(s.measured[i] > 0.0)) continue;
      const double x = std::log(s.k[i]), y = std::log(s.measured[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++c.points;
    }
    if (c.points < 4) {
      throw InvalidArgument(s.label + ": a slope fit needs at least 4 positive points, got " +
                            std::to_string(c.points));
    }
    const double n = c.points;
    const double den = n * sxx - sx * sx;
    if (!(den > 0.0)) throw InvalidArgument(s.label + ": all k values coincide");
    c.slope = (n * sxy - sx * sy) / den;
    c.intercept = (sy - c.slope * sx) / n;
    out.push_back(c);
  }
  return out;
}

void write_comparison(const std::vector<EnvelopeComparison>& rows, std::ostream& out) {
  out << "label,slope,intercept,points,min_margin\n";
  for (const EnvelopeComparison& c : rows) {
    out << c.label << ',' << format_double(c.slope) << ',' << format_double(c.intercept) << ','
        << c.points << ',' << cell(c.min_margin) << '\n';
  }
}

std::string default_output_dir() {
  const char* env = std::getenv("GRADNORM_OUTPUT_DIR");
  return env && *env ? std::string(env) : std::string("runs");
}

}  // namespace gradnorm
