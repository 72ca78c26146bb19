#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gradnorm/errors.hpp"
#include "gradnorm/harness.hpp"
#include "gradnorm/instances.hpp"

namespace gradnorm {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::path(default_output_dir()) / "harness-tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig config(const std::string& text) { return ExperimentConfig::from_doc(KvDoc::parse(text)); }

TEST(Config, Defaults) {
  const ExperimentConfig c = config("method = fgm\nK = 10\nproblem.kind = random_quadratic\n");
  EXPECT_EQ(c.method, Method::FGM);
  EXPECT_EQ(c.K, 10);
  EXPECT_EQ(c.epsilon, 0.0);
  EXPECT_TRUE(c.certificate);
  EXPECT_TRUE(c.svg);
  EXPECT_EQ(c.seed, 0u);
  EXPECT_EQ(c.run_name(), "fgm-K10-s0");
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, FailClosed) {
  EXPECT_THROW(config("method = gd\nK = 3\nKK = 3\nproblem.kind = random_quadratic\n"), ParseError);
  EXPECT_THROW(config("K = 3\nproblem.kind = random_quadratic\n"), ParseError);
  EXPECT_THROW(config("method = gd\nK = 3\nproblem = a.txt\nproblem.kind = random_quadratic\n"),
               ParseError);
  EXPECT_THROW(config("method = gd\nK = three\nproblem.kind = random_quadratic\n"), ParseError);
}

TEST(Config, Invariants) {
  EXPECT_THROW(config("method = ogmg\nK = 5\nepsilon = 0.1\nproblem.kind = random_quadratic\n").validate(),
               InvalidArgument);
  EXPECT_THROW(config("method = fgm_then_ogmg\nK = 5\nepsilon = 0.1\nproblem.kind = random_quadratic\n")
                   .validate(),
               InvalidArgument);
  EXPECT_THROW(config("method = gd\nK = 0\nproblem.kind = random_quadratic\n").validate(), InvalidArgument);
  EXPECT_THROW(config("method = gd\nK = 5\nepsilon = -1\nproblem.kind = random_quadratic\n").validate(),
               InvalidArgument);
  EXPECT_THROW(config("method = gd\nK = 5\nstep = 0.5\nproblem.kind = random_quadratic\n").validate(),
               InvalidArgument);
  EXPECT_THROW(config("method = km\nK = 5\nstep = 1.5\nproblem.kind = random_rotation\n").validate(),
               InvalidArgument);
  EXPECT_THROW(config("method = gd\nK = 5\n").validate(), InvalidArgument);
  EXPECT_NO_THROW(config("method = gd\nK = 5\nepsilon = 0.1\nproblem.kind = random_quadratic\n").validate());
}

TEST(Config, DocRoundTrip) {
  const ExperimentConfig c = config(
      "method = gda\nK = 40\nstep = 0.75\nseed = 9\nsvg = false\nx0 = 1 2\n"
      "problem.kind = rotation\nproblem.dimension = 2\nproblem.L = 1\nproblem.eta = 0.5\n"
      "problem.alpha = 0.5\nproblem.b = 0 0\n");
  const ExperimentConfig d = ExperimentConfig::from_doc(c.to_doc());
  EXPECT_EQ(d.to_doc().serialize(), c.to_doc().serialize());
  EXPECT_EQ(*d.step, 0.75);
  EXPECT_EQ(*d.x0, Eigen::Vector2d(1, 2));
}

TEST(Config, ProblemFileRelativeToConfig) {
  const fs::path dir = scratch_dir("relative");
  make_quadratic(Mat::Identity(2, 2), Vec::Zero(2), 1.0).to_doc().write_file((dir / "q.txt").string());
  std::ofstream(dir / "run.cfg") << "method = gd\nK = 5\nproblem = q.txt\nx0 = 1 1\n";
  const ExperimentConfig c = ExperimentConfig::from_file((dir / "run.cfg").string());
  EXPECT_EQ(resolve_problem(c).smooth().dimension(), 2);
}

TEST(Resolve, GeneratorsAndOperatorWrapping) {
  const ResolvedProblem q = resolve_problem(config("method = gd\nK = 1\nseed = 4\nproblem.kind = random_quadratic\n"));
  EXPECT_FALSE(q.is_operator());
  EXPECT_EQ(q.x0, random_quadratic(4).x0);
  const ResolvedProblem w =
      resolve_problem(config("method = halpern\nK = 1\nseed = 4\nproblem.kind = random_quadratic\n"));
  EXPECT_TRUE(w.is_operator());
  EXPECT_TRUE(w.op().has_zero());
  EXPECT_THROW(resolve_problem(config("method = gd\nK = 1\nproblem.kind = random_rotation\n")),
               InvalidArgument);
  EXPECT_THROW(resolve_problem(config("method = gd\nK = 1\nx0 = 1 2 3\nproblem.kind = random_quadratic\n"
                                      "problem.dimension = 2\n")),
               InvalidArgument);
  EXPECT_THROW(resolve_problem(config("method = gd\nK = 1\nproblem.kind = random_quadratic\nproblem.eta = 1\n")),
               ParseError);
}

TEST(RunConfig, GdQuadraticWritesArtifacts) {
  const fs::path dir = scratch_dir("gd");
  ExperimentConfig c = config("method = gd\nK = 100\nseed = 2\nname = gd\nproblem.kind = random_quadratic\n");
  c.output = dir.string();
  const RunSummary s = run_config(c);
  EXPECT_EQ(s.exit_code, kExitOk);
  ASSERT_TRUE(s.certificate_passed.has_value());
  EXPECT_TRUE(*s.certificate_passed);
  EXPECT_EQ(s.oracle_calls, 101);
  EXPECT_GE(*s.envelope_margin, 0.0);
  for (const char* f : {"config.txt", "trace.csv", "certificate.csv", "summary.txt", "trace.svg"}) {
    EXPECT_TRUE(fs::exists(dir / "gd" / f)) << f;
  }
  const std::string csv = slurp(dir / "gd" / "trace.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kTraceCsvHeader);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 102);
  const KvDoc summary = KvDoc::read_file((dir / "gd" / "summary.txt").string());
  EXPECT_EQ(summary.get("certificate"), "pass");
  // The stored config reproduces the run.
  const ExperimentConfig again = ExperimentConfig::from_file((dir / "gd" / "config.txt").string());
  EXPECT_EQ(again.to_doc().serialize(), c.to_doc().serialize());
}

TEST(RunConfig, ByteIdenticalRepeats) {
  const fs::path a = scratch_dir("rep-a"), b = scratch_dir("rep-b");
  for (const char* m : {"fgm", "ogmg", "halpern"}) {
    ExperimentConfig c = config(std::string("method = ") + m +
                                "\nK = 64\nseed = 5\nname = r\nproblem.kind = random_quadratic\n");
    c.output = a.string();
    run_config(c);
    const std::string first = slurp(a / "r" / "trace.csv");
    c.output = b.string();
    run_config(c);
    EXPECT_EQ(first, slurp(b / "r" / "trace.csv")) << m;
    EXPECT_EQ(slurp(a / "r" / "certificate.csv"), slurp(b / "r" / "certificate.csv")) << m;
  }
}

TEST(RunConfig, HalpernMinNormEnvelope) {
  const fs::path dir = scratch_dir("halpern");
  ExperimentConfig c = config("method = halpern\nK = 1000\nseed = 3\nsvg = false\nproblem.kind = random_rotation\n");
  c.output = dir.string();
  const RunSummary s = run_config(c);
  EXPECT_EQ(s.exit_code, kExitOk);
  const OperatorInstance in = random_rotation(3);
  const double LD = in.problem.L() * (in.u0 - in.problem.u_star()).norm();
  EXPECT_LE(s.min_norm, LD / 1001.0 + 1e-8 * LD);
  EXPECT_EQ(s.oracle_calls, 1001);
}

TEST(RunConfig, EarlyStopReportsIterations) {
  const fs::path dir = scratch_dir("early");
  ExperimentConfig c = config("method = gd\nK = 100000\nepsilon = 1e-4\nseed = 1\nproblem.kind = random_quadratic\n");
  c.output = dir.string();
  const RunSummary s = run_config(c);
  EXPECT_TRUE(s.stopped_early);
  EXPECT_LT(s.iterations, 100000);
  EXPECT_LE(s.final_norm, 1e-4);
  EXPECT_EQ(s.exit_code, kExitOk);
}

TEST(RunConfig, NumericFaultExitCode) {
  const fs::path dir = scratch_dir("fault");
  KvDoc prob;
  prob.set("kind", "logsumexp");
  prob.set_int("dimension", 1);
  prob.set_double("L", 1e-320);
  prob.set("rows", "2 1 1 -1");
  prob.set_double("rho", 1.0);
  prob.write_file((dir / "lse.txt").string());
  ExperimentConfig c = config("method = gd\nK = 5\nx0 = 0.5\nproblem = " + (dir / "lse.txt").string() + "\n");
  c.output = dir.string();
  EXPECT_EQ(run_config(c).exit_code, kExitNumericFault);
  std::ostringstream log;
  EXPECT_EQ(check_config(c, "", log), kExitNumericFault);
}

TEST(CheckConfig, ExitStatus) {
  const ExperimentConfig c = config("method = ogmg\nK = 30\nseed = 6\nproblem.kind = random_quadratic\n");
  std::ostringstream log;
  EXPECT_EQ(check_config(c, "", log), kExitOk);
  EXPECT_NE(log.str().find("PASS"), std::string::npos);
  std::ostringstream log2;
  EXPECT_EQ(check_config(c, "terminal_ascent", log2), kExitCertificateFailed);
  EXPECT_NE(log2.str().find("first failing k"), std::string::npos);
}

TEST(TraceCsv, GdKOneHasTwoRows) {
  const SmoothInstance in = random_quadratic(1, 3);
  const ResolvedProblem rp{in.problem, in.x0};
  const TraceTable t = make_trace_table(run_gd(in.problem, in.x0, 1), rp, nullptr);
  ASSERT_EQ(t.rows.size(), 2u);
  std::ostringstream out;
  write_trace_csv(t, out);
  const std::string csv = out.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_FALSE(t.rows[0].potential.has_value());
}

TEST(TraceCsv, OperatorRowsHaveEmptyValue) {
  const OperatorInstance in = random_rotation(2);
  const ResolvedProblem rp{in.problem, in.u0};
  const Trace tr = run_halpern(in.problem, in.u0, 5);
  const CertificateReport rep = certify(tr, in.problem);
  const TraceTable t = make_trace_table(tr, rp, &rep);
  std::ostringstream out;
  write_trace_csv(t, out);
  std::istringstream in2(out.str());
  std::string header, row;
  std::getline(in2, header);
  std::getline(in2, row);
  EXPECT_EQ(header, kTraceCsvHeader);
  EXPECT_NE(row.find(",,"), std::string::npos);  // value cell empty
  EXPECT_TRUE(t.rows[1].potential.has_value());
  EXPECT_TRUE(t.rows[1].gap.has_value());
}

// Property: parse(emit(trace)) reproduces every numeric cell exactly.
TEST(TraceCsv, RoundTrip) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const SmoothInstance in = random_quadratic(seed);
    const ResolvedProblem rp{in.problem, in.x0};
    const Trace tr = run_fgm(in.problem, in.x0, 50);
    const CertificateReport rep = certify(tr, in.problem);
    const TraceTable t = make_trace_table(tr, rp, &rep);
    std::stringstream io;
    write_trace_csv(t, io);
    const TraceTable back = parse_trace_csv(io);
    ASSERT_EQ(back.rows.size(), t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      EXPECT_EQ(back.rows[i].k, t.rows[i].k);
      EXPECT_EQ(back.rows[i].grad_norm, t.rows[i].grad_norm);
      EXPECT_EQ(back.rows[i].grad_norm_sq, t.rows[i].grad_norm_sq);
      EXPECT_EQ(back.rows[i].value, t.rows[i].value);
      EXPECT_EQ(back.rows[i].gap, t.rows[i].gap);
      EXPECT_EQ(back.rows[i].potential, t.rows[i].potential);
      EXPECT_EQ(back.rows[i].envelope, t.rows[i].envelope);
    }
  }
}

TEST(TraceCsv, RejectsBadInput) {
  std::istringstream bad_header("k,grad\n0,1\n");
  EXPECT_THROW(parse_trace_csv(bad_header), ParseError);
  std::istringstream bad_cell(std::string(kTraceCsvHeader) + "\n0,x,1,,,,\n");
  EXPECT_THROW(parse_trace_csv(bad_cell), ParseError);
}

TEST(CertificateCsv, Header) {
  const SmoothInstance in = random_quadratic(1, 3);
  std::ostringstream out;
  write_certificate_csv(certify(run_gd(in.problem, in.x0, 4), in.problem), out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "k,phase,potential,delta,slack,violation,tol");
}

TEST(Svg, WellFormed) {
  const SmoothInstance in = random_quadratic(1, 3);
  const ResolvedProblem rp{in.problem, in.x0};
  const Trace tr = run_gd(in.problem, in.x0, 30);
  const CertificateReport rep = certify(tr, in.problem);
  const std::string svg = trace_svg(make_trace_table(tr, rp, &rep), "a<b");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("a&lt;b"), std::string::npos);
  EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
}

TEST(Compare, ExactPowerLaw) {
  EnvelopeSeries s;
  s.label = "k^-2";
  for (int k = 1; k <= 64; k *= 2) {
    s.k.push_back(k);
    s.measured.push_back(3.0 / (k * k));
    s.bound.push_back(4.0 / (k * k));
  }
  const auto rows = compare_envelopes({s});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].slope, -2.0, 1e-12);
  EXPECT_NEAR(std::exp(rows[0].intercept), 3.0, 1e-12);
  EXPECT_EQ(rows[0].points, 7);
  EXPECT_NEAR(*rows[0].min_margin, 1.0 / 4096.0, 1e-15);
}

TEST(Compare, TooFewPoints) {
  EnvelopeSeries s;
  s.label = "short";
  s.k = {0, 1, 2, 3};
  s.measured = {1, 0.5, 0.25, 0.0};
  EXPECT_THROW(compare_envelopes({s}), InvalidArgument);
}

TEST(Compare, WriteTable) {
  EnvelopeComparison c;
  c.label = "x";
  c.slope = -2;
  c.points = 5;
  std::ostringstream out;
  write_comparison({c}, out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "label,slope,intercept,points,min_margin");
}

EnvelopeSeries min_norm_series(Method m, const SmoothInstance& in, int K) {
  const Trace t = m == Method::GD ? run_gd(in.problem, in.x0, K) : run_fgm(in.problem, in.x0, K);
  EnvelopeSeries s;
  s.label = method_name(m);
  double running = INFINITY;
  for (const StepRecord& r : t.records) {
    running = std::min(running, r.norm_sq);
    if (r.k >= 8) {
      s.k.push_back(r.k);
      s.measured.push_back(running);
    }
  }
  return s;
}

// GD's k^-2 and FGM's k^-3 decay of the smallest squared gradient, on an
// instance whose spectrum exposes the worst case at moderate k.
TEST(Compare, GdAndFgmSlopes) {
  const SmoothInstance in = spectral_quadratic(1, 300);
  const auto rows = compare_envelopes({min_norm_series(Method::GD, in, 512), min_norm_series(Method::FGM, in, 512)});
  EXPECT_GT(rows[0].slope, -2.6);
  EXPECT_LT(rows[0].slope, -1.4);
  EXPECT_LE(rows[1].slope, -2.8);
}

TEST(Output, DefaultDirectoryFromEnvironment) {
  EXPECT_FALSE(default_output_dir().empty());
}

}  // namespace
}  // namespace gradnorm
