// gradnorm command-line driver.
//
//   gradnorm run CONFIG [overrides]
//   gradnorm check CONFIG [--tamper NAME] [overrides]
//   gradnorm sweep-lb --method gda|km|halpern [--param X] [--block P] --K K [--grid N]
//   gradnorm compare TRACE.csv... | --config CONFIG --horizons 8,16,32,...
//
// Exit status: 0 ok, 1 certificate or bound failure, 2 usage error,
// 3 numeric fault, 4 other error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "gradnorm/errors.hpp"
#include "gradnorm/harness.hpp"
#include "gradnorm/lowerbound.hpp"
#include "gradnorm/tamper.hpp"

namespace {

using namespace gradnorm;

// Flags mirroring ExperimentConfig keys; set ones override the config file.
struct Overrides {
  std::string method, output, name, problem;
  int K = 0;
  double epsilon = -1.0, step = -1.0;
  long seed = -1;
  bool no_certificate = false, no_svg = false;

  void attach(CLI::App* app) {
    app->add_option("--method", method, "Override method");
    app->add_option("--K", K, "Override horizon");
    app->add_option("--epsilon", epsilon, "Override early-stop threshold");
    app->add_option("--step", step, "Override GDA step / KM weight");
    app->add_option("--seed", seed, "Override seed");
    app->add_option("--output", output, "Override output root");
    app->add_option("--name", name, "Override run name");
    app->add_option("--problem", problem, "Override problem file");
    app->add_flag("--no-certificate", no_certificate, "Skip the certificate");
    app->add_flag("--no-svg", no_svg, "Skip the SVG plot");
  }

  KvDoc doc() const {
    KvDoc d;
    if (!method.empty()) d.set("method", method);
    if (K != 0) d.set_int("K", K);
    if (epsilon >= 0.0) d.set_double("epsilon", epsilon);
    if (step >= 0.0) d.set_double("step", step);
    if (seed >= 0) d.set_int("seed", seed);
    if (!output.empty()) d.set("output", output);
    if (!name.empty()) d.set("name", name);
    if (!problem.empty()) d.set("problem", problem);
    if (no_certificate) d.set_bool("certificate", false);
    if (no_svg) d.set_bool("svg", false);
    return d;
  }
};

std::vector<int> parse_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stoi(item));
  return out;
}

int cmd_run(const std::string& path, const Overrides& ov) {
  const ExperimentConfig cfg = ExperimentConfig::from_file(path, ov.doc());
  const RunSummary s = run_config(cfg);
  std::cout << s.to_doc().serialize();
  std::cout << "# output: " << s.output_dir << '\n';
  if (s.exit_code == kExitCertificateFailed) {
    std::cerr << "certificate violated: worst violation " << format_double(*s.worst_violation)
              << " (tolerance " << format_double(*s.tolerance) << ")\n";
  }
  return s.exit_code;
}

int cmd_check(const std::string& path, const std::string& tampering, const Overrides& ov) {
  const ExperimentConfig cfg = ExperimentConfig::from_file(path, ov.doc());
  return check_config(cfg, tampering, std::cout);
}

int cmd_sweep(const std::string& method, double param, int block, int K, double L, int grid,
              int threads, const std::string& out_path) {
  const Method m = parse_method(method);
  if (m == Method::GDA && std::isnan(param)) param = 1.0 / L;
  if (m == Method::KM && std::isnan(param)) param = 0.5;
  const ScliMethod scli = method_to_scli(m, param, block, L);
  const HardInstanceSweep s = sweep_hard_instances(scli, K, L, grid, threads);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot open " + out_path);
    write_sweep_csv(s, out);
  }
  std::cout << "sup=" << format_double(s.sup) << " at eta=" << format_double(s.sup_eta)
            << " bound=" << format_double(s.theorem_bound)
            << " margin=" << format_double(s.margin) << " p=" << s.p << " K=" << K << '\n';
  return s.bound_satisfied ? kExitOk : kExitCertificateFailed;
}

int cmd_compare(const std::vector<std::string>& traces, const std::string& config,
                const std::string& horizons, bool use_norm) {
  std::vector<EnvelopeSeries> series;
  for (const std::string& path : traces) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    const TraceTable t = parse_trace_csv(in);
    EnvelopeSeries s;
    s.label = path;
    double running = std::numeric_limits<double>::infinity();
    for (const TraceRow& r : t.rows) {
      running = std::min(running, use_norm ? r.grad_norm : r.grad_norm_sq);
      s.k.push_back(r.k);
      s.measured.push_back(running);
      s.bound.push_back(r.envelope ? *r.envelope : std::nan(""));
    }
    series.push_back(std::move(s));
  }
  if (!config.empty()) {
    // Terminal norm of separate runs, one per horizon.
    const ExperimentConfig base = ExperimentConfig::from_file(config);
    EnvelopeSeries s;
    s.label = config;
    for (int K : parse_list(horizons)) {
      ExperimentConfig cfg = base;
      cfg.K = K;
      cfg.validate();
      const Trace t = run_method(cfg, resolve_problem(cfg));
      const double n2 = t.back().norm_sq;
      s.k.push_back(K);
      s.measured.push_back(use_norm ? std::sqrt(n2) : n2);
    }
    series.push_back(std::move(s));
  }
  if (series.empty()) throw InvalidArgument("compare: give trace files or --config");
  write_comparison(compare_envelopes(series), std::cout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-order methods for small gradients, with potential-function certificates"};
  app.require_subcommand(1);

  Overrides run_ov, check_ov;
  std::string run_cfg, check_cfg, tampering;
  bool list_tamperings = false;
  auto* run = app.add_subcommand("run", "Run a config and write trace, certificate and summary");
  run->add_option("config", run_cfg, "Config file")->required()->check(CLI::ExistingFile);
  run_ov.attach(run);

  auto* check = app.add_subcommand("check", "Run a config and certify the trace");
  check->add_option("config", check_cfg, "Config file")->check(CLI::ExistingFile);
  check->add_option("--tamper", tampering, "Corrupt the trace before certifying");
  check->add_flag("--list-tamperings", list_tamperings, "Print tampering names per method");
  check_ov.attach(check);

  std::string sweep_method = "gda", sweep_out;
  double sweep_param = std::nan(""), sweep_L = 1.0;
  int sweep_block = 1, sweep_K = 16, sweep_grid = 10000, sweep_threads = 0;
  auto* sweep = app.add_subcommand("sweep-lb", "Sweep the rotation hard instances");
  sweep->add_option("--method", sweep_method, "gda, km or halpern");
  sweep->add_option("--param", sweep_param, "GDA eta or KM alpha");
  sweep->add_option("--block", sweep_block, "Halpern steps per stationary block");
  sweep->add_option("--K", sweep_K, "Number of stationary steps");
  sweep->add_option("--L", sweep_L, "Cocoercivity constant");
  sweep->add_option("--grid", sweep_grid, "Grid size (>= 1000)");
  sweep->add_option("--threads", sweep_threads, "Worker threads (0 = all cores)");
  sweep->add_option("--output", sweep_out, "CSV path");

  std::vector<std::string> cmp_traces;
  std::string cmp_config, cmp_horizons = "8,16,32,64,128,256";
  bool cmp_norm = false;
  auto* compare = app.add_subcommand("compare", "Fit log-log slopes of gradient norms");
  compare->add_option("traces", cmp_traces, "Trace CSV files");
  compare->add_option("--config", cmp_config, "Config run once per horizon");
  compare->add_option("--horizons", cmp_horizons, "Comma-separated horizons for --config");
  compare->add_flag("--norm", cmp_norm, "Fit the norm instead of its square");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_cfg, run_ov);
    if (*check) {
      if (list_tamperings) {
        for (Method m : {Method::GD, Method::FGM, Method::OGMG, Method::FgmThenOgmg, Method::GDA,
                         Method::KM, Method::Halpern}) {
          std::cout << method_name(m) << ':';
          for (const std::string& t : tamperings_for(m)) std::cout << ' ' << t;
          std::cout << '\n';
        }
        return kExitOk;
      }
      if (check_cfg.empty()) throw InvalidArgument("check: config file required");
      return cmd_check(check_cfg, tampering, check_ov);
    }
    if (*sweep) {
      return cmd_sweep(sweep_method, sweep_param, sweep_block, sweep_K, sweep_L, sweep_grid,
                       sweep_threads, sweep_out);
    }
    if (*compare) return cmd_compare(cmp_traces, cmp_config, cmp_horizons, cmp_norm);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericFault& e) {
    std::cerr << "numeric fault: " << e.what() << '\n';
    return kExitNumericFault;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}
