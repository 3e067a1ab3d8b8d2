// fluxdiff: run, convergence, pid, microbench and verify drivers.
//
//   fluxdiff run [-c FILE] [-o DIR] [--threads N] [key=value ...]
//   fluxdiff convergence ...
//   fluxdiff pid ... [--degrees 3,4,5]
//   fluxdiff microbench ...
//   fluxdiff verify [--only 1,5,10] [--no-timing]
//
// Settings are applied in order: defaults, config file, FLUXDIFF_OUTPUT_DIR,
// then command-line flags and key=value overrides.
// Exit codes: 0 success, 1 runtime failure, 2 configuration error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifdef FLUXDIFF_SYSTEM_CLI11
#include <CLI/CLI.hpp>
#else
#include "CLI11.hpp"
#endif
#include "fluxdiff/harness.hpp"

namespace {

using namespace fluxdiff;
using namespace fluxdiff::harness;

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string config_file;
  std::string output;
  int threads = 0;
  std::vector<std::string> overrides;
  std::vector<int> degrees;
  std::vector<int> only;
  bool no_timing = false;
};

RunConfig resolve_config(const Options& o) {
  RunConfig c;
  if (!o.config_file.empty()) load_config_file(c, o.config_file);
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) c.output = env;
  for (const auto& a : o.overrides) apply_assignment(c, a);
  if (!o.output.empty()) c.output = o.output;
  if (o.threads > 0) c.rhs.threads = o.threads;
  validate(c);
  return c;
}

void write_report_header(std::ostream& out, const std::string& command, const RunConfig& c) {
  out << "# fluxdiff " << command << "\n"
      << "# " << describe(c) << "\n"
      << "# sinusoidal initial condition: rho = 2 + sin(pi x / 5) sin(pi y / 5), p = rho^gamma, v = 0\n"
      << "# fixed-step runs default to 90 steps of the 5-stage 4th-order low-storage RK method "
         "(450 RHS evaluations)\n";
}

std::ofstream open_report(const RunConfig& c, const std::string& command) {
  const auto path = output_path(c.output, command + "_report.txt");
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_report_header(out, command, c);
  return out;
}

int cmd_run(const RunConfig& c) {
  auto report = open_report(c, "run");
  std::optional<CsvWriter> monitor;
  if (c.monitor) monitor.emplace(output_path(c.output, "entropy_monitor.csv"), "step,t,dt,dSdt_normalized");
  const RunSummary s = dispatch_dim(c.dim, [&]<int D>() {
    const auto pr = make_problem<D>(c);
    SolutionField<D> u = pr.u0;
    return run_problem<D>(c, pr, u, monitor ? &*monitor : nullptr);
  });
  report << "steps " << s.steps << "\nt " << s.t << "\nrhs_evals " << s.rhs_evals << "\nseconds " << s.seconds
         << "\nmax_integral_drift " << s.max_integral_drift << "\n";
  if (monitor) report << "max_abs_dSdt_normalized " << s.max_entropy << "\nmax_conservation " << s.max_conservation << "\n";
  std::printf("run: %ld steps to t=%.6g, %ld RHS evaluations, %.3f s\n", s.steps, s.t, s.rhs_evals, s.seconds);
  if (monitor) std::printf("max |dS/dt| (normalized) %.3e, written to %s\n", s.max_entropy, monitor->path().c_str());
  return 0;
}

int cmd_convergence(const RunConfig& c) {
  auto report = open_report(c, "convergence");
  CsvWriter csv(output_path(c.output, "convergence.csv"), kConvergenceHeader);
  const auto rows = dispatch_dim(c.dim, [&]<int D>() { return convergence_study<D>(c, &csv); });
  for (const auto& r : rows) {
    char line[160];
    std::snprintf(line, sizeof line, "level %d elements %d h %.4g t %.6g l2_rho %.3e l2_rhoe %.3e order %.3f %.3f",
                  r.level, r.elements, r.h, r.t, r.l2_rho, r.l2_rhoe, r.order_rho, r.order_rhoe);
    report << line << "\n";
    std::printf("%s\n", line);
  }
  return 0;
}

int cmd_pid(const RunConfig& c, const std::vector<int>& degrees) {
  if (c.t_end >= 0.0) throw ConfigError("t_end: pid times a fixed step count; set n_steps instead");
  auto report = open_report(c, "pid");
  CsvWriter csv(output_path(c.output, "pid.csv"), kPidHeader);
  std::vector<int> ps = degrees.empty() ? std::vector<int>{c.degree} : degrees;
  for (int p : ps) {
    RunConfig rc = c;
    rc.degree = p;
    validate(rc);
    const long steps = rc.effective_steps();
    const PidResult r = dispatch_dim(rc.dim, [&]<int D>() { return measure_pid<D>(rc, steps, rc.repeats); });
    const std::string scheme = std::string(fluxdiff::to_string(rc.rhs.volume_scheme)) + (rc.rhs.batched ? "+batched" : "");
    csv.row(rc.dim, p, to_string(rc.mesh), scheme, fluxdiff::to_string(rc.rhs.volume_flux), r.n_rhs, r.dofs, r.pid_mean,
            r.pid_std);
    char line[160];
    std::snprintf(line, sizeof line, "d=%d p=%d %s %s: PID %.3e +- %.2e s (%ld RHS, %llu DOFs)", rc.dim, p,
                  scheme.c_str(), std::string(fluxdiff::to_string(rc.rhs.volume_flux)).c_str(), r.pid_mean, r.pid_std,
                  r.n_rhs, static_cast<unsigned long long>(r.dofs));
    report << line << "\n";
    std::printf("%s\n", line);
  }
  return 0;
}

int cmd_microbench(const RunConfig& c) {
  auto report = open_report(c, "microbench");
  CsvWriter csv(output_path(c.output, "microbench.csv"), kMicrobenchHeader);
  const GasParams gas(c.gamma);
  for (const auto& name : c.fluxes) {
    const FluxKind kind = flux_kind_from_string(name);
    const auto results = dispatch_dim(c.dim, [&]<int D>() {
      return microbench_forms<D>(kind, c.samples, c.repeats, c.seed, gas);
    });
    for (const auto& r : results) {
      csv.row(fluxdiff::to_string(r.kind), to_string(r.form), r.dim, r.ns_mean, r.ns_std, r.n_samples);
      char line[128];
      std::snprintf(line, sizeof line, "%-12s %-12s d=%d %8.2f +- %.2f ns", std::string(fluxdiff::to_string(r.kind)).c_str(),
                    to_string(r.form).c_str(), r.dim, r.ns_mean, r.ns_std);
      report << line << "\n";
      std::printf("%s\n", line);
    }
  }
  return 0;
}

int cmd_verify(const RunConfig& c, const Options& o) {
  auto report = open_report(c, "verify");
  VerifyOptions opt;
  opt.only = o.only;
  opt.timing = !o.no_timing;
  const auto results = run_verification(opt, [&](const CriterionResult& r) {
    const std::string line = format_line(r);
    report << line << "\n" << std::flush;
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
  });
  return all_passed(results) ? 0 : kExitRuntime;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("-c,--config", o.config_file, "key = value configuration file");
  sub->add_option("-o,--output", o.output, "output directory (overrides config and FLUXDIFF_OUTPUT_DIR)");
  sub->add_option("overrides", o.overrides, "key=value settings applied after the config file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-stable flux-differencing DG kernels for the compressible Euler equations"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "integrate one configuration, writing the entropy monitor");
  auto* conv = app.add_subcommand("convergence", "L2 errors and observed orders over mesh levels");
  auto* pid = app.add_subcommand("pid", "performance index: seconds per RHS per DOF, single-threaded");
  auto* mb = app.add_subcommand("microbench", "ns per two-point flux evaluation for each flux form");
  auto* ver = app.add_subcommand("verify", "property suite; nonzero exit on any failure");
  for (auto* s : {run, conv, pid, mb, ver}) add_common(s, o);
  for (auto* s : {run, conv}) s->add_option("-t,--threads", o.threads, "element-parallel RHS threads")->check(CLI::PositiveNumber);
  pid->add_option("--degrees", o.degrees, "polynomial degrees to sweep")->delimiter(',')->allow_extra_args(false);
  ver->add_option("--only", o.only, "criterion ids to run")->delimiter(',')->allow_extra_args(false);
  ver->add_flag("--no-timing", o.no_timing, "skip the timing-trend criterion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const RunConfig c = resolve_config(o);
    if (*run) return cmd_run(c);
    if (*conv) return cmd_convergence(c);
    if (*pid) return cmd_pid(c, o.degrees);
    if (*mb) return cmd_microbench(c);
    return cmd_verify(c, o);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
}
