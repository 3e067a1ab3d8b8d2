#pragma once

#include <algorithm>
#include <chrono>
#include <iterator>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "fluxdiff/fluxes.hpp"
#include "fluxdiff/harness/problem.hpp"
#include "fluxdiff/timeint.hpp"

namespace fluxdiff::harness {

using Clock = std::chrono::steady_clock;

// Smallest observable nonzero step of the clock, never below its nominal period.
inline double clock_resolution() {
  static const double res = [] {
    double best = std::chrono::duration<double>(Clock::duration(1)).count();
    double observed = 1.0;
    for (int i = 0; i < 200; ++i) {
      const auto a = Clock::now();
      auto b = Clock::now();
      while (b == a) b = Clock::now();
      observed = std::min(observed, std::chrono::duration<double>(b - a).count());
    }
    return std::max(best, observed);
  }();
  return res;
}

inline void check_timed_span(double seconds, const std::string& what) {
  const double res = clock_resolution();
  if (seconds < 1000.0 * res) {
    throw BenchmarkError(what + ": timed span " + std::to_string(seconds) + " s is below 1000 clock ticks (" +
                         std::to_string(res) + " s each); increase the workload");
  }
}

struct Stats {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
};

inline Stats stats_of(const std::vector<double>& x) {
  Stats s;
  if (x.empty()) return s;
  s.mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  if (x.size() > 1) {
    double v = 0.0;
    for (double y : x) v += (y - s.mean) * (y - s.mean);
    s.std = std::sqrt(v / (x.size() - 1));
  }
  return s;
}

struct PidResult {
  double pid_mean = 0.0;  // seconds per RHS per DOF
  double pid_std = 0.0;
  long n_rhs = 0;         // per run
  std::uint64_t dofs = 0;
};

inline constexpr const char* kPidHeader = "d,p,mesh,scheme,flux,n_rhs,dofs,pid_mean,pid_std";

// Each repeat integrates n_steps from the initial state and times only the
// RHS evaluations. One untimed RHS evaluation warms up caches first.
// Always single-threaded.
template <int Dim>
PidResult measure_pid(const RunConfig& c, long n_steps, int repeats = 5) {
  if (n_steps < 1) throw ConfigError("n_steps: PID measurement needs at least one step");
  RunConfig rc = c;
  rc.rhs.threads = 1;
  const auto pr = make_problem<Dim>(rc);
  const RKMethod method = carpenter_kennedy_4_5();
  const StepController ctl(rc.cfl);
  (void)rhs<Dim>(pr.u0, pr.geometry, pr.ops, rc.rhs, pr.gas);

  PidResult r;
  r.dofs = degrees_of_freedom<Dim>(pr);
  std::vector<double> pids;
  for (int k = 0; k < repeats; ++k) {
    SolutionField<Dim> u = pr.u0;
    double timed = 0.0;
    auto timed_rhs = [&](const SolutionField<Dim>& v, double) {
      const auto t0 = Clock::now();
      auto du = rhs<Dim>(v, pr.geometry, pr.ops, rc.rhs, pr.gas);
      timed += std::chrono::duration<double>(Clock::now() - t0).count();
      return du;
    };
    IntegrationConfig ic;
    ic.n_steps = n_steps;
    const auto res = integrate(u, 0.0, ic, method, timed_rhs,
                               [&](const SolutionField<Dim>& v) { return stable_dt<Dim>(v, pr.geometry, pr.gas, ctl); });
    check_timed_span(timed, "pid");
    r.n_rhs = res.rhs_evals;
    pids.push_back(timed / (static_cast<double>(res.rhs_evals) * r.dofs));
  }
  const auto s = stats_of(pids);
  r.pid_mean = s.mean;
  r.pid_std = s.std;
  return r;
}

enum class FluxForm { cartesian, directional, rotated_otf, rotated_pre };

inline std::string to_string(FluxForm f) {
  switch (f) {
    case FluxForm::cartesian: return "cartesian";
    case FluxForm::directional: return "directional";
    case FluxForm::rotated_otf: return "rotated_otf";
    case FluxForm::rotated_pre: return "rotated_pre";
  }
  return "?";
}

inline constexpr FluxForm kAllFluxForms[] = {FluxForm::cartesian, FluxForm::directional, FluxForm::rotated_pre,
                                             FluxForm::rotated_otf};

struct MicrobenchResult {
  FluxKind kind{};
  FluxForm form{};
  int dim = 0;
  double ns_mean = 0.0;
  double ns_std = 0.0;
  long n_samples = 0;
};

inline constexpr const char* kMicrobenchHeader = "flux,form,d,ns_mean,ns_std,n_samples";

template <int Dim>
struct FluxSamples {
  std::vector<State<Dim>> left, right;
  std::vector<Vec<Dim>> normal;             // random unit directions
  std::vector<RotationFrame<Dim>> frames;   // frames for `normal`
  std::vector<int> axis;                    // Cartesian direction
};

// rho, p in [1, 2], velocity components in [-1, 1], drawn before any timing.
template <int Dim>
FluxSamples<Dim> make_flux_samples(long n, std::uint64_t seed, const GasParams& gas) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(1.0, 2.0), vel(-1.0, 1.0);
  std::normal_distribution<double> gauss;
  auto state = [&] {
    Primitive<Dim> q;
    q.rho = pos(rng);
    for (int d = 0; d < Dim; ++d) q.v[d] = vel(rng);
    q.p = pos(rng);
    return prim2cons<Dim>(q, gas);
  };
  FluxSamples<Dim> s;
  for (long i = 0; i < n; ++i) {
    s.left.push_back(state());
    s.right.push_back(state());
    Vec<Dim> nv;
    double len = 0.0;
    do {
      for (int d = 0; d < Dim; ++d) nv[d] = gauss(rng);
      len = norm<Dim>(nv);
    } while (len < 1e-3);
    for (int d = 0; d < Dim; ++d) nv[d] /= len;
    s.normal.push_back(nv);
    s.frames.push_back(make_rotation_frame<Dim>(nv));
    s.axis.push_back(static_cast<int>(i % Dim));
  }
  return s;
}

template <int Dim>
FluxVector<Dim> evaluate_form(FluxKind kind, FluxForm form, const FluxSamples<Dim>& s, std::size_t i,
                              const GasParams& gas) {
  switch (form) {
    case FluxForm::cartesian: return flux_cartesian<Dim>(kind, s.left[i], s.right[i], s.axis[i], gas);
    case FluxForm::directional: return flux_directional<Dim>(kind, s.left[i], s.right[i], s.normal[i], gas);
    case FluxForm::rotated_otf: return rotated_flux<Dim>(kind, s.left[i], s.right[i], s.normal[i], gas);
    case FluxForm::rotated_pre: return rotated_flux<Dim>(kind, s.left[i], s.right[i], s.frames[i], gas);
  }
  return {};
}

// Largest relative deviation of any form from the directional flux on the
// same inputs; Cartesian evaluations are compared at the unit normal.
template <int Dim>
double max_form_deviation(FluxKind kind, const FluxSamples<Dim>& s, const GasParams& gas) {
  double worst = 0.0;
  for (std::size_t i = 0; i < s.left.size(); ++i) {
    const auto ref_n = flux_directional<Dim>(kind, s.left[i], s.right[i], s.normal[i], gas);
    const auto ref_e = flux_directional<Dim>(kind, s.left[i], s.right[i], fluxdiff::detail::unit_vector<Dim>(s.axis[i]), gas);
    for (FluxForm form : kAllFluxForms) {
      const auto f = evaluate_form<Dim>(kind, form, s, i, gas);
      const auto& ref = form == FluxForm::cartesian ? ref_e : ref_n;
      double diff = 0.0, scale = 0.0;
      for (int c = 0; c < Dim + 2; ++c) {
        diff = std::max(diff, std::abs(f[c] - ref[c]));
        scale = std::max(scale, std::abs(ref[c]));
      }
      worst = std::max(worst, diff / scale);
    }
  }
  return worst;
}

namespace detail {

template <int Dim>
FluxSamples<Dim> checked_flux_samples(FluxKind kind, long n_samples, std::uint64_t seed, const GasParams& gas) {
  if (n_samples < 1) throw ConfigError("samples: must be positive");
  auto s = make_flux_samples<Dim>(n_samples, seed, gas);
  if (const double dev = max_form_deviation<Dim>(kind, s, gas); !(dev < 1e-13)) {
    throw BenchmarkError("flux forms of " + std::string(fluxdiff::to_string(kind)) + " disagree by " +
                         std::to_string(dev));
  }
  return s;
}

// ns per evaluation for one pass over all samples.
template <int Dim>
double time_form(FluxKind kind, FluxForm form, const FluxSamples<Dim>& s, const GasParams& gas) {
  static volatile double sink = 0.0;
  double acc = 0.0;
  const auto t0 = Clock::now();
  for (std::size_t i = 0; i < s.left.size(); ++i) {
    const auto f = evaluate_form<Dim>(kind, form, s, i, gas);
    acc += f[0] + f[Dim + 1];
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  sink = sink + acc;
  check_timed_span(seconds, "microbench");
  return 1e9 * seconds / static_cast<double>(s.left.size());
}

}  // namespace detail

// ns per flux evaluation; throws BenchmarkError when the forms disagree by
// more than 1e-13 on the benchmark's own inputs.
template <int Dim>
MicrobenchResult microbench_flux(FluxKind kind, FluxForm form, long n_samples, int repeats = 5,
                                 std::uint64_t seed = 1, const GasParams& gas = GasParams(1.4)) {
  const auto s = detail::checked_flux_samples<Dim>(kind, n_samples, seed, gas);
  (void)detail::time_form<Dim>(kind, form, s, gas);
  std::vector<double> ns;
  for (int r = 0; r < repeats; ++r) ns.push_back(detail::time_form<Dim>(kind, form, s, gas));
  const auto st = stats_of(ns);
  return {kind, form, Dim, st.mean, st.std, n_samples};
}

// All forms on the same samples, interleaved within each repeat so that
// clock-frequency drift affects every form alike. Results follow kAllFluxForms.
template <int Dim>
std::vector<MicrobenchResult> microbench_forms(FluxKind kind, long n_samples, int repeats = 5,
                                               std::uint64_t seed = 1, const GasParams& gas = GasParams(1.4)) {
  const auto s = detail::checked_flux_samples<Dim>(kind, n_samples, seed, gas);
  constexpr std::size_t nf = std::size(kAllFluxForms);
  std::vector<std::vector<double>> ns(nf);
  for (std::size_t f = 0; f < nf; ++f) (void)detail::time_form<Dim>(kind, kAllFluxForms[f], s, gas);
  for (int r = 0; r < repeats; ++r) {
    for (std::size_t f = 0; f < nf; ++f) ns[f].push_back(detail::time_form<Dim>(kind, kAllFluxForms[f], s, gas));
  }
  std::vector<MicrobenchResult> out;
  for (std::size_t f = 0; f < nf; ++f) {
    const auto st = stats_of(ns[f]);
    out.push_back({kind, kAllFluxForms[f], Dim, st.mean, st.std, n_samples});
  }
  return out;
}

}  // namespace fluxdiff::harness
