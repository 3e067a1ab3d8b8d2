#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

#include "fluxdiff/harness/csv.hpp"
#include "fluxdiff/harness/problem.hpp"
#include "fluxdiff/timeint.hpp"

namespace fluxdiff::harness {

struct RunSummary {
  long steps = 0;
  double t = 0.0;
  long rhs_evals = 0;         // integrator evaluations only, monitor calls excluded
  double max_entropy = 0.0;   // max over monitored states of |normalized dS/dt|
  double max_conservation = 0.0;
  double max_integral_drift = 0.0;  // max_c |sum MJ u_c(T) - sum MJ u_c(0)| / max(1, |sum MJ u_c(0)|)
  double seconds = 0.0;
};

struct EntropySample {
  double entropy_normalized = 0.0;  // signed
  double conservation = 0.0;
};

template <int Dim>
EntropySample sample_rates(const Problem<Dim>& pr, const RhsConfig& rc, const SolutionField<Dim>& u) {
  const auto du = rhs<Dim>(u, pr.geometry, pr.ops, rc, pr.gas);
  return {entropy_rate<Dim>(u, du, pr.mj, pr.gas).signed_normalized(),
          conservation_rate<Dim>(du, pr.mj).max_normalized()};
}

// Integrates u in place. With a writer, one monitor row
// `step,t,dt,dSdt_normalized` is written for the initial state and after every step.
template <int Dim>
RunSummary run_problem(const RunConfig& c, const Problem<Dim>& pr, SolutionField<Dim>& u, CsvWriter* monitor) {
  RunSummary s;
  const RKMethod method = carpenter_kennedy_4_5();
  const StepController ctl(c.cfl);
  const auto before = integral<Dim>(u, pr.mj);

  auto record = [&](long step, double t, double dt, const SolutionField<Dim>& v) {
    if (!monitor) return;
    const auto r = sample_rates<Dim>(pr, c.rhs, v);
    s.max_entropy = std::max(s.max_entropy, std::abs(r.entropy_normalized));
    s.max_conservation = std::max(s.max_conservation, r.conservation);
    monitor->row(step, t, dt, r.entropy_normalized);
  };
  record(0, 0.0, 0.0, u);

  IntegrationConfig ic;
  ic.n_steps = c.effective_steps();
  ic.t_end = c.t_end;
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = integrate(
      u, 0.0, ic, method, [&](const SolutionField<Dim>& v, double) { return rhs<Dim>(v, pr.geometry, pr.ops, c.rhs, pr.gas); },
      [&](const SolutionField<Dim>& v) { return stable_dt<Dim>(v, pr.geometry, pr.gas, ctl); },
      [&](const StepInfo& info, const SolutionField<Dim>& v) { record(info.step, info.t, info.dt, v); });
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  s.steps = res.steps;
  s.t = res.t;
  s.rhs_evals = res.rhs_evals;
  const auto after = integral<Dim>(u, pr.mj);
  for (int k = 0; k < Dim + 2; ++k) {
    s.max_integral_drift = std::max(s.max_integral_drift,
                                    std::abs(after[k] - before[k]) / std::max(1.0, std::abs(before[k])));
  }
  return s;
}

}  // namespace fluxdiff::harness
