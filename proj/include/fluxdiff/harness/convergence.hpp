#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fluxdiff/harness/csv.hpp"
#include "fluxdiff/harness/problem.hpp"
#include "fluxdiff/harness/run.hpp"

namespace fluxdiff::harness {

struct ConvergenceRow {
  int level = 0;
  int elements = 0;
  double h = 0.0;
  double t = 0.0;
  double l2_rho = 0.0;
  double l2_rhoe = 0.0;
  double order_rho = std::numeric_limits<double>::quiet_NaN();
  double order_rhoe = std::numeric_limits<double>::quiet_NaN();
};

inline constexpr const char* kConvergenceHeader = "level,h,l2_rho,l2_rhoe,order_rho,order_rhoe";

// One advection period of the vortex unless n_steps or t_end is set.
inline double default_end_time(const RunConfig& c) {
  if (c.t_end >= 0.0) return c.t_end;
  return (kDomainHi - kDomainLo) / 1.0;  // |v0_x| = |v0_y| = 1
}

template <int Dim>
std::vector<ConvergenceRow> convergence_study(const RunConfig& c, CsvWriter* csv = nullptr) {
  if (c.ic != InitialCondition::isentropic_vortex && c.ic != InitialCondition::free_stream) {
    throw ConfigError("ic: convergence study needs an exact solution (isentropic_vortex or free_stream)");
  }
  RunConfig rc = c;
  rc.t_end = c.n_steps >= 0 ? -1.0 : default_end_time(c);
  std::vector<ConvergenceRow> rows;
  for (std::size_t k = 0; k < c.levels.size(); ++k) {
    const int n = c.levels[k];
    const auto pr = make_problem<Dim>(rc, n);
    SolutionField<Dim> u = pr.u0;
    RunSummary s;
    try {
      s = run_problem<Dim>(rc, pr, u, nullptr);
    } catch (const DivergenceError& e) {
      throw DivergenceError("level " + std::to_string(k) + " (" + std::to_string(n) + " elements): " + e.what());
    }
    const auto err = l2_error<Dim>(u, pr.geometry, pr.mj, [&](const Vec<Dim>& x) {
      return *exact_state<Dim>(rc, x, s.t, pr.gas);
    });
    ConvergenceRow row;
    row.level = static_cast<int>(k);
    row.elements = n;
    row.h = (kDomainHi - kDomainLo) / n;
    row.t = s.t;
    row.l2_rho = err[0];
    row.l2_rhoe = err[Dim + 1];
    if (!rows.empty()) {
      const auto& prev = rows.back();
      const double ratio = std::log(prev.h / row.h);
      row.order_rho = std::log(prev.l2_rho / row.l2_rho) / ratio;
      row.order_rhoe = std::log(prev.l2_rhoe / row.l2_rhoe) / ratio;
    }
    rows.push_back(row);
    if (csv) csv->row(row.level, row.h, row.l2_rho, row.l2_rhoe, row.order_rho, row.order_rhoe);
  }
  return rows;
}

}  // namespace fluxdiff::harness
