#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "fluxdiff/errors.hpp"
#include "fluxdiff/euler.hpp"
#include "fluxdiff/field.hpp"
#include "fluxdiff/geometry.hpp"

namespace fluxdiff {

// Five-stage fourth-order low-storage (2N) Runge-Kutta scheme:
//   du <- A_s du + dt f(u, t + c_s dt),  u <- u + B_s du.
struct RKMethod {
  std::string name;
  std::array<double, 5> A;
  std::array<double, 5> B;
  std::array<double, 5> c;

  static constexpr int stages = 5;
};

namespace detail {

// Butcher coefficients of a 2N scheme: a_ij = sum_{s=j}^{i-1} B_s prod_{m=j+1}^{s} A_m.
inline std::array<std::array<long double, 6>, 6> butcher_from_2n(const RKMethod& m) {
  std::array<std::array<long double, 6>, 6> a{};
  for (int i = 1; i <= 5; ++i)
    for (int j = 0; j < i; ++j) {
      long double sum = 0.0L;
      for (int s = j; s < i; ++s) {
        long double prod = m.B[s];
        for (int q = j + 1; q <= s; ++q) prod *= m.A[q];
        sum += prod;
      }
      a[i][j] = sum;
    }
  return a;  // row 5 holds the weights b_j
}

}  // namespace detail

// Residuals of the eight order conditions up to order four.
inline std::array<double, 8> order_condition_residuals(const RKMethod& m) {
  const auto a = detail::butcher_from_2n(m);
  std::array<long double, 5> b{}, c{};
  for (int j = 0; j < 5; ++j) b[j] = a[5][j];
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < i; ++j) c[i] += a[i][j];
  std::array<long double, 5> ac{}, ac2{}, aac{};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < i; ++j) {
      ac[i] += a[i][j] * c[j];
      ac2[i] += a[i][j] * c[j] * c[j];
    }
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < i; ++j) aac[i] += a[i][j] * ac[j];
  std::array<long double, 8> s{};
  for (int i = 0; i < 5; ++i) {
    s[0] += b[i];
    s[1] += b[i] * c[i];
    s[2] += b[i] * c[i] * c[i];
    s[3] += b[i] * ac[i];
    s[4] += b[i] * c[i] * c[i] * c[i];
    s[5] += b[i] * c[i] * ac[i];
    s[6] += b[i] * ac2[i];
    s[7] += b[i] * aac[i];
  }
  const long double exact[8] = {1.0L, 0.5L, 1.0L / 3, 1.0L / 6, 0.25L, 0.125L, 1.0L / 12, 1.0L / 24};
  std::array<double, 8> r{};
  for (int k = 0; k < 8; ++k) r[k] = static_cast<double>(std::fabs(s[k] - exact[k]));
  return r;
}

inline void check_order_conditions(const RKMethod& m, double tol = 1e-14) {
  const auto r = order_condition_residuals(m);
  for (int k = 0; k < 8; ++k)
    if (!(r[k] < tol)) {
      throw ParameterError(m.name + ": order condition " + std::to_string(k) + " violated by " + std::to_string(r[k]));
    }
  const auto a = detail::butcher_from_2n(m);
  for (int i = 0; i < 5; ++i) {
    long double ci = 0.0L;
    for (int j = 0; j < i; ++j) ci += a[i][j];
    if (std::fabs(ci - m.c[i]) > tol) throw ParameterError(m.name + ": stage times inconsistent with A, B");
  }
}

inline RKMethod carpenter_kennedy_4_5() {
  RKMethod m{"carpenter_kennedy_2n54",
             {0.0, -567301805773.0 / 1357537059087.0, -2404267990393.0 / 2016746695238.0,
              -3550918686646.0 / 2091501179385.0, -1275806237668.0 / 842570457699.0},
             {1432997174477.0 / 9575080441755.0, 5161836677717.0 / 13612068292357.0,
              1720146321549.0 / 2090206949498.0, 3134564353537.0 / 4481467310338.0,
              2277821191437.0 / 14882151754819.0},
             {0.0, 1432997174477.0 / 9575080441755.0, 2526269341429.0 / 6820363962896.0,
              2006345519317.0 / 3224310063776.0, 2802321613138.0 / 2924317926251.0}};
  check_order_conditions(m);
  return m;
}

// Flat views so the integrator works on solution fields and plain vectors.
inline std::span<double> flat(std::vector<double>& v) { return v; }
inline std::span<const double> flat(const std::vector<double>& v) { return v; }

template <int Dim>
std::span<double> flat(SolutionField<Dim>& f) {
  return {f.values.empty() ? nullptr : f.values.front().data(), f.values.size() * (Dim + 2)};
}
template <int Dim>
std::span<const double> flat(const SolutionField<Dim>& f) {
  return {f.values.empty() ? nullptr : f.values.front().data(), f.values.size() * (Dim + 2)};
}

// One step; rhs(u, t) returns du/dt with the shape of u. Exactly five RHS
// evaluations. Throws DivergenceError if a stage produces a non-finite value,
// leaving `u` partially updated (callers keep their own copy).
template <typename Field, typename Rhs>
void rk_step(Field& u, double t, double dt, Rhs&& rhs, const RKMethod& m, long step = 0) {
  if (!(dt > 0.0)) throw ParameterError("time step must be positive, got " + std::to_string(dt));
  Field du = u;
  auto d = flat(du);
  std::fill(d.begin(), d.end(), 0.0);
  for (int s = 0; s < RKMethod::stages; ++s) {
    const Field k = rhs(static_cast<const Field&>(u), t + m.c[s] * dt);
    const auto kf = flat(k);
    auto uf = flat(u);
    if (kf.size() != uf.size()) throw ParameterError("rhs returned a field of the wrong size");
    bool finite = true;
    for (std::size_t i = 0; i < uf.size(); ++i) {
      d[i] = m.A[s] * d[i] + dt * kf[i];
      uf[i] += m.B[s] * d[i];
      finite &= std::isfinite(uf[i]);
    }
    if (!finite) {
      std::ostringstream msg;
      msg << "non-finite state in step " << step << ", stage " << s << " (t=" << t << ", dt=" << dt << ")";
      throw DivergenceError(msg.str());
    }
  }
}

struct StepController {
  double cfl = 0.5;

  explicit StepController(double c = 0.5) : cfl(c) {
    if (!(cfl > 0.0)) throw ParameterError("cfl must be positive, got " + std::to_string(cfl));
  }
};

// dt = cfl * min_nodes h_i / (lambda_i (2p + 1)) with h_i = 2 J_i^{1/d}
// (the element width on Cartesian meshes) and lambda_i = |v| + c.
template <int Dim>
double stable_dt(const SolutionField<Dim>& u, const MeshGeometry<Dim>& g, const GasParams& gas,
                 const StepController& ctl) {
  double best = INFINITY;
  const int nn = u.nodes_per_element;
  for (int e = 0; e < u.num_elements; ++e)
    for (int i = 0; i < nn; ++i) {
      const auto q = cons2prim<Dim>(u(e, i), gas);
      const double lambda = norm<Dim>(q.v) + sound_speed<Dim>(q, gas);
      const double h = 2.0 * std::pow(g.elements[e].metrics.J[i], 1.0 / Dim);
      best = std::min(best, h / lambda);
    }
  return ctl.cfl * best / (2 * g.degree + 1);
}

struct StepInfo {
  long step = 0;  // 1-based index of the completed step
  double t = 0.0;
  double dt = 0.0;
};

struct IntegrationConfig {
  long n_steps = -1;   // fixed step count if >= 0
  double t_end = 0.0;  // otherwise integrate up to t_end
};

struct IntegrationResult {
  long steps = 0;
  long rhs_evals = 0;
  double t = 0.0;
};

// Integrates u in place from t0. dt_of(u) gives the step size for the next
// step (clipped to hit t_end). on_step(info, u) runs after every step. On
// divergence u is restored to the last completed step before rethrowing.
template <typename Field, typename Rhs, typename DtFn, typename OnStep>
IntegrationResult integrate(Field& u, double t0, const IntegrationConfig& cfg, const RKMethod& m, Rhs&& rhs,
                            DtFn&& dt_of, OnStep&& on_step) {
  const bool fixed = cfg.n_steps >= 0;
  if (!fixed && !(cfg.t_end >= t0)) throw ParameterError("t_end must not precede the start time");
  IntegrationResult r;
  r.t = t0;
  long evals = 0;
  auto counted = [&](const Field& v, double t) {
    ++evals;
    return rhs(v, t);
  };
  while (fixed ? r.steps < cfg.n_steps : r.t < cfg.t_end) {
    double dt = dt_of(static_cast<const Field&>(u));
    if (!fixed && r.t + dt >= cfg.t_end) dt = cfg.t_end - r.t;
    if (!(dt > 0.0)) break;
    Field last = u;
    try {
      rk_step(u, r.t, dt, counted, m, r.steps + 1);
    } catch (const DivergenceError&) {
      u = std::move(last);
      r.rhs_evals = evals;
      throw;
    }
    ++r.steps;
    r.t = (!fixed && r.t + dt >= cfg.t_end) ? cfg.t_end : r.t + dt;
    r.rhs_evals = evals;
    on_step(StepInfo{r.steps, r.t, dt}, static_cast<const Field&>(u));
  }
  return r;
}

template <typename Field, typename Rhs, typename DtFn>
IntegrationResult integrate(Field& u, double t0, const IntegrationConfig& cfg, const RKMethod& m, Rhs&& rhs,
                            DtFn&& dt_of) {
  return integrate(u, t0, cfg, m, rhs, dt_of, [](const StepInfo&, const Field&) {});
}

}  // namespace fluxdiff
