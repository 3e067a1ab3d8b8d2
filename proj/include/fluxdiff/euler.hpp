#pragma once

// Compressible Euler physics for a perfect gas: state conversions, physical
// fluxes, the entropy pair and wave speeds. States are stored as plain arrays
// (rho, rho*v_1, ..., rho*v_d, rho*e) so they can be combined linearly.

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "fluxdiff/errors.hpp"
#include "fluxdiff/flux_counter.hpp"

namespace fluxdiff {

#ifdef FLUXDIFF_DEBUG_CHECKS
inline constexpr bool kDebugChecks = true;
#else
inline constexpr bool kDebugChecks = false;
#endif

template <int Dim>
inline constexpr int kNumVars = Dim + 2;

template <int Dim>
using Vec = std::array<double, Dim>;

// Conserved variables (rho, rho*v, rho*e).
template <int Dim>
using State = std::array<double, Dim + 2>;

// A numerical or physical flux has the same shape as a conserved state.
template <int Dim>
using FluxVector = std::array<double, Dim + 2>;

template <int Dim>
struct Primitive {
  double rho;
  Vec<Dim> v;
  double p;
};

template <int Dim>
struct EntropyVars {
  std::array<double, Dim + 2> w;
};

class GasParams {
 public:
  explicit GasParams(double gamma = 1.4) : gamma_(gamma), inv_gamma_minus_one_(1.0 / (gamma - 1.0)) {
    if (!(gamma > 1.0)) {
      throw ParameterError("gamma must be > 1, got " + std::to_string(gamma));
    }
  }
  double gamma() const { return gamma_; }
  double inv_gamma_minus_one() const { return inv_gamma_minus_one_; }

 private:
  double gamma_;
  double inv_gamma_minus_one_;
};

template <int Dim>
inline double dot(const Vec<Dim>& a, const Vec<Dim>& b) {
  double s = a[0] * b[0];
  for (int i = 1; i < Dim; ++i) s += a[i] * b[i];
  return s;
}

template <int Dim>
inline double norm(const Vec<Dim>& a) {
  return std::sqrt(dot<Dim>(a, a));
}

namespace detail {

template <int Dim>
[[noreturn]] inline void throw_inadmissible(const char* what, const State<Dim>& u, double p) {
  std::ostringstream msg;
  msg.precision(17);
  msg << what << ": rho=" << u[0] << ", rho_e=" << u[Dim + 1] << ", p=" << p;
  throw AdmissibilityError(msg.str());
}

template <int Dim>
inline double pressure(const State<Dim>& u, double gamma) {
  double kinetic = 0.0;
  for (int i = 0; i < Dim; ++i) kinetic += u[1 + i] * u[1 + i];
  return (gamma - 1.0) * (u[Dim + 1] - 0.5 * kinetic / u[0]);
}

// Hot-path conversion; assumes an admissible state.
template <int Dim>
inline Primitive<Dim> cons2prim_unchecked(const State<Dim>& u, const GasParams& gas) {
  Primitive<Dim> q;
  q.rho = u[0];
  const double inv_rho = 1.0 / u[0];
  double v2 = 0.0;
  for (int i = 0; i < Dim; ++i) {
    q.v[i] = u[1 + i] * inv_rho;
    v2 += q.v[i] * u[1 + i];
  }
  q.p = (gas.gamma() - 1.0) * (u[Dim + 1] - 0.5 * v2);
  return q;
}

template <int Dim>
inline void check_admissible(const State<Dim>& u, const GasParams& gas) {
  if (!(u[0] > 0.0)) throw_inadmissible<Dim>("non-positive density", u, NAN);
  const double p = pressure<Dim>(u, gas.gamma());
  if (!(p > 0.0)) throw_inadmissible<Dim>("non-positive pressure", u, p);
}

}  // namespace detail

template <int Dim>
Primitive<Dim> cons2prim(const State<Dim>& u, const GasParams& gas) {
  if (!(u[0] > 0.0)) detail::throw_inadmissible<Dim>("non-positive density", u, NAN);
  Primitive<Dim> q = detail::cons2prim_unchecked<Dim>(u, gas);
  if (!(q.p > 0.0)) detail::throw_inadmissible<Dim>("non-positive pressure", u, q.p);
  return q;
}

template <int Dim>
State<Dim> prim2cons(const Primitive<Dim>& q, const GasParams& gas) {
  if (!(q.rho > 0.0) || !(q.p > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "inadmissible primitive state: rho=" << q.rho << ", p=" << q.p;
    throw AdmissibilityError(msg.str());
  }
  State<Dim> u;
  u[0] = q.rho;
  double v2 = 0.0;
  for (int i = 0; i < Dim; ++i) {
    u[1 + i] = q.rho * q.v[i];
    v2 += q.v[i] * q.v[i];
  }
  u[Dim + 1] = q.p * gas.inv_gamma_minus_one() + 0.5 * q.rho * v2;
  return u;
}

namespace detail {

template <int Dim>
inline FluxVector<Dim> physical_flux_prim(const State<Dim>& u, const Primitive<Dim>& q, int j) {
  FluxVector<Dim> f;
  const double vj = q.v[j];
  f[0] = u[1 + j];
  for (int i = 0; i < Dim; ++i) f[1 + i] = u[1 + j] * q.v[i];
  f[1 + j] += q.p;
  f[Dim + 1] = (u[Dim + 1] + q.p) * vj;
  return f;
}

}  // namespace detail

// Physical flux f^j(u) in coordinate direction j (0-based).
template <int Dim>
FluxVector<Dim> physical_flux(const State<Dim>& u, int j, const GasParams& gas) {
  if constexpr (kDebugChecks) detail::check_admissible<Dim>(u, gas);
  detail::count_one_point();
  return detail::physical_flux_prim<Dim>(u, detail::cons2prim_unchecked<Dim>(u, gas), j);
}

// Sum_j n_j f^j(u), computed from a single conversion to primitives.
template <int Dim>
FluxVector<Dim> physical_flux_directional(const State<Dim>& u, const Vec<Dim>& n, const GasParams& gas) {
  if constexpr (kDebugChecks) detail::check_admissible<Dim>(u, gas);
  detail::count_one_point();
  const Primitive<Dim> q = detail::cons2prim_unchecked<Dim>(u, gas);
  const double vn = dot<Dim>(q.v, n);
  FluxVector<Dim> f;
  f[0] = q.rho * vn;
  for (int i = 0; i < Dim; ++i) f[1 + i] = u[1 + i] * vn + q.p * n[i];
  f[Dim + 1] = (u[Dim + 1] + q.p) * vn;
  return f;
}

template <int Dim>
EntropyVars<Dim> entropy_vars(const State<Dim>& u, const GasParams& gas) {
  const Primitive<Dim> q = cons2prim<Dim>(u, gas);
  const double gamma = gas.gamma();
  const double s = std::log(q.p) - gamma * std::log(q.rho);
  const double rho_p = q.rho / q.p;
  double v2 = 0.0;
  for (int i = 0; i < Dim; ++i) v2 += q.v[i] * q.v[i];
  EntropyVars<Dim> w;
  w.w[0] = (gamma - s) * gas.inv_gamma_minus_one() - 0.5 * rho_p * v2;
  for (int i = 0; i < Dim; ++i) w.w[1 + i] = rho_p * q.v[i];
  w.w[Dim + 1] = -rho_p;
  return w;
}

template <int Dim>
State<Dim> entropy2cons(const EntropyVars<Dim>& w, const GasParams& gas) {
  const double w_last = w.w[Dim + 1];
  if (!(w_last < 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "invalid entropy variables: last component " << w_last << " must be negative";
    throw AdmissibilityError(msg.str());
  }
  const double gamma = gas.gamma();
  const double gm1 = gamma - 1.0;
  // Scaled variables V = (gamma - 1) w correspond to the entropy -rho*s.
  const double v1 = gm1 * w.w[0];
  const double v_last = gm1 * w_last;
  double vv = 0.0;
  for (int i = 0; i < Dim; ++i) {
    const double vi = gm1 * w.w[1 + i];
    vv += vi * vi;
  }
  const double s = gamma - v1 + vv / (2.0 * v_last);
  // rho_iota = p / (gamma - 1), the internal energy density
  const double rho_iota =
      std::pow(gm1 / std::pow(-v_last, gamma), gas.inv_gamma_minus_one()) * std::exp(-s * gas.inv_gamma_minus_one());
  State<Dim> u;
  u[0] = -rho_iota * v_last;
  for (int i = 0; i < Dim; ++i) u[1 + i] = rho_iota * gm1 * w.w[1 + i];
  u[Dim + 1] = rho_iota * (1.0 - vv / (2.0 * v_last));
  if (!(u[0] > 0.0) || !std::isfinite(u[Dim + 1])) {
    detail::throw_inadmissible<Dim>("entropy variables map to an inadmissible state", u, NAN);
  }
  return u;
}

template <int Dim>
struct EntropyPair {
  double entropy;
  Vec<Dim> potential;
};

// Mathematical entropy U = -rho s / (gamma - 1) and flux potentials psi^j = rho v_j.
template <int Dim>
EntropyPair<Dim> entropy_and_potential(const State<Dim>& u, const GasParams& gas) {
  const Primitive<Dim> q = cons2prim<Dim>(u, gas);
  const double s = std::log(q.p) - gas.gamma() * std::log(q.rho);
  EntropyPair<Dim> out;
  out.entropy = -q.rho * s * gas.inv_gamma_minus_one();
  for (int j = 0; j < Dim; ++j) out.potential[j] = u[1 + j];
  return out;
}

template <int Dim>
double sound_speed(const Primitive<Dim>& q, const GasParams& gas) {
  return std::sqrt(gas.gamma() * q.p / q.rho);
}

// Largest signal speed of the two states projected on the unit normal n.
template <int Dim>
double max_wave_speed(const State<Dim>& u_l, const State<Dim>& u_r, const Vec<Dim>& n, const GasParams& gas) {
  const Primitive<Dim> ql = cons2prim<Dim>(u_l, gas);
  const Primitive<Dim> qr = cons2prim<Dim>(u_r, gas);
  const double sl = std::abs(dot<Dim>(ql.v, n)) + sound_speed<Dim>(ql, gas);
  const double sr = std::abs(dot<Dim>(qr.v, n)) + sound_speed<Dim>(qr, gas);
  return std::max(sl, sr);
}

}  // namespace fluxdiff
