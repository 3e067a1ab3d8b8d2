#pragma once

// Two-point numerical fluxes for the compressible Euler equations.
//
// Directional fluxes take a (not necessarily unit) direction n and are linear
// in it, which is how metric-averaged directions arrive on curved elements.
// Cartesian fluxes are the special case n = e_j with the zero terms removed.
// The volume fluxes (Shima et al., Ranocha, central) are also provided on
// primitive variables, optionally with precomputed logarithms, for the
// precomputation kernel variants.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>

#include "fluxdiff/euler.hpp"
#include "fluxdiff/means.hpp"

namespace fluxdiff {

enum class FluxKind { shima_etal, ranocha_ec, central, llf, hll };

inline std::string_view to_string(FluxKind kind) {
  switch (kind) {
    case FluxKind::shima_etal: return "shima_etal";
    case FluxKind::ranocha_ec: return "ranocha_ec";
    case FluxKind::central: return "central";
    case FluxKind::llf: return "llf";
    case FluxKind::hll: return "hll";
  }
  return "?";
}

inline FluxKind flux_kind_from_string(std::string_view name) {
  if (name == "shima_etal" || name == "shima") return FluxKind::shima_etal;
  if (name == "ranocha_ec" || name == "ranocha") return FluxKind::ranocha_ec;
  if (name == "central") return FluxKind::central;
  if (name == "llf") return FluxKind::llf;
  if (name == "hll") return FluxKind::hll;
  throw ConfigError("unknown flux kind '" + std::string(name) + "'");
}

inline bool is_symmetric(FluxKind kind) {
  return kind == FluxKind::shima_etal || kind == FluxKind::ranocha_ec || kind == FluxKind::central;
}

// Primitive state together with log(rho) and log(p).
template <int Dim>
struct PrimitiveLogs {
  Primitive<Dim> q;
  double log_rho;
  double log_p;
};

namespace detail {

template <int Dim>
inline FluxVector<Dim> shima_prim(const Primitive<Dim>& l, const Primitive<Dim>& r, const Vec<Dim>& n,
                                  const GasParams& gas) {
  const double vn_l = dot<Dim>(l.v, n);
  const double vn_r = dot<Dim>(r.v, n);
  const double vn_avg = 0.5 * (vn_l + vn_r);
  const double p_avg = 0.5 * (l.p + r.p);
  const double f_rho = 0.5 * (l.rho + r.rho) * vn_avg;
  const double vv = dot<Dim>(l.v, r.v);  // product mean {{v . v}}
  FluxVector<Dim> f;
  f[0] = f_rho;
  for (int i = 0; i < Dim; ++i) f[1 + i] = f_rho * (0.5 * (l.v[i] + r.v[i])) + p_avg * n[i];
  f[Dim + 1] = f_rho * 0.5 * vv + p_avg * vn_avg * gas.inv_gamma_minus_one() + 0.5 * (l.p * vn_r + r.p * vn_l);
  return f;
}

template <int Dim>
inline FluxVector<Dim> shima_prim_cartesian(const Primitive<Dim>& l, const Primitive<Dim>& r, int j,
                                            const GasParams& gas) {
  const double vn_l = l.v[j];
  const double vn_r = r.v[j];
  const double vn_avg = 0.5 * (vn_l + vn_r);
  const double p_avg = 0.5 * (l.p + r.p);
  const double f_rho = 0.5 * (l.rho + r.rho) * vn_avg;
  const double vv = dot<Dim>(l.v, r.v);
  FluxVector<Dim> f;
  f[0] = f_rho;
  for (int i = 0; i < Dim; ++i) f[1 + i] = f_rho * (0.5 * (l.v[i] + r.v[i]));
  f[1 + j] += p_avg;
  f[Dim + 1] = f_rho * 0.5 * vv + p_avg * vn_avg * gas.inv_gamma_minus_one() + 0.5 * (l.p * vn_r + r.p * vn_l);
  return f;
}

// Energy flux of the Ranocha flux given f_rho, the inverse log mean of
// (rho_r p_l, rho_l p_r), and the normal velocities.
template <int Dim>
inline double ranocha_energy(double f_rho, double inv_log_rho_p, const Primitive<Dim>& l,
                             const Primitive<Dim>& r, double vn_l, double vn_r, const GasParams& gas) {
  const double vv = dot<Dim>(l.v, r.v);
  // 1 / <rho/p>_log = p_l p_r / <rho_r p_l, rho_l p_r>_log
  const double inv_mean_rho_p = (l.p * r.p) * inv_log_rho_p;
  return f_rho * 0.5 * vv + f_rho * inv_mean_rho_p * gas.inv_gamma_minus_one() + 0.5 * (l.p * vn_r + r.p * vn_l);
}

template <int Dim>
inline FluxVector<Dim> ranocha_prim(const Primitive<Dim>& l, const Primitive<Dim>& r, const Vec<Dim>& n,
                                    const GasParams& gas) {
  const double vn_l = dot<Dim>(l.v, n);
  const double vn_r = dot<Dim>(r.v, n);
  const double vn_avg = 0.5 * (vn_l + vn_r);
  const double p_avg = 0.5 * (l.p + r.p);
  const double f_rho = logmean_sym(l.rho, r.rho) * vn_avg;
  const double inv_lm = inv_logmean_sym(r.rho * l.p, l.rho * r.p);
  FluxVector<Dim> f;
  f[0] = f_rho;
  for (int i = 0; i < Dim; ++i) f[1 + i] = f_rho * (0.5 * (l.v[i] + r.v[i])) + p_avg * n[i];
  f[Dim + 1] = ranocha_energy<Dim>(f_rho, inv_lm, l, r, vn_l, vn_r, gas);
  return f;
}

template <int Dim>
inline FluxVector<Dim> ranocha_prim_cartesian(const Primitive<Dim>& l, const Primitive<Dim>& r, int j,
                                              const GasParams& gas) {
  const double vn_l = l.v[j];
  const double vn_r = r.v[j];
  const double vn_avg = 0.5 * (vn_l + vn_r);
  const double p_avg = 0.5 * (l.p + r.p);
  const double f_rho = logmean_sym(l.rho, r.rho) * vn_avg;
  const double inv_lm = inv_logmean_sym(r.rho * l.p, l.rho * r.p);
  FluxVector<Dim> f;
  f[0] = f_rho;
  for (int i = 0; i < Dim; ++i) f[1 + i] = f_rho * (0.5 * (l.v[i] + r.v[i]));
  f[1 + j] += p_avg;
  f[Dim + 1] = ranocha_energy<Dim>(f_rho, inv_lm, l, r, vn_l, vn_r, gas);
  return f;
}

template <int Dim>
inline FluxVector<Dim> ranocha_logs(const PrimitiveLogs<Dim>& l, const PrimitiveLogs<Dim>& r, const Vec<Dim>& n,
                                    const GasParams& gas) {
  const double vn_l = dot<Dim>(l.q.v, n);
  const double vn_r = dot<Dim>(r.q.v, n);
  const double vn_avg = 0.5 * (vn_l + vn_r);
  const double p_avg = 0.5 * (l.q.p + r.q.p);
  const double f_rho = logmean_sym_logs(l.q.rho, r.q.rho, l.log_rho, r.log_rho) * vn_avg;
  const double inv_lm = inv_logmean_sym_logs(r.q.rho * l.q.p, l.q.rho * r.q.p, r.log_rho + l.log_p,
                                             l.log_rho + r.log_p);
  FluxVector<Dim> f;
  f[0] = f_rho;
  for (int i = 0; i < Dim; ++i) f[1 + i] = f_rho * (0.5 * (l.q.v[i] + r.q.v[i])) + p_avg * n[i];
  f[Dim + 1] = ranocha_energy<Dim>(f_rho, inv_lm, l.q, r.q, vn_l, vn_r, gas);
  return f;
}

template <int Dim>
inline FluxVector<Dim> ranocha_logs_cartesian(const PrimitiveLogs<Dim>& l, const PrimitiveLogs<Dim>& r, int j,
                                              const GasParams& gas) {
  const double vn_l = l.q.v[j];
  const double vn_r = r.q.v[j];
  const double vn_avg = 0.5 * (vn_l + vn_r);
  const double p_avg = 0.5 * (l.q.p + r.q.p);
  const double f_rho = logmean_sym_logs(l.q.rho, r.q.rho, l.log_rho, r.log_rho) * vn_avg;
  const double inv_lm = inv_logmean_sym_logs(r.q.rho * l.q.p, l.q.rho * r.q.p, r.log_rho + l.log_p,
                                             l.log_rho + r.log_p);
  FluxVector<Dim> f;
  f[0] = f_rho;
  for (int i = 0; i < Dim; ++i) f[1 + i] = f_rho * (0.5 * (l.q.v[i] + r.q.v[i]));
  f[1 + j] += p_avg;
  f[Dim + 1] = ranocha_energy<Dim>(f_rho, inv_lm, l.q, r.q, vn_l, vn_r, gas);
  return f;
}

// Sum_j n_j f^j without touching the flux counters.
template <int Dim>
inline FluxVector<Dim> euler_flux_prim(const Primitive<Dim>& q, const Vec<Dim>& n, const GasParams& gas) {
  const double vn = dot<Dim>(q.v, n);
  const double rho_e = q.p * gas.inv_gamma_minus_one() + 0.5 * q.rho * dot<Dim>(q.v, q.v);
  FluxVector<Dim> f;
  f[0] = q.rho * vn;
  for (int i = 0; i < Dim; ++i) f[1 + i] = q.rho * q.v[i] * vn + q.p * n[i];
  f[Dim + 1] = (rho_e + q.p) * vn;
  return f;
}

template <int Dim>
inline FluxVector<Dim> euler_flux_cons(const State<Dim>& u, const Primitive<Dim>& q, const Vec<Dim>& n) {
  const double vn = dot<Dim>(q.v, n);
  FluxVector<Dim> f;
  f[0] = u[0] * vn;
  for (int i = 0; i < Dim; ++i) f[1 + i] = u[1 + i] * vn + q.p * n[i];
  f[Dim + 1] = (u[Dim + 1] + q.p) * vn;
  return f;
}

template <int Dim>
inline FluxVector<Dim> central_prim(const Primitive<Dim>& l, const Primitive<Dim>& r, const Vec<Dim>& n,
                                    const GasParams& gas) {
  const FluxVector<Dim> fl = euler_flux_prim<Dim>(l, n, gas);
  const FluxVector<Dim> fr = euler_flux_prim<Dim>(r, n, gas);
  FluxVector<Dim> f;
  for (int c = 0; c < Dim + 2; ++c) f[c] = 0.5 * (fl[c] + fr[c]);
  return f;
}

template <int Dim>
inline Vec<Dim> unit_vector(int j) {
  Vec<Dim> e{};
  e[j] = 1.0;
  return e;
}

template <int Dim>
inline void debug_check_pair(const State<Dim>& u_l, const State<Dim>& u_r, const GasParams& gas) {
  if constexpr (kDebugChecks) {
    check_admissible<Dim>(u_l, gas);
    check_admissible<Dim>(u_r, gas);
  }
}

}  // namespace detail

// --- Shima et al. (kinetic energy and pressure equilibrium preserving) ---

template <int Dim>
FluxVector<Dim> flux_shima_directional(const State<Dim>& u_l, const State<Dim>& u_r, const Vec<Dim>& n,
                                       const GasParams& gas) {
  detail::debug_check_pair<Dim>(u_l, u_r, gas);
  detail::count_two_point();
  return detail::shima_prim<Dim>(detail::cons2prim_unchecked<Dim>(u_l, gas),
                                 detail::cons2prim_unchecked<Dim>(u_r, gas), n, gas);
}

template <int Dim>
FluxVector<Dim> flux_shima_cartesian(const State<Dim>& u_l, const State<Dim>& u_r, int j, const GasParams& gas) {
  detail::debug_check_pair<Dim>(u_l, u_r, gas);
  detail::count_two_point();
  return detail::shima_prim_cartesian<Dim>(detail::cons2prim_unchecked<Dim>(u_l, gas),
                                           detail::cons2prim_unchecked<Dim>(u_r, gas), j, gas);
}

// --- Ranocha (entropy conservative, kinetic energy and pressure equilibrium preserving) ---

template <int Dim>
FluxVector<Dim> flux_ranocha_directional(const State<Dim>& u_l, const State<Dim>& u_r, const Vec<Dim>& n,
                                         const GasParams& gas) {
  detail::debug_check_pair<Dim>(u_l, u_r, gas);
  detail::count_two_point();
  return detail::ranocha_prim<Dim>(detail::cons2prim_unchecked<Dim>(u_l, gas),
                                   detail::cons2prim_unchecked<Dim>(u_r, gas), n, gas);
}

template <int Dim>
FluxVector<Dim> flux_ranocha_cartesian(const State<Dim>& u_l, const State<Dim>& u_r, int j,
                                       const GasParams& gas) {
  detail::debug_check_pair<Dim>(u_l, u_r, gas);
  detail::count_two_point();
  return detail::ranocha_prim_cartesian<Dim>(detail::cons2prim_unchecked<Dim>(u_l, gas),
                                             detail::cons2prim_unchecked<Dim>(u_r, gas), j, gas);
}

// --- central, LLF, HLL ---

template <int Dim>
FluxVector<Dim> flux_central(const State<Dim>& u_l, const State<Dim>& u_r, const Vec<Dim>& n,
                             const GasParams& gas) {
  detail::debug_check_pair<Dim>(u_l, u_r, gas);
  detail::count_two_point();
  const FluxVector<Dim> fl = detail::euler_flux_cons<Dim>(u_l, detail::cons2prim_unchecked<Dim>(u_l, gas), n);
  const FluxVector<Dim> fr = detail::euler_flux_cons<Dim>(u_r, detail::cons2prim_unchecked<Dim>(u_r, gas), n);
  FluxVector<Dim> f;
  for (int c = 0; c < Dim + 2; ++c) f[c] = 0.5 * (fl[c] + fr[c]);
  return f;
}

// Local Lax-Friedrichs (Rusanov) flux. The wave speed is taken on the unit
// normal and the dissipation scales with |n|, so the result is linear in n.
template <int Dim>
FluxVector<Dim> flux_llf(const State<Dim>& u_l, const State<Dim>& u_r, const Vec<Dim>& n, const GasParams& gas) {
  detail::debug_check_pair<Dim>(u_l, u_r, gas);
  detail::count_two_point();
  const Primitive<Dim> ql = detail::cons2prim_unchecked<Dim>(u_l, gas);
  const Primitive<Dim> qr = detail::cons2prim_unchecked<Dim>(u_r, gas);
  const double norm_n = norm<Dim>(n);
  const double inv_norm = 1.0 / norm_n;
  const double vn_l = dot<Dim>(ql.v, n) * inv_norm;
  const double vn_r = dot<Dim>(qr.v, n) * inv_norm;
  const double lambda = std::max(std::abs(vn_l) + sound_speed<Dim>(ql, gas), std::abs(vn_r) + sound_speed<Dim>(qr, gas));
  const FluxVector<Dim> fl = detail::euler_flux_cons<Dim>(u_l, ql, n);
  const FluxVector<Dim> fr = detail::euler_flux_cons<Dim>(u_r, qr, n);
  FluxVector<Dim> f;
  const double diss = 0.5 * lambda * norm_n;
  for (int c = 0; c < Dim + 2; ++c) f[c] = 0.5 * (fl[c] + fr[c]) - diss * (u_r[c] - u_l[c]);
  return f;
}

// HLL flux with Davis wave-speed estimates.
template <int Dim>
FluxVector<Dim> flux_hll(const State<Dim>& u_l, const State<Dim>& u_r, const Vec<Dim>& n, const GasParams& gas) {
  detail::debug_check_pair<Dim>(u_l, u_r, gas);
  detail::count_two_point();
  const Primitive<Dim> ql = detail::cons2prim_unchecked<Dim>(u_l, gas);
  const Primitive<Dim> qr = detail::cons2prim_unchecked<Dim>(u_r, gas);
  const double norm_n = norm<Dim>(n);
  Vec<Dim> n_hat;
  for (int i = 0; i < Dim; ++i) n_hat[i] = n[i] / norm_n;
  const double vn_l = dot<Dim>(ql.v, n_hat);
  const double vn_r = dot<Dim>(qr.v, n_hat);
  const double c_l = sound_speed<Dim>(ql, gas);
  const double c_r = sound_speed<Dim>(qr, gas);
  const double s_min = std::min(vn_l - c_l, vn_r - c_r);
  const double s_max = std::max(vn_l + c_l, vn_r + c_r);
  const FluxVector<Dim> fl = detail::euler_flux_cons<Dim>(u_l, ql, n_hat);
  const FluxVector<Dim> fr = detail::euler_flux_cons<Dim>(u_r, qr, n_hat);
  FluxVector<Dim> f;
  if (s_min >= 0.0) {
    f = fl;
  } else if (s_max <= 0.0) {
    f = fr;
  } else {
    const double inv_ds = 1.0 / (s_max - s_min);
    for (int c = 0; c < Dim + 2; ++c) {
      f[c] = (s_max * fl[c] - s_min * fr[c] + s_min * s_max * (u_r[c] - u_l[c])) * inv_ds;
    }
  }
  for (int c = 0; c < Dim + 2; ++c) f[c] *= norm_n;
  return f;
}

// --- dispatch ---

template <int Dim>
FluxVector<Dim> flux_directional(FluxKind kind, const State<Dim>& u_l, const State<Dim>& u_r, const Vec<Dim>& n,
                                 const GasParams& gas) {
  switch (kind) {
    case FluxKind::shima_etal: return flux_shima_directional<Dim>(u_l, u_r, n, gas);
    case FluxKind::ranocha_ec: return flux_ranocha_directional<Dim>(u_l, u_r, n, gas);
    case FluxKind::central: return flux_central<Dim>(u_l, u_r, n, gas);
    case FluxKind::llf: return flux_llf<Dim>(u_l, u_r, n, gas);
    case FluxKind::hll: return flux_hll<Dim>(u_l, u_r, n, gas);
  }
  std::abort();
}

template <int Dim>
FluxVector<Dim> flux_cartesian(FluxKind kind, const State<Dim>& u_l, const State<Dim>& u_r, int j,
                               const GasParams& gas) {
  switch (kind) {
    case FluxKind::shima_etal: return flux_shima_cartesian<Dim>(u_l, u_r, j, gas);
    case FluxKind::ranocha_ec: return flux_ranocha_cartesian<Dim>(u_l, u_r, j, gas);
    default: return flux_directional<Dim>(kind, u_l, u_r, detail::unit_vector<Dim>(j), gas);
  }
}

// --- rotated evaluation ---

// Orthonormal frame (n, t_1[, t_2]) built from a direction, plus its length.
template <int Dim>
struct RotationFrame {
  Vec<Dim> normal;
  std::array<Vec<Dim>, Dim - 1> tangents;
  double length;
};

// t = (-n_2, n_1) in 2D. In 3D the coordinate axis along the smallest
// component of n is crossed with n, normalized, and completed by n x t_1.
template <int Dim>
RotationFrame<Dim> make_rotation_frame(const Vec<Dim>& direction) {
  static_assert(Dim == 2 || Dim == 3);
  const double length = norm<Dim>(direction);
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw DomainError("rotated flux: normal direction must be nonzero and finite");
  }
  RotationFrame<Dim> frame;
  frame.length = length;
  for (int i = 0; i < Dim; ++i) frame.normal[i] = direction[i] / length;
  const Vec<Dim>& n = frame.normal;
  if constexpr (Dim == 2) {
    frame.tangents[0] = {-n[1], n[0]};
  } else {
    int m = 0;
    for (int i = 1; i < 3; ++i) {
      if (std::abs(n[i]) < std::abs(n[m])) m = i;
    }
    Vec<3> e{};
    e[m] = 1.0;
    Vec<3> t1 = {n[1] * e[2] - n[2] * e[1], n[2] * e[0] - n[0] * e[2], n[0] * e[1] - n[1] * e[0]};
    const double t1_norm = norm<3>(t1);
    for (double& x : t1) x /= t1_norm;
    const Vec<3> t2 = {n[1] * t1[2] - n[2] * t1[1], n[2] * t1[0] - n[0] * t1[2], n[0] * t1[1] - n[1] * t1[0]};
    frame.tangents[0] = t1;
    frame.tangents[1] = t2;
  }
  return frame;
}

template <int Dim>
void check_rotation_frame(const RotationFrame<Dim>& frame, double tol = 1e-12) {
  std::array<Vec<Dim>, Dim> rows;
  rows[0] = frame.normal;
  for (int i = 0; i < Dim - 1; ++i) rows[1 + i] = frame.tangents[i];
  for (int a = 0; a < Dim; ++a) {
    for (int b = 0; b < Dim; ++b) {
      const double expected = a == b ? 1.0 : 0.0;
      if (std::abs(dot<Dim>(rows[a], rows[b]) - expected) > tol) {
        throw GeometryError("rotation frame is not orthonormal (rows " + std::to_string(a) + ", " +
                            std::to_string(b) + ")");
      }
    }
  }
}

namespace detail {

template <int Dim>
inline State<Dim> rotate_to_frame(const State<Dim>& u, const RotationFrame<Dim>& frame) {
  State<Dim> r = u;
  Vec<Dim> m;
  for (int i = 0; i < Dim; ++i) m[i] = u[1 + i];
  r[1] = dot<Dim>(m, frame.normal);
  for (int t = 0; t < Dim - 1; ++t) r[2 + t] = dot<Dim>(m, frame.tangents[t]);
  return r;
}

template <int Dim>
inline FluxVector<Dim> rotate_from_frame(const FluxVector<Dim>& f, const RotationFrame<Dim>& frame) {
  FluxVector<Dim> out;
  out[0] = f[0] * frame.length;
  out[Dim + 1] = f[Dim + 1] * frame.length;
  for (int i = 0; i < Dim; ++i) {
    double m = f[1] * frame.normal[i];
    for (int t = 0; t < Dim - 1; ++t) m += f[2 + t] * frame.tangents[t][i];
    out[1 + i] = m * frame.length;
  }
  return out;
}

}  // namespace detail

// Rotates both states into the frame, evaluates the Cartesian flux in the
// first coordinate direction, rotates the momentum flux back and scales by
// the length of the direction.
template <int Dim>
FluxVector<Dim> rotated_flux(FluxKind base, const State<Dim>& u_l, const State<Dim>& u_r,
                             const RotationFrame<Dim>& frame, const GasParams& gas) {
  if constexpr (kDebugChecks) check_rotation_frame<Dim>(frame);
  const State<Dim> rl = detail::rotate_to_frame<Dim>(u_l, frame);
  const State<Dim> rr = detail::rotate_to_frame<Dim>(u_r, frame);
  return detail::rotate_from_frame<Dim>(flux_cartesian<Dim>(base, rl, rr, 0, gas), frame);
}

template <int Dim>
FluxVector<Dim> rotated_flux(FluxKind base, const State<Dim>& u_l, const State<Dim>& u_r, const Vec<Dim>& direction,
                             const GasParams& gas) {
  return rotated_flux<Dim>(base, u_l, u_r, make_rotation_frame<Dim>(direction), gas);
}

}  // namespace fluxdiff
