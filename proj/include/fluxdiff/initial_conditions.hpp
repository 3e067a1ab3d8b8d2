#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "fluxdiff/euler.hpp"
#include "fluxdiff/field.hpp"
#include "fluxdiff/geometry.hpp"

namespace fluxdiff {

struct VortexParams {
  double epsilon = 20.0;
  double rho0 = 1.0;
  double p0 = 10.0;
  double v0[3] = {1.0, 1.0, 0.0};
  double lo = -5.0;  // periodic box [lo, hi]^d
  double hi = 5.0;
};

// Isentropic vortex centred at the origin at t = 0 and advected with v0.
// The vortex lives in the (x1, x2) plane; in 3D it is extruded along x3.
// At time t the nearest periodic image of the centre is used.
template <int Dim>
State<Dim> ic_isentropic_vortex(const Vec<Dim>& x, double t, const GasParams& gas, const VortexParams& prm = {}) {
  const double len = prm.hi - prm.lo;
  double r[2];
  for (int d = 0; d < 2; ++d) {
    double s = x[d] - prm.v0[d] * t;
    s -= len * std::round(s / len);
    r[d] = s;
  }
  const double r2 = r[0] * r[0] + r[1] * r[1];
  const double g = gas.gamma();
  const double t0 = prm.p0 / prm.rho0;
  const double pi = std::numbers::pi;
  const double temp = t0 - (g - 1.0) * prm.epsilon * prm.epsilon / (8.0 * g * pi * pi) * std::exp(1.0 - r2);
  const double du = prm.epsilon / (2.0 * pi) * std::exp(0.5 * (1.0 - r2));
  Primitive<Dim> q;
  q.rho = prm.rho0 * std::pow(temp / t0, 1.0 / (g - 1.0));
  for (int d = 0; d < Dim; ++d) q.v[d] = prm.v0[d];
  q.v[0] -= du * r[1];
  q.v[1] += du * r[0];
  q.p = q.rho * temp;
  return prim2cons<Dim>(q, gas);
}

// rho = 2 + sin(pi x/5) sin(pi y/5), p = rho^gamma, v = 0.
template <int Dim>
State<Dim> ic_sinusoidal(const Vec<Dim>& x, const GasParams& gas) {
  const double pi = std::numbers::pi;
  Primitive<Dim> q;
  q.rho = 2.0 + std::sin(pi * x[0] / 5.0) * std::sin(pi * x[1] / 5.0);
  q.v = Vec<Dim>{};
  q.p = std::pow(q.rho, gas.gamma());
  return prim2cons<Dim>(q, gas);
}

template <int Dim>
State<Dim> ic_free_stream(const GasParams& gas, double rho = 1.0, double p = 1.0, double speed = 0.5) {
  Primitive<Dim> q;
  q.rho = rho;
  for (int d = 0; d < Dim; ++d) q.v[d] = speed * (d + 1) / Dim;
  q.p = p;
  return prim2cons<Dim>(q, gas);
}

template <int Dim, typename Fn>
SolutionField<Dim> fill_field(const MeshGeometry<Dim>& g, Fn&& fn) {
  SolutionField<Dim> u(g.mesh.num_elements(), g.nodes_per_element());
  for (int e = 0; e < u.num_elements; ++e)
    for (int i = 0; i < u.nodes_per_element; ++i) u(e, i) = fn(g.elements[e].x[i]);
  return u;
}

// Independent uniform rho, p in [1, 2] and velocity components in [-1, 1]
// at every node, in storage order.
template <int Dim>
SolutionField<Dim> random_field(const MeshGeometry<Dim>& g, std::uint64_t seed, const GasParams& gas) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(1.0, 2.0);
  std::uniform_real_distribution<double> vel(-1.0, 1.0);
  SolutionField<Dim> u(g.mesh.num_elements(), g.nodes_per_element());
  for (auto& s : u.values) {
    Primitive<Dim> q;
    q.rho = pos(rng);
    for (int d = 0; d < Dim; ++d) q.v[d] = vel(rng);
    q.p = pos(rng);
    s = prim2cons<Dim>(q, gas);
  }
  return u;
}

}  // namespace fluxdiff
