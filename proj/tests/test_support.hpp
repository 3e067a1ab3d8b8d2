#pragma once

#include <cmath>
#include <random>

#include "fluxdiff/euler.hpp"

namespace fluxdiff::testing {

// Random admissible state with rho, p in [rho_lo, rho_hi] x [p_lo, p_hi] and |v| <= v_max.
template <int Dim>
State<Dim> random_state(std::mt19937_64& rng, const GasParams& gas, double lo = 0.1, double hi = 10.0,
                        double v_max = 5.0) {
  std::uniform_real_distribution<double> pos(lo, hi);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Primitive<Dim> q;
  q.rho = pos(rng);
  q.p = pos(rng);
  Vec<Dim> v;
  double len = 0.0;
  do {
    for (int i = 0; i < Dim; ++i) v[i] = unit(rng);
    len = norm<Dim>(v);
  } while (len > 1.0);
  const double scale = v_max * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  for (int i = 0; i < Dim; ++i) q.v[i] = scale * v[i];
  return prim2cons<Dim>(q, gas);
}

// A state close to `u` with relative perturbations of size ~eps in rho and p.
template <int Dim>
State<Dim> nearby_state(std::mt19937_64& rng, const State<Dim>& u, const GasParams& gas, double eps) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Primitive<Dim> q = cons2prim<Dim>(u, gas);
  q.rho *= 1.0 + eps * unit(rng);
  q.p *= 1.0 + eps * unit(rng);
  for (int i = 0; i < Dim; ++i) q.v[i] += eps * unit(rng);
  return prim2cons<Dim>(q, gas);
}

template <int Dim>
Vec<Dim> random_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec<Dim> n;
  for (int i = 0; i < Dim; ++i) n[i] = g(rng);
  const double len = norm<Dim>(n);
  for (int i = 0; i < Dim; ++i) n[i] /= len;
  return n;
}

template <typename A, typename B>
double max_abs_diff(const A& a, const B& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

template <typename A>
double max_abs(const A& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace fluxdiff::testing
