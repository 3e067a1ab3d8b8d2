#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "fluxdiff/diagnostics.hpp"
#include "fluxdiff/discretization.hpp"
#include "fluxdiff/harness/config.hpp"
#include "fluxdiff/initial_conditions.hpp"

namespace fluxdiff::harness {

inline constexpr double kDomainLo = -5.0;
inline constexpr double kDomainHi = 5.0;

// Calls f.template operator()<Dim>() for the runtime dimension.
template <typename F>
decltype(auto) dispatch_dim(int dim, F&& f) {
  if (dim == 2) return f.template operator()<2>();
  if (dim == 3) return f.template operator()<3>();
  throw ConfigError("dim: must be 2 or 3, got " + std::to_string(dim));
}

template <int Dim>
StructuredMesh<Dim> make_mesh(const RunConfig& c, int n) {
  std::array<int, Dim> dims;
  dims.fill(n);
  Vec<Dim> lo, hi;
  lo.fill(kDomainLo);
  hi.fill(kDomainHi);
  if (c.mesh == MeshKind::curved) return sine_perturbed_mesh<Dim>(dims, lo, hi, c.mesh_amplitude(n));
  return cartesian_mesh<Dim>(dims, lo, hi);
}

inline VortexParams vortex_params(const RunConfig& c) {
  VortexParams prm;
  prm.epsilon = c.epsilon;
  prm.lo = kDomainLo;
  prm.hi = kDomainHi;
  return prm;
}

// Exact solution where one is known (vortex, free stream).
template <int Dim>
std::optional<State<Dim>> exact_state(const RunConfig& c, const Vec<Dim>& x, double t, const GasParams& gas) {
  switch (c.ic) {
    case InitialCondition::isentropic_vortex: return ic_isentropic_vortex<Dim>(x, t, gas, vortex_params(c));
    case InitialCondition::free_stream: return ic_free_stream<Dim>(gas);
    default: return std::nullopt;
  }
}

template <int Dim>
struct Problem {
  GasParams gas;
  OperatorSet ops;
  MeshGeometry<Dim> geometry;
  std::vector<double> mj;
  SolutionField<Dim> u0;
};

template <int Dim>
Problem<Dim> make_problem(const RunConfig& c, int n = -1) {
  if (n < 0) n = c.elements;
  const GasParams gas(c.gamma);
  OperatorSet ops = make_operator_set(c.degree, c.family(), c.rhs);
  auto g = build_geometry<Dim>(make_mesh<Dim>(c, n), ops.op);
  auto mj = quadrature_weights<Dim>(g, ops.op);
  SolutionField<Dim> u;
  switch (c.ic) {
    case InitialCondition::random: u = random_field<Dim>(g, c.seed, gas); break;
    case InitialCondition::sinusoidal:
      u = fill_field<Dim>(g, [&](const Vec<Dim>& x) { return ic_sinusoidal<Dim>(x, gas); });
      break;
    default: u = fill_field<Dim>(g, [&](const Vec<Dim>& x) { return *exact_state<Dim>(c, x, 0.0, gas); }); break;
  }
  return Problem<Dim>{gas, std::move(ops), std::move(g), std::move(mj), std::move(u)};
}

template <int Dim>
std::uint64_t degrees_of_freedom(const Problem<Dim>& pr) {
  return static_cast<std::uint64_t>(pr.geometry.mesh.num_elements()) * pr.geometry.nodes_per_element();
}

}  // namespace fluxdiff::harness
