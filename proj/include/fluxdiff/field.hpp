#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "fluxdiff/errors.hpp"
#include "fluxdiff/euler.hpp"
#include "fluxdiff/fluxes.hpp"
#include "fluxdiff/operators.hpp"

namespace fluxdiff {

// Conserved states, element after element, nodes of an element contiguous
// (node-major / array of structures).
template <int Dim>
struct SolutionField {
  int num_elements = 0;
  int nodes_per_element = 0;
  std::vector<State<Dim>> values;

  SolutionField() = default;
  SolutionField(int ne, int nn) : num_elements(ne), nodes_per_element(nn), values(static_cast<std::size_t>(ne) * nn) {}

  State<Dim>& operator()(int e, int i) { return values[static_cast<std::size_t>(e) * nodes_per_element + i]; }
  const State<Dim>& operator()(int e, int i) const {
    return values[static_cast<std::size_t>(e) * nodes_per_element + i];
  }
  State<Dim>* element(int e) { return values.data() + static_cast<std::size_t>(e) * nodes_per_element; }
  const State<Dim>* element(int e) const { return values.data() + static_cast<std::size_t>(e) * nodes_per_element; }
  std::size_t size() const { return values.size(); }
};

// Variable-major copy: data[(e * nvars + c) * nodes_per_element + i].
template <int Dim>
struct VariableMajorField {
  int num_elements = 0;
  int nodes_per_element = 0;
  std::vector<double> data;

  double& operator()(int e, int c, int i) {
    return data[(static_cast<std::size_t>(e) * kNumVars<Dim> + c) * nodes_per_element + i];
  }
  double operator()(int e, int c, int i) const {
    return data[(static_cast<std::size_t>(e) * kNumVars<Dim> + c) * nodes_per_element + i];
  }
};

template <int Dim>
VariableMajorField<Dim> to_variable_major(const SolutionField<Dim>& f) {
  VariableMajorField<Dim> v{f.num_elements, f.nodes_per_element, std::vector<double>(f.size() * kNumVars<Dim>)};
  for (int e = 0; e < f.num_elements; ++e)
    for (int i = 0; i < f.nodes_per_element; ++i)
      for (int c = 0; c < kNumVars<Dim>; ++c) v(e, c, i) = f(e, i)[c];
  return v;
}

template <int Dim>
SolutionField<Dim> to_node_major(const VariableMajorField<Dim>& v) {
  SolutionField<Dim> f(v.num_elements, v.nodes_per_element);
  for (int e = 0; e < v.num_elements; ++e)
    for (int i = 0; i < v.nodes_per_element; ++i)
      for (int c = 0; c < kNumVars<Dim>; ++c) f(e, i)[c] = v(e, c, i);
  return f;
}

enum class VolumeScheme { strong, weak, fluxdiff, overintegration, gauss_fluxdiff, gauss_surface_correction };

enum class Precompute { none, primitives, primitives_and_logs };

inline std::string_view to_string(VolumeScheme s) {
  switch (s) {
    case VolumeScheme::strong: return "strong";
    case VolumeScheme::weak: return "weak";
    case VolumeScheme::fluxdiff: return "fluxdiff";
    case VolumeScheme::overintegration: return "overintegration";
    case VolumeScheme::gauss_fluxdiff: return "gauss_fluxdiff";
    case VolumeScheme::gauss_surface_correction: return "gauss_surface_correction";
  }
  return "?";
}

inline VolumeScheme volume_scheme_from_string(std::string_view name) {
  for (VolumeScheme s : {VolumeScheme::strong, VolumeScheme::weak, VolumeScheme::fluxdiff,
                         VolumeScheme::overintegration, VolumeScheme::gauss_fluxdiff,
                         VolumeScheme::gauss_surface_correction}) {
    if (name == to_string(s)) return s;
  }
  throw ConfigError("unknown volume scheme '" + std::string(name) + "'");
}

inline std::string_view to_string(Precompute p) {
  switch (p) {
    case Precompute::none: return "none";
    case Precompute::primitives: return "primitives";
    case Precompute::primitives_and_logs: return "primitives_and_logs";
  }
  return "?";
}

inline Precompute precompute_from_string(std::string_view name) {
  for (Precompute p : {Precompute::none, Precompute::primitives, Precompute::primitives_and_logs}) {
    if (name == to_string(p)) return p;
  }
  throw ConfigError("unknown precompute mode '" + std::string(name) + "'");
}

inline bool is_gauss_scheme(VolumeScheme s) {
  return s == VolumeScheme::gauss_fluxdiff || s == VolumeScheme::gauss_surface_correction;
}

inline bool is_flux_differencing(VolumeScheme s) { return s == VolumeScheme::fluxdiff || is_gauss_scheme(s); }

struct RhsConfig {
  VolumeScheme volume_scheme = VolumeScheme::fluxdiff;
  FluxKind volume_flux = FluxKind::ranocha_ec;
  FluxKind surface_flux = FluxKind::ranocha_ec;
  Precompute precompute = Precompute::none;
  int overintegration_degree = 0;  // q, used by the overintegration scheme
  bool batched = false;            // SoA kernels for the LGL fluxdiff volume term
  int batch_width = 4;
  int threads = 1;                 // 1 = sequential, bitwise reproducible
};

inline void validate_config(const RhsConfig& c, NodeFamily family, int degree) {
  if (is_gauss_scheme(c.volume_scheme) && family != NodeFamily::gauss) {
    throw ConfigError(std::string(to_string(c.volume_scheme)) + " requires Gauss operators");
  }
  if (!is_gauss_scheme(c.volume_scheme) && family != NodeFamily::lgl) {
    throw ConfigError(std::string(to_string(c.volume_scheme)) + " requires LGL operators");
  }
  if (is_flux_differencing(c.volume_scheme) && !is_symmetric(c.volume_flux)) {
    throw ConfigError("flux differencing requires a symmetric volume flux, got " + std::string(to_string(c.volume_flux)));
  }
  if (c.volume_scheme == VolumeScheme::overintegration && c.overintegration_degree < degree) {
    throw ConfigError("overintegration degree q=" + std::to_string(c.overintegration_degree) + " < p=" +
                      std::to_string(degree));
  }
  if (c.batched && c.volume_scheme != VolumeScheme::fluxdiff) {
    throw ConfigError("batched kernels are available for the LGL fluxdiff scheme only");
  }
  if (c.batch_width < 1 || (c.batch_width & (c.batch_width - 1)) != 0) {
    throw ConfigError("batch width must be a power of two, got " + std::to_string(c.batch_width));
  }
  if (c.threads < 1) throw ConfigError("thread count must be positive");
}

// Per-node primitive variables and, optionally, log(rho) and log(p).
template <int Dim>
struct PrecomputedElementData {
  Precompute mode = Precompute::none;
  std::vector<PrimitiveLogs<Dim>> nodes;
};

template <int Dim>
PrecomputedElementData<Dim> precompute_element_data(const State<Dim>* u, int n, const GasParams& gas,
                                                    Precompute mode) {
  PrecomputedElementData<Dim> d;
  d.mode = mode;
  if (mode == Precompute::none) return d;
  d.nodes.resize(n);
  for (int i = 0; i < n; ++i) {
    auto& t = d.nodes[i];
    t.q = cons2prim<Dim>(u[i], gas);
    if (mode == Precompute::primitives_and_logs) {
      t.log_rho = std::log(t.q.rho);
      t.log_p = std::log(t.q.p);
    } else {
      t.log_rho = NAN;
      t.log_p = NAN;
    }
  }
  return d;
}

namespace detail {

// Two-point volume flux between nodes a and b of one element (or stacked
// node set), evaluated either from conserved states or from precomputed
// tables. Kind and mode are compile-time so the inner loops stay branch free.
template <int Dim, FluxKind K, Precompute P>
struct PairFlux {
  const State<Dim>* u;
  const PrimitiveLogs<Dim>* t;
  const GasParams* gas;

  FluxVector<Dim> cartesian(int a, int b, int j) const {
    if constexpr (P == Precompute::none) {
      if constexpr (K == FluxKind::shima_etal) return flux_shima_cartesian<Dim>(u[a], u[b], j, *gas);
      else if constexpr (K == FluxKind::ranocha_ec) return flux_ranocha_cartesian<Dim>(u[a], u[b], j, *gas);
      else return flux_central<Dim>(u[a], u[b], unit_vector<Dim>(j), *gas);
    } else {
      count_two_point();
      if constexpr (K == FluxKind::shima_etal) return shima_prim_cartesian<Dim>(t[a].q, t[b].q, j, *gas);
      else if constexpr (K == FluxKind::ranocha_ec) {
        if constexpr (P == Precompute::primitives_and_logs) return ranocha_logs_cartesian<Dim>(t[a], t[b], j, *gas);
        else return ranocha_prim_cartesian<Dim>(t[a].q, t[b].q, j, *gas);
      } else {
        return central_prim<Dim>(t[a].q, t[b].q, unit_vector<Dim>(j), *gas);
      }
    }
  }

  FluxVector<Dim> directional(int a, int b, const Vec<Dim>& n) const {
    if constexpr (P == Precompute::none) {
      if constexpr (K == FluxKind::shima_etal) return flux_shima_directional<Dim>(u[a], u[b], n, *gas);
      else if constexpr (K == FluxKind::ranocha_ec) return flux_ranocha_directional<Dim>(u[a], u[b], n, *gas);
      else return flux_central<Dim>(u[a], u[b], n, *gas);
    } else {
      count_two_point();
      if constexpr (K == FluxKind::shima_etal) return shima_prim<Dim>(t[a].q, t[b].q, n, *gas);
      else if constexpr (K == FluxKind::ranocha_ec) {
        if constexpr (P == Precompute::primitives_and_logs) return ranocha_logs<Dim>(t[a], t[b], n, *gas);
        else return ranocha_prim<Dim>(t[a].q, t[b].q, n, *gas);
      } else {
        return central_prim<Dim>(t[a].q, t[b].q, n, *gas);
      }
    }
  }
};

template <int Dim, FluxKind K, typename Fn>
void dispatch_precompute(Precompute mode, const State<Dim>* u, const PrimitiveLogs<Dim>* t, const GasParams& gas,
                         Fn&& fn) {
  switch (mode) {
    case Precompute::none: fn(PairFlux<Dim, K, Precompute::none>{u, t, &gas}); return;
    case Precompute::primitives: fn(PairFlux<Dim, K, Precompute::primitives>{u, t, &gas}); return;
    case Precompute::primitives_and_logs: fn(PairFlux<Dim, K, Precompute::primitives_and_logs>{u, t, &gas}); return;
  }
}

template <int Dim, typename Fn>
void with_pair_flux(FluxKind kind, Precompute mode, const State<Dim>* u, const PrimitiveLogs<Dim>* t,
                    const GasParams& gas, Fn&& fn) {
  switch (kind) {
    case FluxKind::shima_etal: dispatch_precompute<Dim, FluxKind::shima_etal>(mode, u, t, gas, fn); return;
    case FluxKind::ranocha_ec: dispatch_precompute<Dim, FluxKind::ranocha_ec>(mode, u, t, gas, fn); return;
    case FluxKind::central: dispatch_precompute<Dim, FluxKind::central>(mode, u, t, gas, fn); return;
    default:
      throw ConfigError("flux differencing requires a symmetric volume flux, got " + std::string(to_string(kind)));
  }
}

template <int Dim>
inline void axpy(FluxVector<Dim>& y, double a, const FluxVector<Dim>& x) {
  for (int c = 0; c < Dim + 2; ++c) y[c] += a * x[c];
}

}  // namespace detail

}  // namespace fluxdiff
