#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fluxdiff/field.hpp"
#include "fluxdiff/flux_counter.hpp"
#include "fluxdiff/gauss.hpp"
#include "fluxdiff/geometry.hpp"
#include "fluxdiff/kernels_batched.hpp"
#include "fluxdiff/operators.hpp"
#include "fluxdiff/parallel.hpp"
#include "fluxdiff/surface.hpp"
#include "fluxdiff/volume.hpp"

namespace fluxdiff {

// Everything the RHS needs at the 1D level for one degree and node family.
struct OperatorSet {
  SBPOperator1D op;
  Matrix Dsplit;              // LGL
  HybridizedOperators1D hyb;  // Gauss
  int q = -1;                 // overintegration degree, -1 if unused
  SBPOperator1D op_q;
  TransferMatrices transfer;
};

inline OperatorSet make_operator_set(int p, NodeFamily family, int q = -1) {
  OperatorSet s;
  s.op = make_operator(p, family);
  if (family == NodeFamily::lgl) s.Dsplit = build_dsplit(s.op).Dsplit;
  else s.hyb = build_hybridized(s.op);
  if (q >= 0) {
    s.q = q;
    s.op_q = make_operator(q, family);
    s.transfer = transfer_matrices(p, q, family);
  }
  return s;
}

inline OperatorSet make_operator_set(int p, NodeFamily family, const RhsConfig& c) {
  return make_operator_set(p, family, c.volume_scheme == VolumeScheme::overintegration ? c.overintegration_degree : -1);
}

namespace detail {

template <int Dim>
void check_rhs_inputs(const SolutionField<Dim>& u, const MeshGeometry<Dim>& g, const OperatorSet& ops,
                      const RhsConfig& c) {
  validate_config(c, ops.op.family, ops.op.degree);
  if (g.family != ops.op.family || g.degree != ops.op.degree) {
    throw ConfigError("geometry (" + to_string(g.family) + ", p=" + std::to_string(g.degree) +
                      ") does not match operators (" + to_string(ops.op.family) + ", p=" +
                      std::to_string(ops.op.degree) + ")");
  }
  if (u.num_elements != g.mesh.num_elements() || u.nodes_per_element != g.nodes_per_element()) {
    throw ConfigError("solution field size does not match the mesh");
  }
  if (c.volume_scheme == VolumeScheme::overintegration && ops.q != c.overintegration_degree) {
    throw ConfigError("operator set was built for overintegration degree " + std::to_string(ops.q) + ", config asks " +
                      std::to_string(c.overintegration_degree));
  }
}

template <int Dim>
[[noreturn]] void rethrow_with_element(const AdmissibilityError& e, int element) {
  std::ostringstream msg;
  msg << "element " << element << ": " << e.what();
  throw AdmissibilityError(msg.str());
}

template <int Dim>
void store(SolutionField<Dim>& out, int e, const NodalFluxes<Dim>& vol) {
  State<Dim>* dst = out.element(e);
  for (std::size_t i = 0; i < vol.size(); ++i)
    for (int c = 0; c < Dim + 2; ++c) dst[i][c] = vol[i][c];
}

template <int Dim>
NodalFluxes<Dim> lgl_volume(const State<Dim>* ue, const ElementView<Dim>& v, const OperatorSet& ops,
                            const RhsConfig& c, const GasParams& gas) {
  const int nn = v.num_nodes();
  switch (c.volume_scheme) {
    case VolumeScheme::strong: return volume_strong<Dim>(ue, v, ops.op, gas);
    case VolumeScheme::weak: return volume_weak<Dim>(ue, v, ops.op, gas);
    case VolumeScheme::overintegration: return volume_overintegration<Dim>(ue, v, ops.op_q, ops.transfer, gas);
    default: break;
  }
  if (c.batched) {
    thread_local ElementSoA<Dim> soa;
    transpose_to_soa<Dim>(soa, ue, nn, gas, c.precompute, c.batch_width);
    return volume_fluxdiff_batched<Dim>(soa, v, ops.Dsplit, c.volume_flux, gas);
  }
  if (c.precompute != Precompute::none) {
    const auto pre = precompute_element_data<Dim>(ue, nn, gas, c.precompute);
    return volume_fluxdiff<Dim>(ue, v, ops.Dsplit, c.volume_flux, gas, &pre);
  }
  return volume_fluxdiff<Dim>(ue, v, ops.Dsplit, c.volume_flux, gas);
}

template <int Dim>
NodalFluxes<Dim> gauss_volume(const ProjectedElement<Dim>& pe, const ElementView<Dim>& v, const OperatorSet& ops,
                              const RhsConfig& c, const GasParams& gas) {
  std::optional<PrecomputedElementData<Dim>> pre;
  if (c.precompute != Precompute::none) {
    pre = precompute_element_data<Dim>(pe.states.data(), static_cast<int>(pe.states.size()), gas, c.precompute);
  }
  const PrecomputedElementData<Dim>* pp = pre ? &*pre : nullptr;
  if (c.volume_scheme == VolumeScheme::gauss_fluxdiff)
    return volume_gauss_fluxdiff<Dim>(pe, v, ops.op, ops.hyb, c.volume_flux, gas, pp);
  return volume_gauss_surface_correction<Dim>(pe, v, ops.op, ops.hyb, c.volume_flux, gas, pp);
}

}  // namespace detail

// du/dt = -(VOL + SURF). Elements are processed in parallel when
// c.threads > 1; every node is written by exactly one task.
template <int Dim>
SolutionField<Dim> rhs(const SolutionField<Dim>& u, const MeshGeometry<Dim>& g, const OperatorSet& ops,
                       const RhsConfig& c, const GasParams& gas, FluxCounter* counter = nullptr) {
  detail::check_rhs_inputs<Dim>(u, g, ops, c);
  const int ne = g.mesh.num_elements();
  SolutionField<Dim> out(ne, u.nodes_per_element);

  if (is_gauss_scheme(c.volume_scheme)) {
    std::vector<ProjectedElement<Dim>> proj(ne);
    parallel_for(ne, c.threads, [&](int e) {
      proj[e] = entropy_projection<Dim>(u.element(e), ops.op, gas, e);
    });
    parallel_for(ne, c.threads, [&](int e) {
      std::optional<CountGuard> guard;
      if (counter) guard.emplace(*counter);
      try {
        detail::store<Dim>(out, e, detail::gauss_volume<Dim>(proj[e], element_view<Dim>(g, e), ops, c, gas));
      } catch (const AdmissibilityError& err) {
        detail::rethrow_with_element<Dim>(err, e);
      }
    });
    surface_terms_gauss<Dim>(proj, g, ops.op, c.surface_flux, gas, out, c.threads, counter);
  } else {
    parallel_for(ne, c.threads, [&](int e) {
      std::optional<CountGuard> guard;
      if (counter) guard.emplace(*counter);
      try {
        detail::store<Dim>(out, e, detail::lgl_volume<Dim>(u.element(e), element_view<Dim>(g, e), ops, c, gas));
      } catch (const AdmissibilityError& err) {
        detail::rethrow_with_element<Dim>(err, e);
      }
    });
    const bool strong = c.volume_scheme == VolumeScheme::strong;
    surface_terms<Dim>(u, g, ops.op, c.surface_flux, gas, out, strong, c.threads, counter);
  }

  for (auto& s : out.values)
    for (double& x : s) x = -x;
  return out;
}

}  // namespace fluxdiff
