#pragma once

#include <algorithm>
#include <sstream>
#include <vector>

#include "fluxdiff/field.hpp"
#include "fluxdiff/geometry.hpp"
#include "fluxdiff/operators.hpp"
#include "fluxdiff/volume.hpp"

namespace fluxdiff {

// Volume states followed by the entropy-projected face states. Face point f
// of face (dir, side) sits at index num_volume + (2 dir + side) nf + f.
template <int Dim>
struct ProjectedElement {
  std::vector<State<Dim>> states;
  int num_volume = 0;
  int nodes_per_face = 0;

  int face_index(int dir, int side, int f) const { return num_volume + (2 * dir + side) * nodes_per_face + f; }
  const State<Dim>& face(int dir, int side, int f) const { return states[face_index(dir, side, f)]; }
};

// u~ = [u; u(R w(u))] along every line of every direction.
template <int Dim>
ProjectedElement<Dim> entropy_projection(const State<Dim>* u, const SBPOperator1D& op, const GasParams& gas,
                                         int element = 0) {
  if (op.family != NodeFamily::gauss) throw UnsupportedOperatorError("entropy projection expects Gauss operators");
  const int n1d = op.num_nodes();
  ProjectedElement<Dim> p;
  p.num_volume = ipow<Dim>(n1d);
  p.nodes_per_face = ipow<Dim - 1>(n1d);
  p.states.resize(p.num_volume + 2 * Dim * p.nodes_per_face);
  std::vector<EntropyVars<Dim>> w(p.num_volume);
  for (int i = 0; i < p.num_volume; ++i) {
    p.states[i] = u[i];
    w[i] = entropy_vars<Dim>(u[i], gas);
  }
  for (int dir = 0; dir < Dim; ++dir) {
    const int stride = direction_stride<Dim>(dir, n1d);
    for (int f = 0; f < p.nodes_per_face; ++f) {
      const int start = face_volume_node<Dim>(dir, 0, f, n1d);
      for (int side = 0; side < 2; ++side) {
        EntropyVars<Dim> wf{};
        for (int k = 0; k < n1d; ++k) {
          const double r = op.boundary_interp(side, k);
          for (int c = 0; c < Dim + 2; ++c) wf.w[c] += r * w[start + k * stride].w[c];
        }
        try {
          p.states[p.face_index(dir, side, f)] = entropy2cons<Dim>(wf, gas);
        } catch (const AdmissibilityError& e) {
          std::ostringstream msg;
          msg << "entropy projection failed in element " << element << ", direction " << dir << ", side " << side
              << ", face node " << f << ": " << e.what();
          throw AdmissibilityError(msg.str());
        }
      }
    }
  }
  return p;
}

namespace detail {

// Contravariant vector of direction `dir` at a stacked node.
template <int Dim>
Vec<Dim> stacked_metric(const ElementView<Dim>& v, const ProjectedElement<Dim>& p, int idx, int dir) {
  if (idx < p.num_volume) return v.geo->metrics.Ja[idx][dir];
  const int rel = idx - p.num_volume;
  const int face = rel / p.nodes_per_face;
  const int side = face % 2;
  Vec<Dim> n = v.geo->face_normals[face / 2][side][rel % p.nodes_per_face];
  for (double& x : n) x *= kBoundaryNormal[side];
  return n;
}

template <int Dim, typename Flux>
FluxVector<Dim> stacked_pair_flux(const ElementView<Dim>& v, const ProjectedElement<Dim>& p, const Flux& flux,
                                  int a, int b, int dir) {
  if (v.cartesian) {
    FluxVector<Dim> f = flux.cartesian(a, b, dir);
    for (double& x : f) x *= v.scale[dir];
    return f;
  }
  const Vec<Dim> ja = stacked_metric<Dim>(v, p, a, dir);
  const Vec<Dim> jb = stacked_metric<Dim>(v, p, b, dir);
  Vec<Dim> alpha;
  for (int j = 0; j < Dim; ++j) alpha[j] = 0.5 * (ja[j] + jb[j]);
  return flux.directional(a, b, alpha);
}

template <int Dim>
const PrimitiveLogs<Dim>* table_of(const PrecomputedElementData<Dim>* pre) {
  return pre && pre->mode != Precompute::none ? pre->nodes.data() : nullptr;
}

}  // namespace detail

// Hybridized flux differencing over the volume+face node set of every line,
// lifted with [I; R]^T.
template <int Dim>
NodalFluxes<Dim> volume_gauss_fluxdiff(const ProjectedElement<Dim>& p, const ElementView<Dim>& v,
                                       const SBPOperator1D& op, const HybridizedOperators1D& hyb, FluxKind kind,
                                       const GasParams& gas, const PrecomputedElementData<Dim>* pre = nullptr) {
  const int n1d = v.n1d;
  const int nh = n1d + 2;
  NodalFluxes<Dim> out(p.num_volume, FluxVector<Dim>{});
  const Precompute mode = pre ? pre->mode : Precompute::none;
  detail::with_pair_flux<Dim>(kind, mode, p.states.data(), detail::table_of(pre), gas, [&](const auto& flux) {
    std::vector<int> idx(nh);
    NodalFluxes<Dim> fh(nh);
    for (int dir = 0; dir < Dim; ++dir) {
      const int stride = direction_stride<Dim>(dir, n1d);
      for (int f = 0; f < p.nodes_per_face; ++f) {
        const int start = face_volume_node<Dim>(dir, 0, f, n1d);
        for (int i = 0; i < n1d; ++i) idx[i] = start + i * stride;
        idx[n1d] = p.face_index(dir, 0, f);
        idx[n1d + 1] = p.face_index(dir, 1, f);
        std::fill(fh.begin(), fh.end(), FluxVector<Dim>{});
        for (int i = 0; i < nh; ++i)
          for (int k = i + 1; k < nh; ++k) {
            if (i >= n1d) continue;  // face-face block of Q_h is zero
            const FluxVector<Dim> fv = detail::stacked_pair_flux<Dim>(v, p, flux, idx[i], idx[k], dir);
            detail::axpy<Dim>(fh[i], 2.0 * hyb.Q_h(i, k), fv);
            detail::axpy<Dim>(fh[k], 2.0 * hyb.Q_h(k, i), fv);
          }
        for (int i = 0; i < n1d; ++i) {
          FluxVector<Dim> lifted = fh[i];
          for (int side = 0; side < 2; ++side) detail::axpy<Dim>(lifted, op.boundary_interp(side, i), fh[n1d + side]);
          detail::axpy<Dim>(out[idx[i]], op.inv_weights[i], lifted);
        }
      }
    }
  });
  detail::divide_by_jacobian<Dim>(v, out);
  return out;
}

// Dense skew-symmetric volume term on the Gauss nodes plus surface
// corrections from the B_h block on volume/face pairs.
template <int Dim>
NodalFluxes<Dim> volume_gauss_surface_correction(const ProjectedElement<Dim>& p, const ElementView<Dim>& v,
                                                 const SBPOperator1D& op, const HybridizedOperators1D& hyb,
                                                 FluxKind kind, const GasParams& gas,
                                                 const PrecomputedElementData<Dim>* pre = nullptr) {
  const int n1d = v.n1d;
  NodalFluxes<Dim> out(p.num_volume, FluxVector<Dim>{});
  const Precompute mode = pre ? pre->mode : Precompute::none;
  detail::with_pair_flux<Dim>(kind, mode, p.states.data(), detail::table_of(pre), gas, [&](const auto& flux) {
    detail::fluxdiff_lines<Dim>(v, hyb.Dsplit, flux, out);
    NodalFluxes<Dim> corr(n1d + 2);
    for (int dir = 0; dir < Dim; ++dir) {
      const int stride = direction_stride<Dim>(dir, n1d);
      for (int f = 0; f < p.nodes_per_face; ++f) {
        const int start = face_volume_node<Dim>(dir, 0, f, n1d);
        std::fill(corr.begin(), corr.end(), FluxVector<Dim>{});
        for (int i = 0; i < n1d; ++i)
          for (int side = 0; side < 2; ++side) {
            const int face = n1d + side;
            const FluxVector<Dim> fv =
                detail::stacked_pair_flux<Dim>(v, p, flux, start + i * stride, p.face_index(dir, side, f), dir);
            detail::axpy<Dim>(corr[i], hyb.B_h(i, face), fv);
            detail::axpy<Dim>(corr[face], hyb.B_h(face, i), fv);
          }
        for (int i = 0; i < n1d; ++i) {
          FluxVector<Dim> lifted = corr[i];
          for (int side = 0; side < 2; ++side) detail::axpy<Dim>(lifted, op.boundary_interp(side, i), corr[n1d + side]);
          detail::axpy<Dim>(out[start + i * stride], op.inv_weights[i], lifted);
        }
      }
    }
  });
  detail::divide_by_jacobian<Dim>(v, out);
  return out;
}

}  // namespace fluxdiff
