#pragma once

#include <optional>
#include <vector>

#include "fluxdiff/field.hpp"
#include "fluxdiff/gauss.hpp"
#include "fluxdiff/geometry.hpp"
#include "fluxdiff/parallel.hpp"
#include "fluxdiff/volume.hpp"

namespace fluxdiff {

namespace detail {

template <int Dim>
FluxVector<Dim> scaled(FluxVector<Dim> f, double s) {
  for (double& x : f) x *= s;
  return f;
}

}  // namespace detail

// Interface fluxes on LGL meshes, one evaluation per interface node: the
// flux through the upper face of element e in direction n is computed with
// e's outward normal and applied with opposite signs to e and its upper
// neighbour. Adds M^{-1} R^T B f^num (divided by J on curved meshes) to
// `out`. With `subtract_inner` the one-point flux at the face is removed as
// well, which is the boundary part of the strong form.
template <int Dim>
void surface_terms(const SolutionField<Dim>& u, const MeshGeometry<Dim>& g, const SBPOperator1D& op, FluxKind kind,
                   const GasParams& gas, SolutionField<Dim>& out, bool subtract_inner = false, int threads = 1,
                   FluxCounter* counter = nullptr) {
  if (op.family != NodeFamily::lgl) throw UnsupportedOperatorError("surface_terms expects LGL operators");
  const int ne = g.mesh.num_elements();
  const int n1d = g.nodes_1d();
  const int nf = g.nodes_per_face();
  const bool cart = g.cartesian();
  // fhat[(e * Dim + n) * nf + f]: flux through the upper face of e in direction n
  std::vector<FluxVector<Dim>> fhat(static_cast<std::size_t>(ne) * Dim * nf);
  parallel_for(ne, threads, [&](int e) {
    std::optional<CountGuard> guard;
    if (counter) guard.emplace(*counter);
    const auto& geo = g.elements[e];
    for (int n = 0; n < Dim; ++n) {
      const int nb = g.mesh.neighbor(e, n, 1);
      for (int f = 0; f < nf; ++f) {
        const State<Dim>& ul = u(e, face_volume_node<Dim>(n, 1, f, n1d));
        const State<Dim>& ur = u(nb, face_volume_node<Dim>(n, 0, f, n1d));
        auto& slot = fhat[(static_cast<std::size_t>(e) * Dim + n) * nf + f];
        if (cart) slot = detail::scaled<Dim>(flux_cartesian<Dim>(kind, ul, ur, n, gas), 2.0 / g.mesh.spacing(n));
        else slot = flux_directional<Dim>(kind, ul, ur, geo.face_normals[n][1][f], gas);
      }
    }
  });
  const double inv_w_first = op.inv_weights.front();
  const double inv_w_last = op.inv_weights.back();
  parallel_for(ne, threads, [&](int e) {
    std::optional<CountGuard> guard;
    if (counter) guard.emplace(*counter);
    const auto& geo = g.elements[e];
    for (int n = 0; n < Dim; ++n) {
      const int lower = g.mesh.neighbor(e, n, 0);
      const double scale = cart ? 2.0 / g.mesh.spacing(n) : 1.0;
      for (int f = 0; f < nf; ++f) {
        const int a = face_volume_node<Dim>(n, 1, f, n1d);
        const int b = face_volume_node<Dim>(n, 0, f, n1d);
        FluxVector<Dim> up = fhat[(static_cast<std::size_t>(e) * Dim + n) * nf + f];
        FluxVector<Dim> down = detail::scaled<Dim>(fhat[(static_cast<std::size_t>(lower) * Dim + n) * nf + f], -1.0);
        if (subtract_inner) {
          if (cart) {
            const auto fa = detail::scaled<Dim>(physical_flux<Dim>(u(e, a), n, gas), scale);
            const auto fb = detail::scaled<Dim>(physical_flux<Dim>(u(e, b), n, gas), -scale);
            detail::axpy<Dim>(up, -1.0, fa);
            detail::axpy<Dim>(down, -1.0, fb);
          } else {
            detail::axpy<Dim>(up, -1.0, physical_flux_directional<Dim>(u(e, a), geo.face_normals[n][1][f], gas));
            detail::axpy<Dim>(down, -1.0, physical_flux_directional<Dim>(u(e, b), geo.face_normals[n][0][f], gas));
          }
        }
        const double ja = cart ? 1.0 : geo.metrics.J[a];
        const double jb = cart ? 1.0 : geo.metrics.J[b];
        detail::axpy<Dim>(out(e, a), inv_w_last / ja, up);
        detail::axpy<Dim>(out(e, b), inv_w_first / jb, down);
      }
    }
  });
}

// Gauss coupling: every element evaluates the fluxes on its own faces from
// its projected face states and its neighbours', so each interface flux is
// computed twice. Lifted to the volume nodes with M^{-1} R^T.
template <int Dim>
void surface_terms_gauss(const std::vector<ProjectedElement<Dim>>& proj, const MeshGeometry<Dim>& g,
                         const SBPOperator1D& op, FluxKind kind, const GasParams& gas, SolutionField<Dim>& out,
                         int threads = 1, FluxCounter* counter = nullptr) {
  if (op.family != NodeFamily::gauss) throw UnsupportedOperatorError("surface_terms_gauss expects Gauss operators");
  const int ne = g.mesh.num_elements();
  const int n1d = g.nodes_1d();
  const int nf = g.nodes_per_face();
  const bool cart = g.cartesian();
  parallel_for(ne, threads, [&](int e) {
    std::optional<CountGuard> guard;
    if (counter) guard.emplace(*counter);
    const auto& geo = g.elements[e];
    for (int n = 0; n < Dim; ++n) {
      const int stride = direction_stride<Dim>(n, n1d);
      for (int side = 0; side < 2; ++side) {
        const int nb = g.mesh.neighbor(e, n, side);
        for (int f = 0; f < nf; ++f) {
          const State<Dim>& own = proj[e].face(n, side, f);
          const State<Dim>& other = proj[nb].face(n, 1 - side, f);
          FluxVector<Dim> fhat;
          if (cart) {
            Vec<Dim> unit{};
            unit[n] = kBoundaryNormal[side];
            fhat = detail::scaled<Dim>(flux_directional<Dim>(kind, own, other, unit, gas), 2.0 / g.mesh.spacing(n));
          } else {
            fhat = flux_directional<Dim>(kind, own, other, geo.face_normals[n][side][f], gas);
          }
          const int start = face_volume_node<Dim>(n, 0, f, n1d);
          for (int i = 0; i < n1d; ++i) {
            const int node = start + i * stride;
            const double jac = cart ? 1.0 : geo.metrics.J[node];
            detail::axpy<Dim>(out(e, node), op.inv_weights[i] * op.boundary_interp(side, i) / jac, fhat);
          }
        }
      }
    }
  });
}

}  // namespace fluxdiff
