#pragma once

#include <vector>

#include "fluxdiff/field.hpp"
#include "fluxdiff/geometry.hpp"
#include "fluxdiff/operators.hpp"
#include "fluxdiff/tensor.hpp"

namespace fluxdiff {

// What the volume kernels need to know about one element. On Cartesian
// elements fluxes are Cartesian and scaled by 2/h_n; otherwise directional
// fluxes use the metric terms and the result is divided by J per node.
template <int Dim>
struct ElementView {
  const ElementGeometry<Dim>* geo = nullptr;
  bool cartesian = true;
  Vec<Dim> scale{};
  int n1d = 0;

  int num_nodes() const { return ipow<Dim>(n1d); }
};

template <int Dim>
ElementView<Dim> element_view(const MeshGeometry<Dim>& g, int e) {
  ElementView<Dim> v;
  v.geo = &g.elements[e];
  v.cartesian = g.cartesian();
  for (int d = 0; d < Dim; ++d) v.scale[d] = 2.0 / g.mesh.spacing(d);
  v.n1d = g.nodes_1d();
  return v;
}

template <int Dim>
using NodalFluxes = std::vector<FluxVector<Dim>>;

namespace detail {

// Start node of every line along `dir`.
template <int Dim>
std::vector<int> line_starts(int dir, int n1d) {
  const int nf = ipow<Dim - 1>(n1d);
  std::vector<int> s(nf);
  for (int f = 0; f < nf; ++f) s[f] = face_volume_node<Dim>(dir, 0, f, n1d);
  return s;
}

template <int Dim>
void divide_by_jacobian(const ElementView<Dim>& v, NodalFluxes<Dim>& out) {
  if (v.cartesian) return;
  const auto& J = v.geo->metrics.J;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double inv = 1.0 / J[i];
    for (double& x : out[i]) x *= inv;
  }
}

// Contravariant (or scaled Cartesian) one-point fluxes at every node for
// direction n; one one-point evaluation per node.
template <int Dim>
NodalFluxes<Dim> contravariant_fluxes(const State<Dim>* u, const ElementView<Dim>& v, int n, const GasParams& gas) {
  const int nn = v.num_nodes();
  NodalFluxes<Dim> F(nn);
  for (int i = 0; i < nn; ++i) {
    if (v.cartesian) {
      F[i] = physical_flux<Dim>(u[i], n, gas);
      for (double& x : F[i]) x *= v.scale[n];
    } else {
      F[i] = physical_flux_directional<Dim>(u[i], v.geo->metrics.Ja[i][n], gas);
    }
  }
  return F;
}

template <int Dim>
std::vector<State<Dim>> apply_tensor_states(const Matrix& A, const std::vector<State<Dim>>& u) {
  std::vector<State<Dim>> out;
  for (int c = 0; c < Dim + 2; ++c) {
    std::vector<double> comp(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) comp[i] = u[i][c];
    const auto r = apply_tensor<Dim>(A, comp);
    if (out.empty()) out.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) out[i][c] = r[i];
  }
  return out;
}

}  // namespace detail

// Strong form: sum_n D_n F^n with one-point fluxes, d(p+1)^d evaluations.
template <int Dim>
NodalFluxes<Dim> volume_strong(const State<Dim>* u, const ElementView<Dim>& v, const SBPOperator1D& op,
                               const GasParams& gas) {
  const int n1d = v.n1d;
  NodalFluxes<Dim> out(v.num_nodes(), FluxVector<Dim>{});
  for (int n = 0; n < Dim; ++n) {
    const auto F = detail::contravariant_fluxes<Dim>(u, v, n, gas);
    const int stride = direction_stride<Dim>(n, n1d);
    for (int start : detail::line_starts<Dim>(n, n1d))
      for (int i = 0; i < n1d; ++i)
        for (int k = 0; k < n1d; ++k) detail::axpy<Dim>(out[start + i * stride], op.D(i, k), F[start + k * stride]);
  }
  detail::divide_by_jacobian<Dim>(v, out);
  return out;
}

// Weak form: -sum_n M^{-1} D_n^T M F^n.
template <int Dim>
NodalFluxes<Dim> volume_weak(const State<Dim>* u, const ElementView<Dim>& v, const SBPOperator1D& op,
                             const GasParams& gas) {
  const int n1d = v.n1d;
  NodalFluxes<Dim> out(v.num_nodes(), FluxVector<Dim>{});
  for (int n = 0; n < Dim; ++n) {
    const auto F = detail::contravariant_fluxes<Dim>(u, v, n, gas);
    const int stride = direction_stride<Dim>(n, n1d);
    for (int start : detail::line_starts<Dim>(n, n1d))
      for (int i = 0; i < n1d; ++i)
        for (int k = 0; k < n1d; ++k) {
          const double a = -op.weights[k] * op.D(k, i) * op.inv_weights[i];
          detail::axpy<Dim>(out[start + i * stride], a, F[start + k * stride]);
        }
  }
  detail::divide_by_jacobian<Dim>(v, out);
  return out;
}

namespace detail {

template <int Dim, typename Flux>
void fluxdiff_lines(const ElementView<Dim>& v, const Matrix& Dsplit, const Flux& flux, NodalFluxes<Dim>& out) {
  const int n1d = v.n1d;
  for (int n = 0; n < Dim; ++n) {
    const int stride = direction_stride<Dim>(n, n1d);
    for (int start : line_starts<Dim>(n, n1d)) {
      for (int i = 0; i < n1d; ++i) {
        const int a = start + i * stride;
        for (int k = i + 1; k < n1d; ++k) {
          const int b = start + k * stride;
          if (v.cartesian) {
            const FluxVector<Dim> f = flux.cartesian(a, b, n);
            axpy<Dim>(out[a], Dsplit(i, k) * v.scale[n], f);
            axpy<Dim>(out[b], Dsplit(k, i) * v.scale[n], f);
          } else {
            const FluxVector<Dim> f = flux.directional(a, b, averaged_direction<Dim>(v.geo->metrics, a, b, n));
            axpy<Dim>(out[a], Dsplit(i, k), f);
            axpy<Dim>(out[b], Dsplit(k, i), f);
          }
        }
      }
    }
  }
}

}  // namespace detail

// Flux differencing with the skew-symmetric operator: every pair i < k on a
// line is evaluated once and scattered to both nodes.
template <int Dim>
NodalFluxes<Dim> volume_fluxdiff(const State<Dim>* u, const ElementView<Dim>& v, const Matrix& Dsplit,
                                 FluxKind kind, const GasParams& gas,
                                 const PrecomputedElementData<Dim>* pre = nullptr) {
  NodalFluxes<Dim> out(v.num_nodes(), FluxVector<Dim>{});
  const Precompute mode = pre ? pre->mode : Precompute::none;
  const PrimitiveLogs<Dim>* table = pre && mode != Precompute::none ? pre->nodes.data() : nullptr;
  detail::with_pair_flux<Dim>(kind, mode, u, table, gas,
                              [&](const auto& flux) { detail::fluxdiff_lines<Dim>(v, Dsplit, flux, out); });
  detail::divide_by_jacobian<Dim>(v, out);
  return out;
}

// Reference form: sum_k 2 D_ik f(u_i, u_k) over all k, minus the boundary
// consistency term M^{-1} R^T B N R applied to the one-point fluxes.
template <int Dim>
NodalFluxes<Dim> volume_fluxdiff_full_sum(const State<Dim>* u, const ElementView<Dim>& v, const SBPOperator1D& op,
                                          FluxKind kind, const GasParams& gas) {
  const int n1d = v.n1d;
  const Matrix boundary = boundary_term_matrix(op);
  NodalFluxes<Dim> out(v.num_nodes(), FluxVector<Dim>{});
  for (int n = 0; n < Dim; ++n) {
    const auto F = detail::contravariant_fluxes<Dim>(u, v, n, gas);
    const int stride = direction_stride<Dim>(n, n1d);
    for (int start : detail::line_starts<Dim>(n, n1d))
      for (int i = 0; i < n1d; ++i) {
        const int a = start + i * stride;
        for (int k = 0; k < n1d; ++k) {
          const int b = start + k * stride;
          FluxVector<Dim> f;
          if (v.cartesian) {
            f = flux_cartesian<Dim>(kind, u[a], u[b], n, gas);
            for (double& x : f) x *= v.scale[n];
          } else {
            f = flux_directional<Dim>(kind, u[a], u[b], averaged_direction<Dim>(v.geo->metrics, a, b, n), gas);
          }
          detail::axpy<Dim>(out[a], 2.0 * op.D(i, k), f);
          detail::axpy<Dim>(out[a], -boundary(i, k), F[b]);
        }
      }
  }
  detail::divide_by_jacobian<Dim>(v, out);
  return out;
}

// Curvilinear reference form: Cartesian fluxes combined with the averaged
// metric terms, sum_j alpha^{j,n}_{ik} f^j(u_i, u_k).
template <int Dim>
NodalFluxes<Dim> volume_fluxdiff_cartesian_combination(const State<Dim>* u, const ElementView<Dim>& v,
                                                       const Matrix& Dsplit, FluxKind kind, const GasParams& gas) {
  const int n1d = v.n1d;
  NodalFluxes<Dim> out(v.num_nodes(), FluxVector<Dim>{});
  for (int n = 0; n < Dim; ++n) {
    const int stride = direction_stride<Dim>(n, n1d);
    for (int start : detail::line_starts<Dim>(n, n1d))
      for (int i = 0; i < n1d; ++i) {
        const int a = start + i * stride;
        for (int k = 0; k < n1d; ++k) {
          if (k == i) continue;
          const int b = start + k * stride;
          Vec<Dim> alpha{};
          if (v.cartesian) alpha[n] = v.scale[n];
          else alpha = averaged_direction<Dim>(v.geo->metrics, a, b, n);
          FluxVector<Dim> f{};
          for (int j = 0; j < Dim; ++j) detail::axpy<Dim>(f, alpha[j], flux_cartesian<Dim>(kind, u[a], u[b], j, gas));
          detail::axpy<Dim>(out[a], Dsplit(i, k), f);
        }
      }
  }
  detail::divide_by_jacobian<Dim>(v, out);
  return out;
}

// Interpolate to degree q, weak form there, then test with the degree-p
// basis and divide by the diagonal degree-p mass so the result pairs with the
// LGL surface term. Cartesian only.
template <int Dim>
NodalFluxes<Dim> volume_overintegration(const State<Dim>* u, const ElementView<Dim>& v, const SBPOperator1D& op_q,
                                        const TransferMatrices& transfer, const GasParams& gas) {
  if (!v.cartesian) throw ConfigError("overintegration is supported on Cartesian meshes only");
  const int np = ipow<Dim>(v.n1d);
  const std::vector<State<Dim>> up(u, u + np);
  const std::vector<State<Dim>> uq = detail::apply_tensor_states<Dim>(transfer.interp, up);
  ElementView<Dim> vq = v;
  vq.n1d = op_q.num_nodes();
  const NodalFluxes<Dim> vol_q = volume_weak<Dim>(uq.data(), vq, op_q, gas);
  return detail::apply_tensor_states<Dim>(transfer.lift, vol_q);
}

// out += M^{-1} R^T B N R F along every line of a Cartesian element. The Dsplit
// form already subtracts this term; adding it back gives the strong form.
template <int Dim>
void add_boundary_term(NodalFluxes<Dim>& out, const State<Dim>* u, const ElementView<Dim>& v, const SBPOperator1D& op,
                       const GasParams& gas) {
  if (!v.cartesian) throw ConfigError("add_boundary_term: Cartesian elements only");
  const Matrix bnd = boundary_term_matrix(op);
  const int n1d = v.n1d;
  for (int n = 0; n < Dim; ++n) {
    const int stride = direction_stride<Dim>(n, n1d);
    for (int start : detail::line_starts<Dim>(n, n1d))
      for (int i = 0; i < n1d; ++i)
        for (int k = 0; k < n1d; ++k) {
          if (bnd(i, k) == 0.0) continue;
          auto f = physical_flux<Dim>(u[start + k * stride], n, gas);
          for (double& x : f) x *= v.scale[n];
          detail::axpy<Dim>(out[start + i * stride], bnd(i, k), f);
        }
  }
}

}  // namespace fluxdiff
