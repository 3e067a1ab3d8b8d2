#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fluxdiff/errors.hpp"
#include "fluxdiff/euler.hpp"
#include "fluxdiff/operators.hpp"
#include "fluxdiff/tensor.hpp"

namespace fluxdiff {

// Periodic structured mesh of a box. Element e has multi-index
// (e % N0, (e / N0) % N1, ...). A mesh without a mapping is Cartesian;
// otherwise `mapping` takes logical box coordinates to physical ones.
template <int Dim>
struct StructuredMesh {
  std::array<int, Dim> dims{};
  Vec<Dim> lo{};
  Vec<Dim> hi{};
  std::function<Vec<Dim>(const Vec<Dim>&)> mapping;

  bool curved() const { return static_cast<bool>(mapping); }

  int num_elements() const {
    int n = 1;
    for (int d = 0; d < Dim; ++d) n *= dims[d];
    return n;
  }

  double spacing(int dir) const { return (hi[dir] - lo[dir]) / dims[dir]; }
  double length(int dir) const { return hi[dir] - lo[dir]; }

  std::array<int, Dim> element_index(int e) const {
    std::array<int, Dim> idx;
    for (int d = 0; d < Dim; ++d) {
      idx[d] = e % dims[d];
      e /= dims[d];
    }
    return idx;
  }

  int element_from_index(const std::array<int, Dim>& idx) const {
    int e = 0;
    for (int d = Dim - 1; d >= 0; --d) e = e * dims[d] + idx[d];
    return e;
  }

  // Periodic neighbour across face (dir, side); side 0 is the lower face.
  int neighbor(int e, int dir, int side) const {
    auto idx = element_index(e);
    idx[dir] = (idx[dir] + (side == 0 ? dims[dir] - 1 : 1)) % dims[dir];
    return element_from_index(idx);
  }

  Vec<Dim> logical_point(int e, const Vec<Dim>& xi) const {
    const auto idx = element_index(e);
    Vec<Dim> x;
    for (int d = 0; d < Dim; ++d) x[d] = lo[d] + (idx[d] + 0.5 * (xi[d] + 1.0)) * spacing(d);
    return x;
  }

  Vec<Dim> physical_point(int e, const Vec<Dim>& xi) const {
    const Vec<Dim> x = logical_point(e, xi);
    return mapping ? mapping(x) : x;
  }
};

template <int Dim>
void check_mesh(const StructuredMesh<Dim>& mesh) {
  for (int d = 0; d < Dim; ++d) {
    if (mesh.dims[d] < 1) throw MeshError("mesh needs at least one element per direction");
    if (!(mesh.hi[d] > mesh.lo[d])) throw MeshError("mesh box has non-positive extent");
  }
}

template <int Dim>
StructuredMesh<Dim> cartesian_mesh(const std::array<int, Dim>& dims, const Vec<Dim>& lo, const Vec<Dim>& hi) {
  StructuredMesh<Dim> mesh{dims, lo, hi, {}};
  check_mesh(mesh);
  return mesh;
}

// x_i = X_i + a prod_k sin(2 pi (X_k - lo_k) / L_k), with a = amplitude * min h.
// The perturbation vanishes on the box boundary, so the map stays periodic.
template <int Dim>
StructuredMesh<Dim> sine_perturbed_mesh(const std::array<int, Dim>& dims, const Vec<Dim>& lo, const Vec<Dim>& hi,
                                        double amplitude = 0.1) {
  StructuredMesh<Dim> mesh{dims, lo, hi, {}};
  check_mesh(mesh);
  if (!(amplitude >= 0.0)) throw ParameterError("mesh perturbation amplitude must be non-negative");
  double h_min = mesh.spacing(0);
  for (int d = 1; d < Dim; ++d) h_min = std::min(h_min, mesh.spacing(d));
  const double a = amplitude * h_min;
  Vec<Dim> len;
  for (int d = 0; d < Dim; ++d) len[d] = mesh.length(d);
  mesh.mapping = [a, lo, len](const Vec<Dim>& X) {
    double s = a;
    for (int k = 0; k < Dim; ++k) s *= std::sin(2.0 * std::numbers::pi * (X[k] - lo[k]) / len[k]);
    Vec<Dim> x;
    for (int i = 0; i < Dim; ++i) x[i] = X[i] + s;
    return x;
  };
  return mesh;
}

// Ja[node][n][j] = (Ja)^n_j, the j-th component of the n-th scaled
// contravariant vector; J[node] is the Jacobian determinant.
template <int Dim>
struct MetricTerms {
  std::vector<std::array<Vec<Dim>, Dim>> Ja;
  std::vector<double> J;
};

namespace detail {

template <int Dim>
std::vector<double> coordinate_component(const std::vector<Vec<Dim>>& x, int c) {
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = x[i][c];
  return v;
}

[[noreturn]] inline void throw_bad_jacobian(int element, int node, double J) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "non-positive Jacobian J=" << J << " in element " << element << " at node " << node;
  throw MeshError(msg.str());
}

template <int Dim>
double covariant_determinant(const std::array<std::vector<double>, Dim * Dim>& dx, std::size_t i) {
  // dx[n * Dim + c] = d x_c / d xi_n
  if constexpr (Dim == 2) {
    return dx[0][i] * dx[3][i] - dx[1][i] * dx[2][i];
  } else {
    const auto a = [&](int n, int c) { return dx[n * 3 + c][i]; };
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  }
}

}  // namespace detail

// Metrics from nodal coordinates on the nodes of `op` (isoparametric).
// 2D uses the cross-product formulas, 3D the curl (conservative) form.
template <int Dim>
MetricTerms<Dim> metrics_from_coordinates(const std::vector<Vec<Dim>>& x, const SBPOperator1D& op,
                                          int element = 0) {
  static_assert(Dim == 2 || Dim == 3);
  const int n1d = op.num_nodes();
  const std::size_t nn = static_cast<std::size_t>(ipow<Dim>(n1d));
  if (x.size() != nn) throw GeometryError("coordinate array does not match operator size");
  std::array<std::vector<double>, Dim> X;
  for (int c = 0; c < Dim; ++c) X[c] = detail::coordinate_component<Dim>(x, c);
  std::array<std::vector<double>, Dim * Dim> dx;
  for (int n = 0; n < Dim; ++n)
    for (int c = 0; c < Dim; ++c) dx[n * Dim + c] = apply_along<Dim>(op.D, X[c], n, n1d);

  MetricTerms<Dim> m;
  m.Ja.resize(nn);
  m.J.resize(nn);
  if constexpr (Dim == 2) {
    for (std::size_t i = 0; i < nn; ++i) {
      const double x1_1 = dx[0][i], x2_1 = dx[1][i];  // d/d xi_1
      const double x1_2 = dx[2][i], x2_2 = dx[3][i];  // d/d xi_2
      m.Ja[i][0] = {x2_2, -x1_2};
      m.Ja[i][1] = {-x2_1, x1_1};
      m.J[i] = m.Ja[i][0][0] * m.Ja[i][1][1] - m.Ja[i][0][1] * m.Ja[i][1][0];
    }
  } else {
    // (Ja)^i_n = -(D_j (X_l D_k X_m) - D_k (X_l D_j X_m)), (i,j,k) and (n,m,l) cyclic.
    // Evaluated in extended precision with X_l shifted to the element
    // centroid (the shift drops out because D_j D_k = D_k D_j) and rounded
    // once: the discrete metric identity then holds to the final rounding,
    // and elements sharing a face, whose exact face values agree, store the
    // same doubles there.
    using Wide = long double;
    std::array<std::vector<Wide>, 3> Xw;
    std::array<Wide, 3> centroid{};
    for (int c = 0; c < 3; ++c) {
      Xw[c].assign(X[c].begin(), X[c].end());
      for (Wide v : Xw[c]) centroid[c] += v;
      centroid[c] /= static_cast<Wide>(nn);
      for (Wide& v : Xw[c]) v -= centroid[c];
    }
    std::array<std::vector<Wide>, 9> dxw;
    for (int n = 0; n < 3; ++n)
      for (int c = 0; c < 3; ++c) dxw[n * 3 + c] = apply_along<3, Wide>(op.D, Xw[c], n, n1d);
    for (int n = 0; n < 3; ++n) {
      const int mm = (n + 1) % 3;
      const int l = (n + 2) % 3;
      for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const int k = (i + 2) % 3;
        std::vector<Wide> wk(nn), wj(nn);
        for (std::size_t q = 0; q < nn; ++q) {
          wk[q] = Xw[l][q] * dxw[k * 3 + mm][q];
          wj[q] = Xw[l][q] * dxw[j * 3 + mm][q];
        }
        const auto a = apply_along<3, Wide>(op.D, wk, j, n1d);
        const auto b = apply_along<3, Wide>(op.D, wj, k, n1d);
        for (std::size_t q = 0; q < nn; ++q) m.Ja[q][i][n] = static_cast<double>(-(a[q] - b[q]));
      }
    }
    for (std::size_t q = 0; q < nn; ++q) m.J[q] = detail::covariant_determinant<3>(dx, q);
  }
  for (std::size_t i = 0; i < nn; ++i)
    if (!(m.J[i] > 0.0)) detail::throw_bad_jacobian(element, static_cast<int>(i), m.J[i]);
  return m;
}

template <int Dim>
std::vector<Vec<Dim>> element_coordinates(const StructuredMesh<Dim>& mesh, const SBPOperator1D& op, int element) {
  if (element < 0 || element >= mesh.num_elements()) throw MeshError("element index out of range");
  const int n1d = op.num_nodes();
  const int nn = ipow<Dim>(n1d);
  std::vector<Vec<Dim>> x(nn);
  for (int i = 0; i < nn; ++i) {
    const auto idx = node_multi_index<Dim>(i, n1d);
    Vec<Dim> xi;
    for (int d = 0; d < Dim; ++d) xi[d] = op.nodes[idx[d]];
    x[i] = mesh.physical_point(element, xi);
  }
  return x;
}

inline MetricTerms<2> compute_metrics_2d(const StructuredMesh<2>& mesh, const SBPOperator1D& op, int element) {
  return metrics_from_coordinates<2>(element_coordinates<2>(mesh, op, element), op, element);
}

inline MetricTerms<3> compute_metrics_3d(const StructuredMesh<3>& mesh, const SBPOperator1D& op, int element) {
  return metrics_from_coordinates<3>(element_coordinates<3>(mesh, op, element), op, element);
}

// alpha^{., n}_{i,k} = 1/2 ((Ja)^n_i + (Ja)^n_k)
template <int Dim>
Vec<Dim> averaged_direction(const MetricTerms<Dim>& m, int i, int k, int n) {
  Vec<Dim> a;
  for (int j = 0; j < Dim; ++j) a[j] = 0.5 * (m.Ja[i][n][j] + m.Ja[k][n][j]);
  return a;
}

// Geometry of one element on the nodes of a given operator. Face nodes of
// face (dir, side) are ordered by the remaining directions, first fastest.
template <int Dim>
struct ElementGeometry {
  std::vector<Vec<Dim>> x;
  MetricTerms<Dim> metrics;
  std::array<std::array<std::vector<Vec<Dim>>, 2>, Dim> face_normals;  // scaled outward normals
};

template <int Dim>
struct MeshGeometry {
  StructuredMesh<Dim> mesh;
  int degree = 0;
  NodeFamily family = NodeFamily::lgl;
  std::vector<ElementGeometry<Dim>> elements;

  bool cartesian() const { return !mesh.curved(); }
  int nodes_1d() const { return degree + 1; }
  int nodes_per_element() const { return ipow<Dim>(degree + 1); }
  int nodes_per_face() const { return ipow<Dim - 1>(degree + 1); }
};

// Volume node of face node f on face (dir, side) for n1d nodes per
// direction (only meaningful for LGL, where faces carry volume nodes).
template <int Dim>
int face_volume_node(int dir, int side, int f, int n1d) {
  std::array<int, Dim> idx{};
  int rem = f;
  for (int d = 0; d < Dim; ++d) {
    if (d == dir) continue;
    idx[d] = rem % n1d;
    rem /= n1d;
  }
  idx[dir] = side == 0 ? 0 : n1d - 1;
  return node_linear_index<Dim>(idx, n1d);
}

// Start node and stride of the line through face node f along `dir`.
template <int Dim>
std::pair<int, int> face_line(int dir, int f, int n1d) {
  return {face_volume_node<Dim>(dir, 0, f, n1d), direction_stride<Dim>(dir, n1d)};
}

namespace detail {

template <int Dim>
std::array<std::array<std::vector<Vec<Dim>>, 2>, Dim> face_normals(const MetricTerms<Dim>& m,
                                                                    const SBPOperator1D& op) {
  const int n1d = op.num_nodes();
  const int nf = ipow<Dim - 1>(n1d);
  std::array<std::array<std::vector<Vec<Dim>>, 2>, Dim> out;
  for (int dir = 0; dir < Dim; ++dir)
    for (int side = 0; side < 2; ++side) {
      auto& normals = out[dir][side];
      normals.assign(nf, Vec<Dim>{});
      for (int f = 0; f < nf; ++f) {
        const auto [start, stride] = face_line<Dim>(dir, f, n1d);
        for (int k = 0; k < n1d; ++k) {
          const double r = op.boundary_interp(side, k) * kBoundaryNormal[side];
          if (r == 0.0) continue;
          for (int j = 0; j < Dim; ++j) normals[f][j] += r * m.Ja[start + k * stride][dir][j];
        }
      }
    }
  return out;
}

}  // namespace detail

// Metrics for every element. For Gauss nodes the geometry is built on LGL
// nodes of the same degree and interpolated, which keeps the (polynomial)
// coordinates and contravariant vectors identical on both node sets.
template <int Dim>
MeshGeometry<Dim> build_geometry(const StructuredMesh<Dim>& mesh, const SBPOperator1D& op) {
  check_mesh(mesh);
  MeshGeometry<Dim> g;
  g.mesh = mesh;
  g.degree = op.degree;
  g.family = op.family;
  const int ne = mesh.num_elements();
  g.elements.resize(ne);
  const int n1d = op.num_nodes();
  const std::size_t nn = static_cast<std::size_t>(ipow<Dim>(n1d));
  const bool gauss = op.family == NodeFamily::gauss;
  const SBPOperator1D lgl = gauss ? lgl_operator(op.degree) : SBPOperator1D{};
  const Matrix to_gauss = gauss ? interpolation_matrix(lgl.nodes, op.nodes) : Matrix{};
  for (int e = 0; e < ne; ++e) {
    auto& el = g.elements[e];
    if (!gauss) {
      el.x = element_coordinates<Dim>(mesh, op, e);
      el.metrics = metrics_from_coordinates<Dim>(el.x, op, e);
    } else {
      const auto xl = element_coordinates<Dim>(mesh, lgl, e);
      const auto ml = metrics_from_coordinates<Dim>(xl, lgl, e);
      el.x.assign(nn, Vec<Dim>{});
      el.metrics.Ja.assign(nn, {});
      for (int c = 0; c < Dim; ++c) {
        const auto xc = apply_tensor<Dim>(to_gauss, detail::coordinate_component<Dim>(xl, c));
        for (std::size_t i = 0; i < nn; ++i) el.x[i][c] = xc[i];
        for (int n = 0; n < Dim; ++n) {
          std::vector<double> v(ml.Ja.size());
          for (std::size_t i = 0; i < v.size(); ++i) v[i] = ml.Ja[i][n][c];
          const auto vg = apply_tensor<Dim>(to_gauss, v);
          for (std::size_t i = 0; i < nn; ++i) el.metrics.Ja[i][n][c] = vg[i];
        }
      }
      // J from the covariant vectors of the interpolated coordinates.
      std::array<std::vector<double>, Dim * Dim> dx;
      for (int n = 0; n < Dim; ++n)
        for (int c = 0; c < Dim; ++c)
          dx[n * Dim + c] = apply_along<Dim>(op.D, detail::coordinate_component<Dim>(el.x, c), n, n1d);
      el.metrics.J.resize(nn);
      for (std::size_t i = 0; i < nn; ++i) {
        el.metrics.J[i] = detail::covariant_determinant<Dim>(dx, i);
        if (!(el.metrics.J[i] > 0.0)) detail::throw_bad_jacobian(e, static_cast<int>(i), el.metrics.J[i]);
      }
    }
    el.face_normals = detail::face_normals<Dim>(el.metrics, op);
  }
  return g;
}

// Largest metric-identity residual |sum_n D_n (Ja)^n_j| over all nodes.
template <int Dim>
double metric_identity_residual(const MetricTerms<Dim>& m, const SBPOperator1D& op) {
  const int n1d = op.num_nodes();
  const std::size_t nn = m.J.size();
  double worst = 0.0;
  for (int j = 0; j < Dim; ++j) {
    std::vector<double> sum(nn, 0.0);
    for (int n = 0; n < Dim; ++n) {
      std::vector<double> v(nn);
      for (std::size_t i = 0; i < nn; ++i) v[i] = m.Ja[i][n][j];
      const auto d = apply_along<Dim>(op.D, v, n, n1d);
      for (std::size_t i = 0; i < nn; ++i) sum[i] += d[i];
    }
    for (double s : sum) worst = std::max(worst, std::abs(s));
  }
  return worst;
}

}  // namespace fluxdiff
