#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "fluxdiff/euler.hpp"
#include "fluxdiff/field.hpp"
#include "fluxdiff/geometry.hpp"
#include "fluxdiff/operators.hpp"
#include "fluxdiff/tensor.hpp"

namespace fluxdiff {

// M_i J_i at every node of every element (tensor quadrature weight times J).
template <int Dim>
std::vector<double> quadrature_weights(const MeshGeometry<Dim>& g, const SBPOperator1D& op) {
  const int nn = g.nodes_per_element();
  const int n1d = g.nodes_1d();
  std::vector<double> w(static_cast<std::size_t>(g.mesh.num_elements()) * nn);
  for (int e = 0; e < g.mesh.num_elements(); ++e)
    for (int i = 0; i < nn; ++i) {
      const auto idx = node_multi_index<Dim>(i, n1d);
      double m = 1.0;
      for (int d = 0; d < Dim; ++d) m *= op.weights[idx[d]];
      w[static_cast<std::size_t>(e) * nn + i] = m * g.elements[e].metrics.J[i];
    }
  return w;
}

struct EntropyRate {
  double rate = 0.0;        // sum M J w . du
  double scale = 0.0;       // sum M J sum_c |w_c du_c|
  double normalized() const { return scale > 0.0 ? std::abs(rate) / scale : 0.0; }
  double signed_normalized() const { return scale > 0.0 ? rate / scale : 0.0; }
};

template <int Dim>
EntropyRate entropy_rate(const SolutionField<Dim>& u, const SolutionField<Dim>& dudt, const std::vector<double>& mj,
                         const GasParams& gas) {
  EntropyRate r;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto w = entropy_vars<Dim>(u.values[i], gas);
    for (int c = 0; c < Dim + 2; ++c) {
      const double t = mj[i] * w.w[c] * dudt.values[i][c];
      r.rate += t;
      r.scale += std::abs(t);
    }
  }
  return r;
}

// Componentwise sum M J du_c against one common scale, sum M J max_c |du_c|;
// a component that vanishes analytically then reads as roundoff, not O(1).
template <int Dim>
struct ConservationRate {
  std::array<double, Dim + 2> rate{};
  double scale = 0.0;
  double max_normalized() const {
    if (!(scale > 0.0)) return 0.0;
    double m = 0.0;
    for (double r : rate) m = std::max(m, std::abs(r) / scale);
    return m;
  }
};

template <int Dim>
ConservationRate<Dim> conservation_rate(const SolutionField<Dim>& dudt, const std::vector<double>& mj) {
  ConservationRate<Dim> r;
  for (std::size_t i = 0; i < dudt.size(); ++i) {
    double big = 0.0;
    for (int c = 0; c < Dim + 2; ++c) {
      r.rate[c] += mj[i] * dudt.values[i][c];
      big = std::max(big, std::abs(dudt.values[i][c]));
    }
    r.scale += mj[i] * big;
  }
  return r;
}

template <int Dim>
std::array<double, Dim + 2> integral(const SolutionField<Dim>& u, const std::vector<double>& mj) {
  std::array<double, Dim + 2> s{};
  for (std::size_t i = 0; i < u.size(); ++i)
    for (int c = 0; c < Dim + 2; ++c) s[c] += mj[i] * u.values[i][c];
  return s;
}

// sqrt(sum M J (u_c - exact_c)^2) per component.
template <int Dim, typename Exact>
std::array<double, Dim + 2> l2_error(const SolutionField<Dim>& u, const MeshGeometry<Dim>& g,
                                     const std::vector<double>& mj, Exact&& exact) {
  std::array<double, Dim + 2> s{};
  const int nn = u.nodes_per_element;
  for (int e = 0; e < u.num_elements; ++e)
    for (int i = 0; i < nn; ++i) {
      const State<Dim> ex = exact(g.elements[e].x[i]);
      const double m = mj[static_cast<std::size_t>(e) * nn + i];
      for (int c = 0; c < Dim + 2; ++c) {
        const double d = u(e, i)[c] - ex[c];
        s[c] += m * d * d;
      }
    }
  for (double& x : s) x = std::sqrt(x);
  return s;
}

template <int Dim>
double max_abs(const SolutionField<Dim>& u) {
  double m = 0.0;
  for (const auto& s : u.values)
    for (double x : s) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace fluxdiff
