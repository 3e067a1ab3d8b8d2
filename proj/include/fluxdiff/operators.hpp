#pragma once

// One-dimensional summation-by-parts operators on [-1, 1] built from
// Legendre-Gauss-Lobatto (LGL) or Legendre-Gauss nodes, plus the derived
// flux-differencing, hybridized and transfer operators. Multidimensional
// operators are never formed; the kernels apply these along tensor lines.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "fluxdiff/errors.hpp"
#include "fluxdiff/matrix.hpp"

namespace fluxdiff {

inline constexpr int kMaxDegree = 15;

enum class NodeFamily { lgl, gauss };

inline std::string to_string(NodeFamily family) { return family == NodeFamily::lgl ? "lgl" : "gauss"; }

// Boundary operators use B = diag(1, 1) and N = diag(-1, +1); row 0 of the
// boundary interpolation is the left endpoint, row 1 the right endpoint.
inline constexpr double kBoundaryNormal[2] = {-1.0, 1.0};

struct SBPOperator1D {
  int degree = 0;
  NodeFamily family = NodeFamily::lgl;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> inv_weights;
  Matrix D;
  Matrix boundary_interp;  // 2 x (p+1)

  int num_nodes() const { return degree + 1; }
};

namespace detail {

// P_n(x) and P_n'(x) by the three-term recurrence.
inline std::pair<double, double> legendre_and_derivative(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p_prev = 1.0;
  double p = x;
  double dp_prev = 0.0;
  double dp = 1.0;
  for (int k = 2; k <= n; ++k) {
    const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
    const double dp_next = dp_prev + (2.0 * k - 1.0) * p;
    p_prev = p;
    p = p_next;
    dp_prev = dp;
    dp = dp_next;
  }
  return {p, dp};
}

inline void check_degree(int p) {
  if (p < 1 || p > kMaxDegree) {
    throw ParameterError("polynomial degree must be in [1, " + std::to_string(kMaxDegree) + "], got " +
                         std::to_string(p));
  }
}

// Newton iteration on f/f' with a fixed cap; converges quadratically from the
// Chebyshev guesses for all supported degrees.
template <typename F>
double newton_root(double x, F&& f_over_df) {
  for (int it = 0; it < 100; ++it) {
    const double dx = f_over_df(x);
    x -= dx;
    if (std::abs(dx) < 1e-15) break;
  }
  return x;
}

inline std::vector<double> barycentric_weights(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> lambda(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) lambda[j] *= x[j] - x[k];
    }
    lambda[j] = 1.0 / lambda[j];
  }
  return lambda;
}

inline Matrix differentiation_matrix(const std::vector<double>& x) {
  const std::size_t n = x.size();
  const std::vector<double> lambda = barycentric_weights(x);
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      d(i, j) = (lambda[j] / lambda[i]) / (x[i] - x[j]);
      diag -= d(i, j);
    }
    d(i, i) = diag;
  }
  return d;
}

}  // namespace detail

// Lagrange interpolation matrix from the nodes `from` to the points `to`.
inline Matrix interpolation_matrix(const std::vector<double>& from, const std::vector<double>& to) {
  const std::vector<double> lambda = detail::barycentric_weights(from);
  Matrix m(to.size(), from.size());
  for (std::size_t i = 0; i < to.size(); ++i) {
    bool exact = false;
    for (std::size_t j = 0; j < from.size(); ++j) {
      if (to[i] == from[j]) {
        m(i, j) = 1.0;
        exact = true;
        break;
      }
    }
    if (exact) continue;
    double denom = 0.0;
    for (std::size_t j = 0; j < from.size(); ++j) {
      const double t = lambda[j] / (to[i] - from[j]);
      m(i, j) = t;
      denom += t;
    }
    for (std::size_t j = 0; j < from.size(); ++j) m(i, j) /= denom;
  }
  return m;
}

inline std::pair<std::vector<double>, std::vector<double>> lgl_nodes_and_weights(int p) {
  const int n = p + 1;
  std::vector<double> x(n), w(n);
  x[0] = -1.0;
  x[p] = 1.0;
  // Interior nodes are the roots of P_p'; compute the left half and mirror.
  for (int i = 1; i <= p / 2; ++i) {
    const double guess = -std::cos(std::numbers::pi * i / p);
    x[i] = detail::newton_root(guess, [p](double t) {
      const auto [lp, dlp] = detail::legendre_and_derivative(p, t);
      // (1 - t^2) P'' = 2 t P' - p (p + 1) P
      const double d2lp = (2.0 * t * dlp - p * (p + 1.0) * lp) / (1.0 - t * t);
      return dlp / d2lp;
    });
    x[p - i] = -x[i];
  }
  if (p % 2 == 0) x[p / 2] = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lp = detail::legendre_and_derivative(p, x[i]).first;
    w[i] = 2.0 / (p * (p + 1.0) * lp * lp);
  }
  return {x, w};
}

inline std::pair<std::vector<double>, std::vector<double>> gauss_nodes_and_weights(int p) {
  const int n = p + 1;
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n / 2; ++i) {
    const double guess = -std::cos(std::numbers::pi * (2.0 * i + 1.0) / (2.0 * n));
    x[i] = detail::newton_root(guess, [n](double t) {
      const auto [lp, dlp] = detail::legendre_and_derivative(n, t);
      return lp / dlp;
    });
    x[p - i] = -x[i];
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dlp = detail::legendre_and_derivative(n, x[i]).second;
    w[i] = 2.0 / ((1.0 - x[i] * x[i]) * dlp * dlp);
  }
  return {x, w};
}

namespace detail {

inline SBPOperator1D assemble_operator(int p, NodeFamily family, std::vector<double> x, std::vector<double> w) {
  SBPOperator1D op;
  op.degree = p;
  op.family = family;
  op.nodes = std::move(x);
  op.weights = std::move(w);
  op.inv_weights.resize(op.weights.size());
  for (std::size_t i = 0; i < op.weights.size(); ++i) op.inv_weights[i] = 1.0 / op.weights[i];
  op.D = differentiation_matrix(op.nodes);
  if (family == NodeFamily::lgl) {
    op.boundary_interp = Matrix(2, p + 1);
    op.boundary_interp(0, 0) = 1.0;
    op.boundary_interp(1, p) = 1.0;
  } else {
    op.boundary_interp = interpolation_matrix(op.nodes, {-1.0, 1.0});
  }
  return op;
}

}  // namespace detail

inline SBPOperator1D lgl_operator(int p) {
  detail::check_degree(p);
  auto [x, w] = lgl_nodes_and_weights(p);
  return detail::assemble_operator(p, NodeFamily::lgl, std::move(x), std::move(w));
}

inline SBPOperator1D gauss_operator(int p) {
  detail::check_degree(p);
  auto [x, w] = gauss_nodes_and_weights(p);
  return detail::assemble_operator(p, NodeFamily::gauss, std::move(x), std::move(w));
}

inline SBPOperator1D make_operator(int p, NodeFamily family) {
  return family == NodeFamily::lgl ? lgl_operator(p) : gauss_operator(p);
}

// M^{-1} R^T B N R
inline Matrix boundary_term_matrix(const SBPOperator1D& op) {
  const int n = op.num_nodes();
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int side = 0; side < 2; ++side) {
        s += op.boundary_interp(side, i) * kBoundaryNormal[side] * op.boundary_interp(side, k);
      }
      m(i, k) = op.inv_weights[i] * s;
    }
  return m;
}

// Entrywise residual M D + D^T M - R^T B N R.
inline Matrix sbp_residual(const SBPOperator1D& op) {
  const int n = op.num_nodes();
  const Matrix boundary = boundary_term_matrix(op);
  Matrix r(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      r(i, k) = op.weights[i] * op.D(i, k) + op.D(k, i) * op.weights[k] - op.weights[i] * boundary(i, k);
    }
  return r;
}

struct FluxDiffOperator1D {
  Matrix Dsplit;
};

namespace detail {

// 2 D - M^{-1} R^T B N R for any node family. The diagonal vanishes in exact
// arithmetic because M Dsplit is antisymmetric; it is stored as exact zero.
inline Matrix dsplit_matrix(const SBPOperator1D& op) {
  Matrix d = 2.0 * op.D - boundary_term_matrix(op);
  for (int i = 0; i < op.num_nodes(); ++i) d(i, i) = 0.0;
  return d;
}

}  // namespace detail

inline FluxDiffOperator1D build_dsplit(const SBPOperator1D& op) {
  if (op.family != NodeFamily::lgl) {
    throw UnsupportedOperatorError(
        "flux differencing operator requires a diagonal boundary operator (LGL nodes)");
  }
  return {detail::dsplit_matrix(op)};
}

// Operators on the stacked node set: volume nodes 0..p, then the left face
// point (index p+1) and the right face point (index p+2).
struct HybridizedOperators1D {
  Matrix Q_h;
  Matrix B_h;
  Matrix Dsplit;  // M^{-1} times the volume block of 2 Q_h
  int num_volume = 0;
};

inline HybridizedOperators1D build_hybridized(const SBPOperator1D& op) {
  const int n = op.num_nodes();
  const int nh = n + 2;
  HybridizedOperators1D h;
  h.num_volume = n;
  h.Q_h = Matrix(nh, nh);
  h.B_h = Matrix(nh, nh);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      h.Q_h(i, k) = 0.5 * (op.weights[i] * op.D(i, k) - op.weights[k] * op.D(k, i));
    }
  for (int side = 0; side < 2; ++side) {
    const int f = n + side;
    for (int i = 0; i < n; ++i) {
      const double e = op.boundary_interp(side, i) * kBoundaryNormal[side];  // (R^T B N)_{i,side}
      h.B_h(i, f) = e;
      h.B_h(f, i) = -e;
      h.Q_h(i, f) = 0.5 * e;
      h.Q_h(f, i) = -0.5 * e;
    }
  }
  h.Dsplit = detail::dsplit_matrix(op);
  return h;
}

struct TransferMatrices {
  Matrix interp;   // (q+1) x (p+1)
  Matrix project;  // (p+1) x (q+1), L2 projection
  Matrix lift;     // (p+1) x (q+1), M_p^{-1} V^T M_q with the diagonal degree-p mass
};

// Interpolation from degree p to degree q nodes of the same family, and the
// L2 projection back, orthogonal in the degree-q quadrature inner product.
inline TransferMatrices transfer_matrices(int p, int q, NodeFamily family) {
  if (q < p) {
    throw ParameterError("transfer_matrices: target degree " + std::to_string(q) + " < source degree " +
                         std::to_string(p));
  }
  detail::check_degree(p);
  detail::check_degree(q);
  const SBPOperator1D op_p = make_operator(p, family);
  const SBPOperator1D op_q = make_operator(q, family);
  TransferMatrices t;
  if (q == p) {
    t.interp = Matrix::identity(p + 1);
    t.project = Matrix::identity(p + 1);
    t.lift = Matrix::identity(p + 1);
    return t;
  }
  t.interp = interpolation_matrix(op_p.nodes, op_q.nodes);
  const int np = p + 1;
  const int nq = q + 1;
  Eigen::MatrixXd v(nq, np);
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < np; ++j) v(i, j) = t.interp(i, j);
  const Eigen::VectorXd wq = Eigen::Map<const Eigen::VectorXd>(op_q.weights.data(), nq);
  const Eigen::MatrixXd vt_w = v.transpose() * wq.asDiagonal();
  const Eigen::MatrixXd mass = vt_w * v;
  const Eigen::MatrixXd proj = mass.ldlt().solve(vt_w);
  t.project = Matrix(np, nq);
  t.lift = Matrix(np, nq);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nq; ++j) {
      t.project(i, j) = proj(i, j);
      t.lift(i, j) = op_p.inv_weights[i] * t.interp(j, i) * op_q.weights[j];
    }
  return t;
}

}  // namespace fluxdiff
