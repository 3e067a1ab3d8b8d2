#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fluxdiff/field.hpp"
#include "fluxdiff/means.hpp"
#include "fluxdiff/volume.hpp"

namespace fluxdiff {

// Per-variable arrays over the nodes of one element, padded to a multiple
// of the batch width with the neutral state rho = p = 1, v = 0.
template <int Dim>
struct ElementSoA {
  int num_nodes = 0;
  int padded = 0;
  int width = 1;
  Precompute mode = Precompute::primitives;
  std::array<std::vector<double>, Dim + 2> cons;
  std::vector<double> rho;
  std::array<std::vector<double>, Dim> v;
  std::vector<double> p;
  std::vector<double> log_rho;  // empty unless mode == primitives_and_logs
  std::vector<double> log_p;
};

inline int round_up(int n, int width) { return (n + width - 1) / width * width; }

// Fills `s` in place; storage is reused when the shape is unchanged.
template <int Dim>
void transpose_to_soa(ElementSoA<Dim>& s, const State<Dim>* u, int num_nodes, const GasParams& gas, Precompute mode,
                      int width = 4) {
  if (width < 1) throw ConfigError("batch width must be positive");
  s.num_nodes = num_nodes;
  s.width = width;
  s.padded = round_up(num_nodes, width);
  s.mode = mode == Precompute::primitives_and_logs ? mode : Precompute::primitives;
  const State<Dim> neutral = prim2cons<Dim>(Primitive<Dim>{1.0, Vec<Dim>{}, 1.0}, gas);
  for (auto& c : s.cons) c.resize(s.padded);
  s.rho.resize(s.padded);
  for (auto& c : s.v) c.resize(s.padded);
  s.p.resize(s.padded);
  const bool logs = s.mode == Precompute::primitives_and_logs;
  s.log_rho.resize(logs ? s.padded : 0);
  s.log_p.resize(logs ? s.padded : 0);
  for (int i = 0; i < s.padded; ++i) {
    const State<Dim>& ui = i < num_nodes ? u[i] : neutral;
    for (int c = 0; c < Dim + 2; ++c) s.cons[c][i] = ui[c];
    const Primitive<Dim> q = cons2prim<Dim>(ui, gas);
    s.rho[i] = q.rho;
    for (int d = 0; d < Dim; ++d) s.v[d][i] = q.v[d];
    s.p[i] = q.p;
    if (logs) {
      s.log_rho[i] = std::log(q.rho);
      s.log_p[i] = std::log(q.p);
    }
  }
}

template <int Dim>
ElementSoA<Dim> transpose_to_soa(const State<Dim>* u, int num_nodes, const GasParams& gas, Precompute mode,
                                 int width = 4) {
  ElementSoA<Dim> s;
  transpose_to_soa<Dim>(s, u, num_nodes, gas, mode, width);
  return s;
}

template <int Dim>
std::vector<State<Dim>> transpose_to_aos(const ElementSoA<Dim>& s) {
  std::vector<State<Dim>> u(s.num_nodes);
  for (int i = 0; i < s.num_nodes; ++i)
    for (int c = 0; c < Dim + 2; ++c) u[i][c] = s.cons[c][i];
  return u;
}

namespace detail {

// Optimized log mean for ordered arguments lo <= hi with the branch chosen by
// selecting operands, leaving one division per lane and no control flow.
// Same operations as logmean_sym.
inline double logmean_blend(double lo, double hi, double log_ratio) {
  const double u = logmean_u(lo, hi);
  const double sum = lo + hi, diff = hi - lo, sden = logmean_series_denominator(u);
  const bool series = u < kLogMeanSeriesThreshold;
  return (series ? sum : diff) / (series ? sden : log_ratio);
}

inline double inv_logmean_blend(double lo, double hi, double log_ratio) {
  const double u = logmean_u(lo, hi);
  const double sum = lo + hi, diff = hi - lo, sden = logmean_series_denominator(u);
  const bool series = u < kLogMeanSeriesThreshold;
  return (series ? sden : log_ratio) / (series ? sum : diff);
}

}  // namespace detail

// Lane-wise optimized log mean over n lanes.
inline void logmean_batched(const double* a_minus, const double* a_plus, double* out, int n) {
  for (int l = 0; l < n; ++l) {
    const double lo = std::min(a_minus[l], a_plus[l]);
    const double hi = std::max(a_minus[l], a_plus[l]);
    out[l] = detail::logmean_blend(lo, hi, std::log(hi / lo));
  }
}

inline void inv_logmean_batched(const double* a_minus, const double* a_plus, double* out, int n) {
  for (int l = 0; l < n; ++l) {
    const double lo = std::min(a_minus[l], a_plus[l]);
    const double hi = std::max(a_minus[l], a_plus[l]);
    out[l] = detail::inv_logmean_blend(lo, hi, std::log(hi / lo));
  }
}

namespace detail {

// One direction of an element, permuted so that node i of line `line` sits
// at i * lanes + line; `lanes` is the line count padded to the batch width.
// Each input variable and each accumulator occupies `total` contiguous slots.
// Storage and node maps are kept between calls with the same shape.
template <int Dim>
struct LineBlock {
  static constexpr int kRho = 0, kP = 1, kV = 2, kLogRho = 2 + Dim, kLogP = 3 + Dim, kJa = 4 + Dim;
  static constexpr int kInputs = 4 + 2 * Dim;
  int n1d = 0;
  int lines = 0;
  int lanes = 0;
  int total = 0;
  bool logs = false;
  std::array<std::vector<int>, Dim> node_of;  // per direction: permuted index -> element node, -1 for padding
  std::vector<double> in;  // rho, p, v, log rho, log p, contravariant vector of this direction
  std::vector<double> acc;

  double* var(int k) { return in.data() + static_cast<std::size_t>(k) * total; }
  double* sum(int c) { return acc.data() + static_cast<std::size_t>(c) * total; }

  void reshape(int n, int width) {
    const int ln = ipow<Dim - 1>(n);
    const int la = round_up(ln, width);
    if (n == n1d && la == lanes) return;
    n1d = n;
    lines = ln;
    lanes = la;
    total = n * la;
    in.assign(static_cast<std::size_t>(kInputs) * total, 0.0);
    acc.assign(static_cast<std::size_t>(Dim + 2) * total, 0.0);
    std::fill_n(var(kRho), total, 1.0);  // padding lanes hold rho = p = 1, v = 0
    std::fill_n(var(kP), total, 1.0);
    for (int dir = 0; dir < Dim; ++dir) {
      auto& map = node_of[dir];
      map.assign(total, -1);
      const int stride = direction_stride<Dim>(dir, n);
      const auto starts = line_starts<Dim>(dir, n);
      for (int line = 0; line < lines; ++line)
        for (int i = 0; i < n; ++i) map[i * lanes + line] = starts[line] + i * stride;
    }
  }
};

// Gathers the inputs of direction `dir` and seeds the accumulators with `out`.
template <int Dim>
void fill_line_block(LineBlock<Dim>& b, const ElementSoA<Dim>& s, const ElementView<Dim>& view, int dir,
                     const NodalFluxes<Dim>& out) {
  using B = LineBlock<Dim>;
  b.reshape(view.n1d, s.width);
  b.logs = !s.log_rho.empty();
  const int* map = b.node_of[dir].data();
  const int total = b.total;
  for (int q = 0; q < total; ++q) {
    const int node = map[q];
    if (node < 0) {
      for (int c = 0; c < Dim + 2; ++c) b.sum(c)[q] = 0.0;
      continue;
    }
    b.var(B::kRho)[q] = s.rho[node];
    b.var(B::kP)[q] = s.p[node];
    for (int d = 0; d < Dim; ++d) b.var(B::kV + d)[q] = s.v[d][node];
    if (b.logs) {
      b.var(B::kLogRho)[q] = s.log_rho[node];
      b.var(B::kLogP)[q] = s.log_p[node];
    }
    if (!view.cartesian)
      for (int d = 0; d < Dim; ++d) b.var(B::kJa + d)[q] = view.geo->metrics.Ja[node][dir][d];
    for (int c = 0; c < Dim + 2; ++c) b.sum(c)[q] = out[node][c];
  }
}

template <int Dim, FluxKind K, bool Cart, bool Logs>
void batched_pairs(LineBlock<Dim>& b, const Matrix& Dsplit, const ElementView<Dim>& view, int dir,
                   const GasParams& gas) {
  using B = LineBlock<Dim>;
  const int lanes = b.lanes;
  const std::ptrdiff_t T = b.total;
  const double kappa = gas.inv_gamma_minus_one();
  const double sc = Cart ? view.scale[dir] : 1.0;
  const double* __restrict in = b.in.data();
  double* __restrict acc = b.acc.data();
  for (int i = 0; i < b.n1d; ++i)
    for (int k = i + 1; k < b.n1d; ++k) {
      const double dik = Dsplit(i, k) * sc;
      const double dki = Dsplit(k, i) * sc;
      const int oa = i * lanes;
      const int ob = k * lanes;
#pragma GCC ivdep
      for (int l = 0; l < lanes; ++l) {
        const std::ptrdiff_t a = oa + l;
        const std::ptrdiff_t c = ob + l;
        std::array<double, Dim> alpha{};
        if constexpr (Cart) {
          alpha[dir] = 1.0;
        } else {
          for (int d = 0; d < Dim; ++d) alpha[d] = 0.5 * (in[(B::kJa + d) * T + a] + in[(B::kJa + d) * T + c]);
        }
        std::array<double, Dim> va, vc;
        for (int d = 0; d < Dim; ++d) {
          va[d] = in[(B::kV + d) * T + a];
          vc[d] = in[(B::kV + d) * T + c];
        }
        double vn_l = 0.0, vn_r = 0.0, vv = 0.0, vv_l = 0.0, vv_r = 0.0;
        for (int d = 0; d < Dim; ++d) {
          vn_l += va[d] * alpha[d];
          vn_r += vc[d] * alpha[d];
          vv += va[d] * vc[d];
          vv_l += va[d] * va[d];
          vv_r += vc[d] * vc[d];
        }
        const double rl = in[B::kRho * T + a], rr = in[B::kRho * T + c];
        const double pl = in[B::kP * T + a], pr = in[B::kP * T + c];
        std::array<double, Dim + 2> f;
        if constexpr (K == FluxKind::central) {
          const double el = pl * kappa + 0.5 * rl * vv_l;
          const double er = pr * kappa + 0.5 * rr * vv_r;
          f[0] = 0.5 * (rl * vn_l + rr * vn_r);
          for (int d = 0; d < Dim; ++d)
            f[1 + d] = 0.5 * ((rl * va[d] * vn_l + pl * alpha[d]) + (rr * vc[d] * vn_r + pr * alpha[d]));
          f[Dim + 1] = 0.5 * ((el + pl) * vn_l + (er + pr) * vn_r);
        } else {
          const double vn_avg = 0.5 * (vn_l + vn_r);
          const double p_avg = 0.5 * (pl + pr);
          double f_rho, energy_mean;
          if constexpr (K == FluxKind::shima_etal) {
            f_rho = 0.5 * (rl + rr) * vn_avg;
            energy_mean = p_avg * vn_avg * kappa;
          } else {
            const bool r_swap = rr < rl;
            const double r_lo = r_swap ? rr : rl, r_hi = r_swap ? rl : rr;
            const double x = rr * pl, y = rl * pr;
            const bool x_swap = y < x;
            const double x_lo = x_swap ? y : x, x_hi = x_swap ? x : y;
            double lr_rho, lr_x;
            if constexpr (Logs) {
              const double lrl = in[B::kLogRho * T + a], lrr = in[B::kLogRho * T + c];
              lr_rho = std::abs(lrl - lrr);
              lr_x = std::abs((lrr + in[B::kLogP * T + a]) - (lrl + in[B::kLogP * T + c]));
            } else {
              lr_rho = std::log(r_hi / r_lo);
              lr_x = std::log(x_hi / x_lo);
            }
            f_rho = logmean_blend(r_lo, r_hi, lr_rho) * vn_avg;
            energy_mean = f_rho * ((pl * pr) * inv_logmean_blend(x_lo, x_hi, lr_x)) * kappa;
          }
          f[0] = f_rho;
          if constexpr (Cart) {
            for (int d = 0; d < Dim; ++d) f[1 + d] = f_rho * (0.5 * (va[d] + vc[d]));
            f[1 + dir] += p_avg;
          } else {
            for (int d = 0; d < Dim; ++d) f[1 + d] = f_rho * (0.5 * (va[d] + vc[d])) + p_avg * alpha[d];
          }
          f[Dim + 1] = f_rho * 0.5 * vv + energy_mean + 0.5 * (pl * vn_r + pr * vn_l);
        }
        for (int q = 0; q < Dim + 2; ++q) {
          acc[q * T + a] += dik * f[q];
          acc[q * T + c] += dki * f[q];
        }
      }
      count_two_point(static_cast<std::uint64_t>(b.lines));
      if constexpr (K == FluxKind::ranocha_ec) count_logmean(2 * static_cast<std::uint64_t>(b.lines));
    }
}

template <int Dim, FluxKind K>
void batched_pairs(LineBlock<Dim>& b, const Matrix& Dsplit, const ElementView<Dim>& view, int dir,
                   const GasParams& gas) {
  const bool logs = b.logs;
  if (view.cartesian) {
    if (logs) batched_pairs<Dim, K, true, true>(b, Dsplit, view, dir, gas);
    else batched_pairs<Dim, K, true, false>(b, Dsplit, view, dir, gas);
  } else {
    if (logs) batched_pairs<Dim, K, false, true>(b, Dsplit, view, dir, gas);
    else batched_pairs<Dim, K, false, false>(b, Dsplit, view, dir, gas);
  }
}

}  // namespace detail

// Batched flux differencing on one element; same operator, fluxes and
// accumulation order as volume_fluxdiff, organised with the triangular pair
// loop outermost and contiguous lanes (tensor lines) innermost.
template <int Dim>
NodalFluxes<Dim> volume_fluxdiff_batched(const ElementSoA<Dim>& s, const ElementView<Dim>& view,
                                         const Matrix& Dsplit, FluxKind kind, const GasParams& gas) {
  if (!is_symmetric(kind)) {
    throw ConfigError("batched flux differencing requires shima_etal, ranocha_ec or central, got " +
                      std::string(to_string(kind)));
  }
  NodalFluxes<Dim> out(s.num_nodes, FluxVector<Dim>{});
  thread_local detail::LineBlock<Dim> b;
  for (int dir = 0; dir < Dim; ++dir) {
    detail::fill_line_block<Dim>(b, s, view, dir, out);
    switch (kind) {
      case FluxKind::shima_etal: detail::batched_pairs<Dim, FluxKind::shima_etal>(b, Dsplit, view, dir, gas); break;
      case FluxKind::ranocha_ec: detail::batched_pairs<Dim, FluxKind::ranocha_ec>(b, Dsplit, view, dir, gas); break;
      default: detail::batched_pairs<Dim, FluxKind::central>(b, Dsplit, view, dir, gas); break;
    }
    const auto& map = b.node_of[dir];
    for (int q = 0; q < b.total; ++q) {
      if (map[q] < 0) continue;
      for (int c = 0; c < Dim + 2; ++c) out[map[q]][c] = b.sum(c)[q];
    }
  }
  detail::divide_by_jacobian<Dim>(view, out);
  return out;
}

}  // namespace fluxdiff
