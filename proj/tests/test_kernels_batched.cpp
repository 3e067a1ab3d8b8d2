#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fluxdiff/discretization.hpp"
#include "fluxdiff/initial_conditions.hpp"

using namespace fluxdiff;

namespace {

const GasParams kGas(1.4);

template <int Dim>
StructuredMesh<Dim> box_mesh(int n, bool curved) {
  std::array<int, Dim> dims;
  dims.fill(n);
  Vec<Dim> lo, hi;
  lo.fill(-5.0);
  hi.fill(5.0);
  if (curved) return sine_perturbed_mesh<Dim>(dims, lo, hi, n / (4.0 * std::numbers::pi * Dim));
  return cartesian_mesh<Dim>(dims, lo, hi);
}

// Max over nodes of |a - b| / max(|b|) per node.
template <int Dim>
double node_rel_diff(const NodalFluxes<Dim>& a, const NodalFluxes<Dim>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double diff = 0.0, ref = 0.0;
    for (int c = 0; c < Dim + 2; ++c) {
      diff = std::max(diff, std::abs(a[i][c] - b[i][c]));
      ref = std::max(ref, std::abs(b[i][c]));
    }
    worst = std::max(worst, diff / ref);
  }
  return worst;
}

template <int Dim>
void check_equivalence(bool curved, int elements_wanted) {
  const int n = curved ? 3 : 1;
  const auto mesh = box_mesh<Dim>(n, curved);
  for (int p = 3; p <= 7; ++p) {
    const OperatorSet ops = make_operator_set(p, NodeFamily::lgl);
    const auto g = build_geometry<Dim>(mesh, ops.op);
    const int ne = g.mesh.num_elements();
    double worst = 0.0;
    for (int draw = 0; draw * ne < elements_wanted; ++draw) {
      const auto u = random_field<Dim>(g, 1000 * p + draw, kGas);
      for (int e = 0; e < ne; ++e) {
        const auto v = element_view<Dim>(g, e);
        for (FluxKind kind : {FluxKind::shima_etal, FluxKind::ranocha_ec, FluxKind::central})
          for (Precompute mode : {Precompute::primitives, Precompute::primitives_and_logs}) {
            const auto soa = transpose_to_soa<Dim>(u.element(e), g.nodes_per_element(), kGas, mode, 4);
            const auto a = volume_fluxdiff_batched<Dim>(soa, v, ops.Dsplit, kind, kGas);
            const auto table = precompute_element_data<Dim>(u.element(e), g.nodes_per_element(), kGas, mode);
            const auto b = volume_fluxdiff<Dim>(u.element(e), v, ops.Dsplit, kind, kGas, &table);
            worst = std::max(worst, node_rel_diff<Dim>(a, b));
          }
      }
    }
    EXPECT_LT(worst, 1e-13) << "d=" << Dim << " p=" << p << " curved=" << curved;
  }
}

}  // namespace

TEST(Batched, MatchesScalarKernelCartesian2D) { check_equivalence<2>(false, 100); }
TEST(Batched, MatchesScalarKernelCartesian3D) { check_equivalence<3>(false, 100); }
TEST(Batched, MatchesScalarKernelCurved2D) { check_equivalence<2>(true, 100); }
TEST(Batched, MatchesScalarKernelCurved3D) { check_equivalence<3>(true, 27); }

TEST(Batched, WidthDoesNotChangeResults) {
  const auto mesh = box_mesh<3>(2, true);
  const OperatorSet ops = make_operator_set(4, NodeFamily::lgl);
  const auto g = build_geometry<3>(mesh, ops.op);
  const auto u = random_field<3>(g, 5, kGas);
  const auto v = element_view<3>(g, 3);
  const auto ref = volume_fluxdiff_batched<3>(transpose_to_soa<3>(u.element(3), g.nodes_per_element(), kGas,
                                                                  Precompute::primitives, 1),
                                              v, ops.Dsplit, FluxKind::ranocha_ec, kGas);
  for (int width : {2, 4, 8, 16}) {
    const auto soa = transpose_to_soa<3>(u.element(3), g.nodes_per_element(), kGas, Precompute::primitives, width);
    const auto out = volume_fluxdiff_batched<3>(soa, v, ops.Dsplit, FluxKind::ranocha_ec, kGas);
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], ref[i]) << "width " << width;
  }
}

TEST(Batched, ConstantStateInteriorNodesVanish) {
  const auto mesh = box_mesh<2>(2, true);
  const int p = 5;
  const OperatorSet ops = make_operator_set(p, NodeFamily::lgl);
  const auto g = build_geometry<2>(mesh, ops.op);
  const auto u0 = ic_free_stream<2>(kGas, 1.2, 0.9, 0.4);
  const std::vector<State<2>> u(g.nodes_per_element(), u0);
  const auto soa = transpose_to_soa<2>(u.data(), g.nodes_per_element(), kGas, Precompute::primitives_and_logs);
  const auto out = volume_fluxdiff_batched<2>(soa, element_view<2>(g, 1), ops.Dsplit, FluxKind::ranocha_ec, kGas);
  for (int i = 0; i < g.nodes_per_element(); ++i) {
    const auto idx = node_multi_index<2>(i, p + 1);
    if (idx[0] == 0 || idx[0] == p || idx[1] == 0 || idx[1] == p) continue;
    for (double x : out[i]) EXPECT_LT(std::abs(x), 1e-12);
  }
}

TEST(Batched, FluxCountsMatchScalarKernel) {
  for (int p = 3; p <= 7; ++p) {
    const auto mesh = box_mesh<3>(1, false);
    const OperatorSet ops = make_operator_set(p, NodeFamily::lgl);
    const auto g = build_geometry<3>(mesh, ops.op);
    const auto u = random_field<3>(g, p, kGas);
    const auto v = element_view<3>(g, 0);
    for (FluxKind kind : {FluxKind::shima_etal, FluxKind::ranocha_ec}) {
      FluxCounter scalar, batched;
      {
        auto guard = count_guard(scalar);
        volume_fluxdiff<3>(u.element(0), v, ops.Dsplit, kind, kGas);
      }
      const auto soa = transpose_to_soa<3>(u.element(0), g.nodes_per_element(), kGas, Precompute::primitives);
      {
        auto guard = count_guard(batched);
        volume_fluxdiff_batched<3>(soa, v, ops.Dsplit, kind, kGas);
      }
      EXPECT_EQ(batched.snapshot(), scalar.snapshot()) << "p=" << p << " " << to_string(kind);
    }
  }
}

TEST(Batched, UnsupportedFluxRejected) {
  const auto mesh = box_mesh<2>(1, false);
  const OperatorSet ops = make_operator_set(3, NodeFamily::lgl);
  const auto g = build_geometry<2>(mesh, ops.op);
  const auto u = random_field<2>(g, 1, kGas);
  const auto soa = transpose_to_soa<2>(u.element(0), g.nodes_per_element(), kGas, Precompute::primitives);
  EXPECT_THROW(volume_fluxdiff_batched<2>(soa, element_view<2>(g, 0), ops.Dsplit, FluxKind::llf, kGas), ConfigError);
  EXPECT_THROW(transpose_to_soa<2>(u.element(0), g.nodes_per_element(), kGas, Precompute::primitives, 0),
               ConfigError);
}

TEST(Batched, RhsWithBatchedKernelsMatchesScalarRhs) {
  const auto mesh = box_mesh<3>(3, true);
  const OperatorSet ops = make_operator_set(3, NodeFamily::lgl);
  const auto g = build_geometry<3>(mesh, ops.op);
  const auto u = random_field<3>(g, 8, kGas);
  RhsConfig c;
  c.surface_flux = FluxKind::llf;
  c.precompute = Precompute::primitives_and_logs;
  const auto ref = rhs<3>(u, g, ops, c, kGas);
  c.batched = true;
  const auto out = rhs<3>(u, g, ops, c, kGas);
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i)
    for (int k = 0; k < 5; ++k) {
      diff = std::max(diff, std::abs(out.values[i][k] - ref.values[i][k]));
      scale = std::max(scale, std::abs(ref.values[i][k]));
    }
  EXPECT_LT(diff / scale, 1e-13);
}

TEST(SoA, RoundTripIsBitwiseAndPaddingIsNeutral) {
  const auto mesh = box_mesh<3>(1, false);
  const auto op = make_operator(2, NodeFamily::lgl);  // 27 nodes, padded to 32
  const auto g = build_geometry<3>(mesh, op);
  const auto u = random_field<3>(g, 4, kGas);
  const auto soa = transpose_to_soa<3>(u.element(0), 27, kGas, Precompute::primitives_and_logs, 8);
  EXPECT_EQ(soa.padded, 32);
  const auto back = transpose_to_aos<3>(soa);
  for (int i = 0; i < 27; ++i) EXPECT_EQ(back[i], u(0, i));
  for (int i = 27; i < 32; ++i) {
    EXPECT_EQ(soa.rho[i], 1.0);
    EXPECT_EQ(soa.p[i], 1.0);
    for (int d = 0; d < 3; ++d) EXPECT_EQ(soa.v[d][i], 0.0);
    EXPECT_EQ(soa.log_rho[i], 0.0);
    EXPECT_EQ(soa.log_p[i], 0.0);
  }
  for (int i = 0; i < 27; ++i) {
    const auto q = cons2prim<3>(u(0, i), kGas);
    EXPECT_EQ(soa.rho[i], q.rho);
    EXPECT_EQ(soa.p[i], q.p);
    EXPECT_EQ(soa.log_rho[i], std::log(q.rho));
    EXPECT_EQ(soa.log_p[i], std::log(q.p));
  }
  const auto plain = transpose_to_soa<3>(u.element(0), 27, kGas, Precompute::primitives, 8);
  EXPECT_TRUE(plain.log_rho.empty());
}

TEST(LogMeanBatched, MatchesScalarPerLane) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> expo(-3.0, 3.0);
  std::uniform_real_distribution<double> rel(-16.0, 2.0);
  constexpr int n = 4096;
  std::vector<double> a(n), b(n), out(n), inv(n);
  for (int i = 0; i < n; ++i) {
    a[i] = std::pow(10.0, expo(rng));
    b[i] = a[i] * (1.0 + std::pow(10.0, rel(rng)));
    if (i % 2) std::swap(a[i], b[i]);
  }
  logmean_batched(a.data(), b.data(), out.data(), n);
  inv_logmean_batched(a.data(), b.data(), inv.data(), n);
  int series = 0;
  for (int i = 0; i < n; ++i) {
    const double ref = logmean_optimized(a[i], b[i]);
    const double iref = inv_logmean_optimized(a[i], b[i]);
    EXPECT_LE(std::abs(out[i] - ref), 1e-14 * ref) << a[i] << " " << b[i];
    EXPECT_LE(std::abs(inv[i] - iref), 1e-14 * iref) << a[i] << " " << b[i];
    if (detail::logmean_u(std::min(a[i], b[i]), std::max(a[i], b[i])) < kLogMeanSeriesThreshold) ++series;
  }
  EXPECT_GT(series, n / 10);
  EXPECT_LT(series, 9 * n / 10);
}

TEST(LogMeanBatched, MixedBranchLanesAndEqualLanes) {
  // lanes 0/2 take the series branch, lanes 1/3 the log branch
  const double a[4] = {1.0, 1.0, 3.0, 0.2};
  const double b[4] = {1.0 + 1e-5, 1.5, 3.0 * (1.0 - 2e-3), 7.0};
  double out[4];
  logmean_batched(a, b, out, 4);
  for (int l = 0; l < 4; ++l) EXPECT_LE(std::abs(out[l] - logmean_optimized(a[l], b[l])), 1e-14 * out[l]) << l;
  EXPECT_LT(detail::logmean_u(a[0], b[0]), kLogMeanSeriesThreshold);
  EXPECT_GE(detail::logmean_u(a[1], b[1]), kLogMeanSeriesThreshold);

  const double same[3] = {0.3, 2.0, 1e5};
  double eq[3];
  logmean_batched(same, same, eq, 3);
  for (int l = 0; l < 3; ++l) EXPECT_EQ(eq[l], same[l]);
}

TEST(LogMeanBatched, LanePermutationEquivariance) {
  const double a[4] = {1.0, 2.0, 0.5, 9.0};
  const double b[4] = {1.1, 2.0 + 1e-9, 4.0, 3.0};
  const int perm[4] = {2, 0, 3, 1};
  double pa[4], pb[4], out[4], pout[4];
  for (int l = 0; l < 4; ++l) {
    pa[l] = a[perm[l]];
    pb[l] = b[perm[l]];
  }
  logmean_batched(a, b, out, 4);
  logmean_batched(pa, pb, pout, 4);
  for (int l = 0; l < 4; ++l) EXPECT_EQ(pout[l], out[perm[l]]);
}

TEST(LogMeanBatched, ThresholdStraddlingInputsAgreeWithBranchyScalar) {
  // u = ((b - a)/(a + b))^2 sweeps across the series threshold
  std::vector<double> a, b;
  for (int k = -200; k <= 200; ++k) {
    const double u = kLogMeanSeriesThreshold * (1.0 + k * 1e-4);
    const double r = std::sqrt(u);
    a.push_back(1.0 - r);
    b.push_back(1.0 + r);
  }
  std::vector<double> out(a.size());
  logmean_batched(a.data(), b.data(), out.data(), static_cast<int>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ref = logmean_optimized(a[i], b[i]);
    EXPECT_LE(std::abs(out[i] - ref), 1e-14 * ref);
  }
}
