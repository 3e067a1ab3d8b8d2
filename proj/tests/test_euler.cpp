#include <gtest/gtest.h>

#include <random>

#include "fluxdiff/euler.hpp"
#include "fluxdiff/fluxes.hpp"
#include "test_support.hpp"

namespace fluxdiff {
namespace {

using testing::random_state;

const GasParams kGas(1.4);

TEST(GasParams, StoresInverse) {
  const GasParams gas(1.4);
  EXPECT_EQ(gas.inv_gamma_minus_one(), 1.0 / (1.4 - 1.0));
  EXPECT_THROW(GasParams(1.0), ParameterError);
}

TEST(Cons2Prim, Examples) {
  auto q = cons2prim<2>({1.0, 0.0, 0.0, 2.5}, kGas);
  EXPECT_DOUBLE_EQ(q.rho, 1.0);
  EXPECT_DOUBLE_EQ(q.v[0], 0.0);
  EXPECT_DOUBLE_EQ(q.p, 1.0);

  q = cons2prim<2>({2.0, 2.0, 0.0, 3.0}, kGas);
  EXPECT_DOUBLE_EQ(q.v[0], 1.0);
  EXPECT_NEAR(q.p, 0.8, 1e-15);
}

TEST(Cons2Prim, RejectsInadmissible) {
  EXPECT_THROW(cons2prim<2>({0.0, 0.0, 0.0, 1.0}, kGas), AdmissibilityError);
  EXPECT_THROW(cons2prim<2>({1.0, 3.0, 0.0, 1.0}, kGas), AdmissibilityError);
  try {
    cons2prim<2>({-2.0, 0.0, 0.0, 1.0}, kGas);
    FAIL();
  } catch (const AdmissibilityError& e) {
    EXPECT_NE(std::string(e.what()).find("rho=-2"), std::string::npos);
  }
}

TEST(Prim2Cons, Examples) {
  auto u = prim2cons<2>({1.0, {0.0, 0.0}, 1.0}, kGas);
  EXPECT_DOUBLE_EQ(u[3], 2.5);
  u = prim2cons<2>({1.0, {1.0, 1.0}, 10.0}, kGas);
  EXPECT_DOUBLE_EQ(u[3], 26.0);
  EXPECT_THROW(prim2cons<2>({1.0, {0.0, 0.0}, -1.0}, kGas), AdmissibilityError);
}

template <int Dim>
void check_round_trips() {
  std::mt19937_64 rng(17 + Dim);
  double worst_prim = 0.0, worst_entropy = 0.0, worst_entropy_all = 0.0;
  for (int s = 0; s < 10000; ++s) {
    const State<Dim> u = random_state<Dim>(rng, kGas);
    const State<Dim> back = prim2cons<Dim>(cons2prim<Dim>(u, kGas), kGas);
    const State<Dim> back_w = entropy2cons<Dim>(entropy_vars<Dim>(u, kGas), kGas);
    const double scale = testing::max_abs(u);
    worst_prim = std::max(worst_prim, testing::max_abs_diff(u, back) / scale);
    const double err_w = testing::max_abs_diff(u, back_w) / scale;
    worst_entropy_all = std::max(worst_entropy_all, err_w);
    // w_1 carries -rho|v|^2/(2p), so its rounding alone perturbs the inverse
    // by about eps * rho|v|^2/p relative.
    const auto q = cons2prim<Dim>(u, kGas);
    if (q.rho * dot<Dim>(q.v, q.v) / q.p <= 100.0) worst_entropy = std::max(worst_entropy, err_w);
  }
  EXPECT_LT(worst_prim, 1e-15);
  EXPECT_LT(worst_entropy, 1e-13);
  EXPECT_LT(worst_entropy_all, 4e-13);
}

TEST(StateConversions, RoundTrips2D) { check_round_trips<2>(); }
TEST(StateConversions, RoundTrips3D) { check_round_trips<3>(); }

TEST(PhysicalFlux, Examples) {
  const State<2> stagnant = prim2cons<2>({1.0, {0.0, 0.0}, 1.0}, kGas);
  const auto f0 = physical_flux<2>(stagnant, 0, kGas);
  EXPECT_EQ(f0[0], 0.0);
  EXPECT_DOUBLE_EQ(f0[1], 1.0);
  EXPECT_EQ(f0[2], 0.0);
  EXPECT_EQ(f0[3], 0.0);

  const State<2> moving = prim2cons<2>({1.0, {2.0, 0.0}, 1.0}, kGas);
  EXPECT_DOUBLE_EQ(moving[3], 4.5);
  const auto f = physical_flux<2>(moving, 0, kGas);
  EXPECT_DOUBLE_EQ(f[0], 2.0);
  EXPECT_DOUBLE_EQ(f[1], 5.0);
  EXPECT_DOUBLE_EQ(f[2], 0.0);
  EXPECT_DOUBLE_EQ(f[3], 11.0);
}

TEST(PhysicalFlux, DirectionalMatchesComponentSum) {
  std::mt19937_64 rng(5);
  for (int s = 0; s < 100; ++s) {
    const State<3> u = random_state<3>(rng, kGas);
    const Vec<3> n = testing::random_unit_vector<3>(rng);
    FluxVector<3> sum{};
    for (int j = 0; j < 3; ++j) {
      const auto fj = physical_flux<3>(u, j, kGas);
      for (int c = 0; c < 5; ++c) sum[c] += n[j] * fj[c];
    }
    const auto fd = physical_flux_directional<3>(u, n, kGas);
    EXPECT_LT(testing::max_abs_diff(sum, fd), 1e-13 * (1.0 + testing::max_abs(sum)));
  }
}

TEST(EntropyVars, Examples) {
  const State<2> u = prim2cons<2>({1.0, {0.0, 0.0}, 1.0}, kGas);
  const auto w = entropy_vars<2>(u, kGas);
  EXPECT_NEAR(w.w[0], 3.5, 1e-15);
  EXPECT_EQ(w.w[1], 0.0);
  EXPECT_EQ(w.w[2], 0.0);
  EXPECT_DOUBLE_EQ(w.w[3], -1.0);

  const auto back = entropy2cons<2>({{3.5, 0.0, 0.0, -1.0}}, kGas);
  EXPECT_NEAR(back[0], 1.0, 1e-15);
  EXPECT_NEAR(back[1], 0.0, 1e-15);
  EXPECT_NEAR(back[3], 2.5, 1e-14);
}

TEST(EntropyVars, LastComponentIsMinusRhoOverP) {
  std::mt19937_64 rng(11);
  for (int s = 0; s < 100; ++s) {
    const State<2> u = random_state<2>(rng, kGas);
    const auto q = cons2prim<2>(u, kGas);
    EXPECT_EQ(entropy_vars<2>(u, kGas).w[3], -(q.rho / q.p));
  }
  EXPECT_THROW(entropy2cons<2>({{1.0, 0.0, 0.0, 0.5}}, kGas), AdmissibilityError);
}

// dU/du by central differences must reproduce the entropy variables.
template <int Dim>
void check_entropy_gradient() {
  std::mt19937_64 rng(23);
  for (int s = 0; s < 100; ++s) {
    const State<Dim> u = random_state<Dim>(rng, kGas, 0.5, 5.0, 2.0);
    const auto w = entropy_vars<Dim>(u, kGas);
    for (int c = 0; c < Dim + 2; ++c) {
      const double h = 1e-6 * std::max(1.0, std::abs(u[c]));
      State<Dim> up = u, um = u;
      up[c] += h;
      um[c] -= h;
      const double dU = (entropy_and_potential<Dim>(up, kGas).entropy - entropy_and_potential<Dim>(um, kGas).entropy) /
                        (2.0 * h);
      EXPECT_LT(std::abs(dU - w.w[c]), 1e-6 * std::max(1.0, std::abs(w.w[c])));
    }
  }
}

TEST(EntropyVars, GradientOfEntropy2D) { check_entropy_gradient<2>(); }
TEST(EntropyVars, GradientOfEntropy3D) { check_entropy_gradient<3>(); }

TEST(EntropyPotential, Examples) {
  auto e = entropy_and_potential<2>(prim2cons<2>({1.0, {0.0, 0.0}, 1.0}, kGas), kGas);
  EXPECT_EQ(e.potential[0], 0.0);
  EXPECT_EQ(e.potential[1], 0.0);
  e = entropy_and_potential<2>(prim2cons<2>({2.0, {3.0, 0.0}, 1.0}, kGas), kGas);
  EXPECT_DOUBLE_EQ(e.potential[0], 6.0);
  EXPECT_EQ(e.potential[1], 0.0);
}

// psi^j = w . f^j - F^j with the entropy flux F^j = U v_j.
template <int Dim>
void check_potential_identity() {
  std::mt19937_64 rng(31);
  for (int s = 0; s < 1000; ++s) {
    const State<Dim> u = random_state<Dim>(rng, kGas);
    const auto q = cons2prim<Dim>(u, kGas);
    const auto w = entropy_vars<Dim>(u, kGas);
    const auto pair = entropy_and_potential<Dim>(u, kGas);
    for (int j = 0; j < Dim; ++j) {
      const auto f = physical_flux<Dim>(u, j, kGas);
      double wf = 0.0, scale = 0.0;
      for (int c = 0; c < Dim + 2; ++c) {
        wf += w.w[c] * f[c];
        scale += std::abs(w.w[c] * f[c]);
      }
      const double psi = wf - pair.entropy * q.v[j];
      EXPECT_LT(std::abs(psi - pair.potential[j]), 1e-13 * std::max(1.0, scale));
    }
  }
}

TEST(EntropyPotential, MatchesDefinition2D) { check_potential_identity<2>(); }
TEST(EntropyPotential, MatchesDefinition3D) { check_potential_identity<3>(); }

TEST(MaxWaveSpeed, Examples) {
  const State<2> rest = prim2cons<2>({1.0, {0.0, 0.0}, 1.0}, kGas);
  EXPECT_NEAR(max_wave_speed<2>(rest, rest, {1.0, 0.0}, kGas), 1.1832159566199232, 1e-15);
  const State<2> moving = prim2cons<2>({1.0, {2.0, 0.0}, 1.0}, kGas);
  EXPECT_NEAR(max_wave_speed<2>(moving, rest, {1.0, 0.0}, kGas), 2.0 + std::sqrt(1.4), 1e-15);
  EXPECT_EQ(max_wave_speed<2>(moving, rest, {1.0, 0.0}, kGas), max_wave_speed<2>(rest, moving, {1.0, 0.0}, kGas));
  EXPECT_THROW(max_wave_speed<2>({-1.0, 0.0, 0.0, 1.0}, rest, {1.0, 0.0}, kGas), AdmissibilityError);
}

}  // namespace
}  // namespace fluxdiff
