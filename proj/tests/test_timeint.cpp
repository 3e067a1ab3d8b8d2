#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fluxdiff/diagnostics.hpp"
#include "fluxdiff/discretization.hpp"
#include "fluxdiff/initial_conditions.hpp"
#include "fluxdiff/timeint.hpp"

using namespace fluxdiff;

namespace {

const GasParams kGas(1.4);
const RKMethod kRK = carpenter_kennedy_4_5();

using Vector = std::vector<double>;

Vector scaled(const Vector& u, double lambda) {
  Vector out(u);
  for (double& x : out) x *= lambda;
  return out;
}

// y1' = y2, y2' = -y1; exact solution (cos t, -sin t) from (1, 0).
Vector rotation(const Vector& y, double) { return {y[1], -y[0]}; }

double rotation_error(double dt, double T) {
  Vector y{1.0, 0.0};
  IntegrationConfig cfg;
  cfg.n_steps = std::lround(T / dt);
  integrate(y, 0.0, cfg, kRK, rotation, [&](const Vector&) { return dt; });
  return std::hypot(y[0] - std::cos(T), y[1] + std::sin(T));
}

template <int Dim>
MeshGeometry<Dim> box_geometry(int n, int p, bool curved) {
  std::array<int, Dim> dims;
  dims.fill(n);
  Vec<Dim> lo, hi;
  lo.fill(-5.0);
  hi.fill(5.0);
  const auto op = make_operator(p, NodeFamily::lgl);
  if (curved) return build_geometry<Dim>(sine_perturbed_mesh<Dim>(dims, lo, hi, n / (4.0 * std::numbers::pi * Dim)), op);
  return build_geometry<Dim>(cartesian_mesh<Dim>(dims, lo, hi), op);
}

}  // namespace

TEST(RKMethod, OrderConditionsHold) {
  for (double r : order_condition_residuals(kRK)) EXPECT_LT(r, 1e-14);
}

TEST(RKMethod, PerturbedCoefficientsAreRejected) {
  RKMethod m = kRK;
  m.B[2] += 1e-6;
  EXPECT_THROW(check_order_conditions(m), ParameterError);
}

TEST(RKStep, ZeroRhsLeavesStateBitwise) {
  Vector u{1.25, -3.5, 1e-300, 7.0};
  const Vector u0 = u;
  rk_step(u, 0.0, 0.1, [](const Vector& v, double) { return Vector(v.size(), 0.0); }, kRK);
  EXPECT_EQ(u, u0);
}

TEST(RKStep, ExactlyFiveRhsEvaluations) {
  Vector u{1.0};
  int calls = 0;
  rk_step(u, 0.0, 0.1, [&](const Vector& v, double) { ++calls; return scaled(v, -1.0); }, kRK);
  EXPECT_EQ(calls, 5);
}

TEST(RKStep, StageTimesFollowC) {
  Vector u{0.0};
  std::vector<double> times;
  rk_step(u, 2.0, 0.5, [&](const Vector& v, double t) { times.push_back(t); return Vector(v.size(), 1.0); }, kRK);
  ASSERT_EQ(times.size(), 5u);
  for (int s = 0; s < 5; ++s) EXPECT_DOUBLE_EQ(times[s], 2.0 + 0.5 * kRK.c[s]);
  // u' = 1 is integrated exactly
  EXPECT_NEAR(u[0], 0.5, 1e-15);
}

TEST(RKStep, NonPositiveDtRejected) {
  Vector u{1.0};
  EXPECT_THROW(rk_step(u, 0.0, 0.0, rotation, kRK), ParameterError);
  EXPECT_THROW(rk_step(u, 0.0, -0.1, rotation, kRK), ParameterError);
}

TEST(RKStep, OneStepErrorScalesWithFifthPower) {
  auto err = [](double dt) {
    Vector u{1.0};
    rk_step(u, 0.0, dt, [](const Vector& v, double) { return scaled(v, -1.0); }, kRK);
    return std::abs(u[0] - std::exp(-dt));
  };
  const double ratio = err(0.1) / err(0.05);
  EXPECT_NEAR(ratio, 32.0, 3.2);
}

TEST(RKStep, GlobalConvergenceSlopeIsFour) {
  const double dts[] = {0.1, 0.05, 0.025};
  double e[3];
  for (int k = 0; k < 3; ++k) e[k] = rotation_error(dts[k], 2.0);
  for (int k = 0; k < 2; ++k) EXPECT_NEAR(std::log2(e[k] / e[k + 1]), 4.0, 0.2);
}

TEST(RKStep, NonFiniteStageThrowsWithContext) {
  Vector u{1.0};
  try {
    rk_step(u, 0.0, 0.1, [](const Vector&, double t) { return Vector{t > 0.03 ? NAN : 1.0}; }, kRK, 7);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("step 7"), std::string::npos);
  }
}

TEST(StepController, NonPositiveCflRejected) {
  EXPECT_THROW(StepController(0.0), ParameterError);
  EXPECT_THROW(StepController(-1.0), ParameterError);
  EXPECT_NO_THROW(StepController(0.5));
}

TEST(StableDt, StagnantFlowMatchesDirectFormula) {
  const int p = 3;
  const auto g = box_geometry<2>(4, p, false);
  Primitive<2> q{1.3, {0.0, 0.0}, 2.0};
  const auto s = prim2cons<2>(q, kGas);
  const auto u = fill_field<2>(g, [&](const Vec<2>&) { return s; });
  const double c = std::sqrt(1.4 * 2.0 / 1.3);
  const double h = 10.0 / 4;
  EXPECT_NEAR(stable_dt<2>(u, g, kGas, StepController(0.5)), 0.5 * h / (c * (2 * p + 1)), 1e-15);
}

TEST(StableDt, LinearInElementSizeAndCfl) {
  const auto coarse = box_geometry<3>(2, 2, false);
  const auto fine = box_geometry<3>(4, 2, false);
  const auto s = ic_free_stream<3>(kGas);
  const auto uc = fill_field<3>(coarse, [&](const Vec<3>&) { return s; });
  const auto uf = fill_field<3>(fine, [&](const Vec<3>&) { return s; });
  const double dc = stable_dt<3>(uc, coarse, kGas, StepController(0.5));
  EXPECT_NEAR(stable_dt<3>(uf, fine, kGas, StepController(0.5)), 0.5 * dc, 1e-15);
  EXPECT_NEAR(stable_dt<3>(uc, coarse, kGas, StepController(1.0)), 2.0 * dc, 1e-15);
}

TEST(StableDt, InadmissibleStateThrows) {
  const auto g = box_geometry<2>(2, 2, false);
  auto u = fill_field<2>(g, [&](const Vec<2>&) { return ic_free_stream<2>(kGas); });
  u(1, 3)[0] = -1.0;
  EXPECT_THROW(stable_dt<2>(u, g, kGas, StepController()), AdmissibilityError);
}

TEST(Integrate, ZeroStepsReturnsInitialState) {
  Vector y{1.0, 2.0};
  IntegrationConfig cfg;
  cfg.n_steps = 0;
  int calls = 0;
  const auto r = integrate(y, 0.0, cfg, kRK, rotation, [](const Vector&) { return 0.1; },
                           [&](const StepInfo&, const Vector&) { ++calls; });
  EXPECT_EQ(y, (Vector{1.0, 2.0}));
  EXPECT_EQ(r.steps, 0);
  EXPECT_EQ(r.rhs_evals, 0);
  EXPECT_EQ(calls, 0);
}

TEST(Integrate, CallbackCountEqualsSteps) {
  Vector y{1.0, 0.0};
  IntegrationConfig cfg;
  cfg.n_steps = 13;
  long calls = 0, last = 0;
  const auto r = integrate(y, 0.0, cfg, kRK, rotation, [](const Vector&) { return 0.01; },
                           [&](const StepInfo& info, const Vector&) { ++calls; last = info.step; });
  EXPECT_EQ(calls, 13);
  EXPECT_EQ(last, 13);
  EXPECT_EQ(r.rhs_evals, 5 * r.steps);
  EXPECT_NEAR(r.t, 0.13, 1e-15);
}

TEST(Integrate, EndTimeIsHitExactly) {
  Vector y{1.0, 0.0};
  IntegrationConfig cfg;
  cfg.t_end = 1.0;
  const auto r = integrate(y, 0.0, cfg, kRK, rotation, [](const Vector&) { return 0.3; });
  EXPECT_EQ(r.steps, 4);
  EXPECT_EQ(r.t, 1.0);
  EXPECT_NEAR(y[0], std::cos(1.0), 1e-3);
}

TEST(Integrate, DivergenceRestoresLastValidState) {
  Vector y{1.0};
  IntegrationConfig cfg;
  cfg.n_steps = 10;
  Vector at_step2;
  auto rhs = [](const Vector& v, double t) { return Vector{t > 0.25 ? INFINITY : -v[0]}; };
  EXPECT_THROW(integrate(y, 0.0, cfg, kRK, rhs, [](const Vector&) { return 0.1; },
                         [&](const StepInfo& info, const Vector& v) {
                           if (info.step == 2) at_step2 = v;
                         }),
               DivergenceError);
  EXPECT_EQ(y, at_step2);
}

TEST(Integrate, FullyDiscreteConservationOnCurvedMesh) {
  const int p = 3;
  const auto g = box_geometry<2>(4, p, true);
  const auto ops = make_operator_set(p, NodeFamily::lgl);
  RhsConfig c;
  auto u = fill_field<2>(g, [&](const Vec<2>& x) { return ic_isentropic_vortex<2>(x, 0.0, kGas); });
  const auto mj = quadrature_weights<2>(g, ops.op);
  const auto before = integral<2>(u, mj);
  IntegrationConfig cfg;
  cfg.n_steps = 20;
  const StepController ctl(0.5);
  integrate(u, 0.0, cfg, kRK, [&](const SolutionField<2>& v, double) { return rhs<2>(v, g, ops, c, kGas); },
            [&](const SolutionField<2>& v) { return stable_dt<2>(v, g, kGas, ctl); });
  const auto after = integral<2>(u, mj);
  for (int k = 0; k < 4; ++k) EXPECT_LE(std::abs(after[k] - before[k]), 1e-11 * std::max(1.0, std::abs(before[k])));
}
