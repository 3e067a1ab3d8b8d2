#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fluxdiff/means.hpp"
#include "logmean_oracle.hpp"

namespace fluxdiff {
namespace {

using testing::logmean_oracle;
using testing::Real50;
using testing::relative_error;

TEST(ArithmeticMean, Examples) {
  EXPECT_EQ(arithmetic_mean(1.0, 3.0), 2.0);
  EXPECT_EQ(arithmetic_mean(0.7, 0.7), 0.7);
  EXPECT_EQ(arithmetic_mean(0.5, 2.5), 1.5);
  EXPECT_EQ(arithmetic_mean(0.1, 0.7), arithmetic_mean(0.7, 0.1));
}

TEST(ProductMean, Examples) {
  EXPECT_EQ(product_mean(1.0, 3.0, 2.0, 4.0), 5.0);
  EXPECT_EQ(product_mean(1.5, 1.5, 2.0, 2.0), 3.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (int s = 0; s < 1000; ++s) {
    const double am = dist(rng), ap = dist(rng), bm = dist(rng), bp = dist(rng);
    const double identity = 2.0 * arithmetic_mean(am, ap) * arithmetic_mean(bm, bp) - arithmetic_mean(am * bm, ap * bp);
    const double pm = product_mean(am, ap, bm, bp);
    EXPECT_NEAR(pm, identity, 1e-13 * (std::abs(am * bp) + std::abs(ap * bm)));
  }
}

TEST(LogMeanReference, Examples) {
  EXPECT_NEAR(logmean_reference(1.0, std::numbers::e), 1.718281828459045, 1e-15);
  EXPECT_NEAR(logmean_reference(2.0, 8.0), 6.0 / std::log(4.0), 1e-15);
  EXPECT_NEAR(logmean_reference(2.0, 8.0), 4.328085122666891, 1e-14);
  EXPECT_EQ(logmean_reference(2.0, 8.0), logmean_reference(8.0, 2.0));
  EXPECT_THROW(logmean_reference(2.0, 2.0), DomainError);
  EXPECT_THROW(logmean_reference(-1.0, 2.0), DomainError);
}

TEST(LogMeanIsmailRoe, Examples) {
  EXPECT_EQ(logmean_ismail_roe(3.7, 3.7), 3.7);
  EXPECT_LT(relative_error(logmean_ismail_roe(1.0, 1.0 + 1e-8), logmean_oracle(1.0, 1.0 + 1e-8)), 1e-15);
  EXPECT_LT(std::abs(logmean_ismail_roe(1.0, 10.0) / logmean_reference(1.0, 10.0) - 1.0), 1e-15);
  EXPECT_THROW(logmean_ismail_roe(0.0, 1.0), DomainError);
}

TEST(LogMeanOptimized, Examples) {
  EXPECT_EQ(logmean_optimized(3.7, 3.7), 3.7);
  EXPECT_EQ(logmean_polynomial(3.7, 3.7), 3.7);
  EXPECT_EQ(inv_logmean_optimized(4.0, 4.0), 0.25);
  EXPECT_NEAR(inv_logmean_optimized(1.0, std::numbers::e), 1.0 / (std::numbers::e - 1.0), 1e-15);
  EXPECT_THROW(logmean_optimized(1.0, -1.0), DomainError);
  EXPECT_THROW(inv_logmean_optimized(0.0, 1.0), DomainError);
}

TEST(LogMeanOptimized, AgreesWithIsmailRoe) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> expo(-3.0, 3.0);
  double worst = 0.0;
  for (int s = 0; s < 1000000; ++s) {
    const double a = std::pow(10.0, expo(rng));
    const double b = std::pow(10.0, expo(rng));
    worst = std::max(worst, std::abs(logmean_optimized(a, b) / logmean_ismail_roe(a, b) - 1.0));
  }
  // Both log branches carry a relative error of order eps / |log(a+/a-)| just
  // above the series threshold, so the two algorithms differ by a few ulps there.
  EXPECT_LT(worst, 1e-14);
}

TEST(LogMeanOptimized, AgreesWithIsmailRoeAwayFromThreshold) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> expo(-3.0, 3.0);
  for (int s = 0; s < 100000; ++s) {
    const double a = std::pow(10.0, expo(rng));
    const double b = a * std::pow(10.0, 0.5 + std::abs(expo(rng)));
    EXPECT_LT(std::abs(logmean_optimized(a, b) / logmean_ismail_roe(a, b) - 1.0), 1e-15);
  }
}

// Grid over base values and relative jumps 1e-16 .. 1e2, both orderings.
std::vector<std::pair<double, double>> accuracy_grid() {
  std::vector<std::pair<double, double>> pairs;
  for (int ib = 0; ib <= 12; ++ib) {
    const double base = std::pow(10.0, -3.0 + 0.5 * ib);
    for (int ij = 0; ij <= 180; ++ij) {
      const double jump = std::pow(10.0, -16.0 + ij * (18.0 / 180.0));
      const double other = base * (1.0 + jump);
      pairs.emplace_back(base, other);
      pairs.emplace_back(other, base);
    }
  }
  return pairs;
}

TEST(LogMeanOptimized, MatchesExtendedPrecisionOracle) {
  double worst = 0.0, worst_inv = 0.0, worst_poly = 0.0;
  for (const auto& [a, b] : accuracy_grid()) {
    const Real50 exact = logmean_oracle(a, b);
    worst = std::max(worst, relative_error(logmean_optimized(a, b), exact));
    worst_poly = std::max(worst_poly, relative_error(logmean_polynomial(a, b), exact));
    worst_inv = std::max(worst_inv, relative_error(inv_logmean_optimized(a, b), 1 / exact));
  }
  EXPECT_LT(worst, 1e-14);
  EXPECT_LT(worst_inv, 1e-14);
  EXPECT_LT(worst_poly, 1e-14);
}

TEST(LogMeanOptimized, InverseTimesDirectIsOne) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> expo(-3.0, 3.0);
  for (int s = 0; s < 100000; ++s) {
    const double a = std::pow(10.0, expo(rng));
    const double b = s % 2 == 0 ? std::pow(10.0, expo(rng)) : a * (1.0 + 1e-3 * expo(rng));
    EXPECT_NEAR(inv_logmean_optimized(a, b) * logmean_optimized(a, b), 1.0, 1e-14);
  }
}

TEST(LogMeanProperties, SymmetryOrderingScaling) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> expo(-3.0, 3.0);
  for (int s = 0; s < 100000; ++s) {
    const double a = std::pow(10.0, expo(rng));
    const double b = s % 3 == 0 ? a * (1.0 + 1e-2 * expo(rng)) : std::pow(10.0, expo(rng));
    const double lm = logmean_optimized(a, b);
    EXPECT_EQ(lm, logmean_optimized(b, a));
    EXPECT_EQ(inv_logmean_optimized(a, b), inv_logmean_optimized(b, a));
    EXPECT_LE(std::abs(logmean_ismail_roe(a, b) - logmean_ismail_roe(b, a)), 1e-15 * lm);
    // ordering min <= log mean <= arithmetic mean <= max, up to rounding
    const double slack = 4e-16 * lm;
    EXPECT_LE(std::min(a, b), lm + slack);
    EXPECT_LE(lm, arithmetic_mean(a, b) + slack);
    EXPECT_LE(arithmetic_mean(a, b), std::max(a, b));
    for (double lambda : {1e-3, 1.0, 1e3}) {
      // both sides carry up to 1e-14 of evaluation error
      EXPECT_NEAR(logmean_optimized(lambda * a, lambda * b), lambda * lm, 3e-14 * lambda * lm);
    }
  }
}

TEST(LogMeanProperties, ContinuousAcrossSeriesThreshold) {
  for (double base : {1e-3, 0.37, 1.0, 12.5, 1e3}) {
    double values[2];
    Real50 exact[2];
    double us[2];
    const double offsets[2] = {-1e-12, 1e-12};
    for (int side = 0; side < 2; ++side) {
      const double f = std::sqrt(kLogMeanSeriesThreshold + offsets[side]);
      const double other = base * (1.0 - f) / (1.0 + f);
      us[side] = detail::logmean_u(base, other);
      values[side] = logmean_optimized(base, other);
      exact[side] = logmean_oracle(other, base);
    }
    ASSERT_LT(us[0], kLogMeanSeriesThreshold);
    ASSERT_GE(us[1], kLogMeanSeriesThreshold);
    // The inputs move by ~1e-10 across the threshold; the jump is what
    // remains after removing the true change of the mean.
    const double true_change = static_cast<double>(exact[1] - exact[0]);
    EXPECT_LT(std::abs(values[1] - values[0] - true_change) / values[0], 1e-12);
  }
}

}  // namespace
}  // namespace fluxdiff
