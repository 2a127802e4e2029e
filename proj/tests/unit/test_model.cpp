#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "freefront/errors.hpp"
#include "freefront/model.hpp"
#include "freefront/numerics.hpp"
#include "freefront/solver.hpp"

namespace ff = freefront;
using ff::numerics::kPi;

namespace {

ff::ModelParams params(double a, double b, double c, double h0 = 0.5, double mu = 1.0) {
  ff::ModelParams p;
  p.a = a;
  p.b = b;
  p.c = c;
  p.h0 = h0;
  p.mu = mu;
  return p;
}

ff::SampledProfile cosine_samples(double amplitude, double h0, std::size_t n) {
  return ff::sample_profile(ff::cosine_bump(amplitude, h0), -h0, h0, n);
}

}  // namespace

TEST(Params, ValidationNamesTheField) {
  auto p = params(1, 3, -1);
  try {
    p.validate();
    FAIL() << "expected a validation error";
  } catch (const ff::ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("c must be positive"), std::string::npos);
  }
  EXPECT_THROW(params(0, 3, 1).validate(), ff::ValidationError);
  EXPECT_THROW(params(1, 3, 1, std::nan("")).validate(), ff::ValidationError);
}

TEST(Lambda, ClosedForms) {
  EXPECT_NEAR(ff::lambda_threshold(params(1, 3, 0.5)), kPi / 2, 1e-15);
  EXPECT_NEAR(ff::lambda_threshold(params(1, 0.5, 0.5)), 2.565099660323728, 1e-12);
}

TEST(Lambda, DecreasingInAAndB) {
  for (double a : {0.1, 0.7, 2.0}) {
    for (double b : {0.2, 1.0, 5.0}) {
      const double base = ff::lambda_threshold(params(a, b, 1));
      EXPECT_LT(ff::lambda_threshold(params(a * 1.01, b, 1)), base);
      EXPECT_LT(ff::lambda_threshold(params(a, b * 1.01, 1)), base);
    }
  }
}

TEST(Regime, Classification) {
  EXPECT_EQ(ff::hunting_regime(params(1, 2, 0.5)), ff::HuntingRegime::Weak);
  EXPECT_EQ(ff::hunting_regime(params(1, 1, 2)), ff::HuntingRegime::Strong);
  EXPECT_EQ(ff::hunting_regime(params(1, 1, 1)), ff::HuntingRegime::Strong);
  EXPECT_EQ(ff::hunting_regime(params(2, 2, 1)), ff::HuntingRegime::Uncovered);
}

TEST(MuUpper, CosineAnalyticIntegral) {
  // int_{-1/2}^{1/2} (x + 1/2) cos(pi x) dx = 1/pi, so mu0 = (pi^2 - 1) pi / 2.
  const auto p = params(1, 3, 0.5, 0.5);
  const double expect = (kPi * kPi - 1.0) * kPi / 2.0;
  EXPECT_NEAR(ff::mu_upper_bound(p, cosine_samples(1.0, 0.5, 2001)), expect, 1e-9 * expect);
  EXPECT_NEAR(expect, 13.93234, 1e-5);
}

TEST(MuUpper, MatchesIndependentQuadrature) {
  // Quartic bump, integral by adaptive quadrature of the continuous profile.
  const auto p = params(1, 3, 0.5, 0.3);
  const auto u0 = ff::quartic_bump(1.7, 0.3);
  const double integral = ff::numerics::adaptive_simpson(
      [&](double x) { return (x + 0.3) * u0(x); }, -0.3, 0.3, 1e-14);
  const double expect = 1.7 * (kPi * kPi - 4 * 0.09) / (2 * integral);
  const auto s = ff::sample_profile(u0, -0.3, 0.3, 4001);
  EXPECT_NEAR(ff::mu_upper_bound(p, s), expect, 1e-8 * expect);
}

TEST(MuUpper, Errors) {
  auto p = params(1, 3, 0.5, 0.5);
  ff::SampledProfile zero{-0.5, 0.5, std::vector<double>(101, 0.0)};
  EXPECT_THROW(ff::mu_upper_bound(p, zero), ff::ValidationError);
  p.h0 = 0.8;  // 2 h0 > pi / 2
  EXPECT_THROW(ff::mu_upper_bound(p, cosine_samples(1.0, 0.8, 101)), ff::DomainError);
}

TEST(MuUpper, ScaleInvariantAboveUnitNorm) {
  const auto p = params(1, 3, 0.5, 0.4);
  const double one = ff::mu_upper_bound(p, cosine_samples(1.0, 0.4, 801));
  const double two = ff::mu_upper_bound(p, cosine_samples(2.0, 0.4, 801));
  const double five = ff::mu_upper_bound(p, cosine_samples(5.0, 0.4, 801));
  EXPECT_NEAR(two, one, 1e-12 * one);
  EXPECT_NEAR(five, one, 1e-12 * one);
}

TEST(LimitIteration, FirstRoundByHand) {
  const auto it = ff::limit_iteration(params(1, 2, 0.5), 3);
  ASSERT_EQ(it.rounds(), 3u);
  EXPECT_DOUBLE_EQ(it.under_u[0], 1.0);
  EXPECT_DOUBLE_EQ(it.over_v[0], 1.5);
  EXPECT_DOUBLE_EQ(it.over_u[0], 2.5);
  EXPECT_DOUBLE_EQ(it.under_v[0], 0.75);
  EXPECT_DOUBLE_EQ(it.under_u[1], 1.75);
}

TEST(LimitIteration, RegimeGate) {
  EXPECT_THROW(ff::limit_iteration(params(1, 1, 2), 5), ff::DomainError);
  EXPECT_THROW(ff::limit_iteration(params(2, 2, 1), 5), ff::DomainError);
  EXPECT_THROW(ff::limit_iteration(params(1, 2, 0.5), 0), ff::ValidationError);
}

TEST(LimitIteration, OrderingAndConvergence) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(0.1, 3.0);
  int tested = 0;
  while (tested < 20) {
    const auto p = params(U(rng), U(rng), U(rng));
    if (ff::hunting_regime(p) != ff::HuntingRegime::Weak) continue;
    ++tested;
    const double q = p.a * p.c;
    const auto [us, vs] = ff::spreading_limits(p);
    // The gap contracts by q^2 per round; ask for ~30 digits of contraction.
    const std::size_t rounds = static_cast<std::size_t>(std::ceil(30.0 / -std::log10(q * q)));
    const auto it = ff::limit_iteration(p, rounds);
    for (std::size_t i = 0; i + 1 < it.rounds(); ++i) {
      const double slack = 1e-13 * us;
      EXPECT_LE(it.under_u[i], it.under_u[i + 1] + slack);
      EXPECT_LE(it.under_u[i + 1], us + slack);
      EXPECT_LE(us, it.over_u[i + 1] + slack);
      EXPECT_LE(it.over_u[i + 1], it.over_u[i] + slack);
      EXPECT_LE(it.under_v[i], it.over_v[i] + slack);
    }
    EXPECT_NEAR(it.under_u.back(), us, 1e-12 * us);
    EXPECT_NEAR(it.over_u.back(), us, 1e-12 * us);
    EXPECT_NEAR(it.under_v.back(), vs, 1e-12 * std::max(vs, 1.0));
  }
}

TEST(LimitIteration, GapBoundAfterFiftyRounds) {
  // Closed form: over_v[i] - under_v[i] = (b - c) q^(2i - 1). Rounding adds a floor of
  // a few ulps of b once that falls below machine precision.
  for (auto p : {params(1, 2, 0.5), params(0.5, 3, 1), params(1.5, 1, 0.6)}) {
    const auto it = ff::limit_iteration(p, 50);
    const double q = p.a * p.c;
    const double bound = (p.b - p.c) * std::pow(q, 99);
    const double floor = 8 * std::numeric_limits<double>::epsilon() * p.b;
    EXPECT_LE(std::abs(it.over_v[49] - it.under_v[49]), std::max(bound, floor));
    // Early rounds follow the closed form exactly up to rounding.
    for (int i = 1; i <= 3; ++i) {
      EXPECT_NEAR(it.over_v[i - 1] - it.under_v[i - 1], (p.b - p.c) * std::pow(q, 2 * i - 1), 1e-14);
    }
  }
}

TEST(SpreadingLimits, Regimes) {
  auto [u, v] = ff::spreading_limits(params(1, 2, 0.5));
  EXPECT_DOUBLE_EQ(u, 2.0);
  EXPECT_DOUBLE_EQ(v, 1.0);
  std::tie(u, v) = ff::spreading_limits(params(1, 1, 2));
  EXPECT_EQ(u, 1.0);
  EXPECT_EQ(v, 0.0);
  EXPECT_THROW(ff::spreading_limits(params(2, 2, 1)), ff::DomainError);
}

TEST(Bounds, ProofValues) {
  const auto p = params(2, 3, 0.5);
  EXPECT_EQ(ff::prey_bound(p, 1.0), 3.0);
  EXPECT_EQ(ff::prey_bound(p, 4.0), 4.0);
  EXPECT_EQ(ff::predator_bound(p, 1.0, 1.0), 7.0);   // 1 + a max(1, b)
  EXPECT_EQ(ff::predator_bound(p, 10.0, 1.0), 10.0);
}
