#include <gtest/gtest.h>

#include <cmath>

#include "freefront/errors.hpp"
#include "freefront/numerics.hpp"
#include "freefront/steady.hpp"

namespace ff = freefront;
using ff::numerics::kPi;

namespace {

ff::LogisticBVP bvp(double l, double k = 0.0, double d = 1.0, double beta = 1.0, double theta = 1.0) {
  ff::LogisticBVP q;
  q.d = d;
  q.beta = beta;
  q.theta = theta;
  q.l = l;
  q.k = k;
  return q;
}

// Shooting oracle for -w'' = w (1 - w) on [0, l], w'(0) = 0, w(0) = s:
// the first x where w vanishes, by RK4 with a fine fixed step.
double first_zero(double s, double x_cap) {
  double x = 0.0;
  double w = s;
  double p = 0.0;
  const double dx = 1e-4;
  auto f = [](double w_, double p_, double& dw, double& dp) {
    dw = p_;
    dp = -w_ * (1.0 - w_);
  };
  while (x < x_cap) {
    double k1w, k1p, k2w, k2p, k3w, k3p, k4w, k4p;
    f(w, p, k1w, k1p);
    f(w + 0.5 * dx * k1w, p + 0.5 * dx * k1p, k2w, k2p);
    f(w + 0.5 * dx * k2w, p + 0.5 * dx * k2p, k3w, k3p);
    f(w + dx * k3w, p + dx * k3p, k4w, k4p);
    const double w_new = w + dx / 6 * (k1w + 2 * k2w + 2 * k3w + k4w);
    const double p_new = p + dx / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
    if (w_new <= 0.0) return x + dx * w / (w - w_new);
    w = w_new;
    p = p_new;
    x += dx;
  }
  return x_cap;
}

// Center value s with first_zero(s) = l, by bisection (first_zero increases with s).
double shooting_center(double l) {
  double lo = 1e-8;
  double hi = 1.0 - 1e-12;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (first_zero(mid, l + 1.0) < l ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Steady, ExistenceThreshold) {
  EXPECT_DOUBLE_EQ(ff::existence_threshold(1, 1), kPi / 2);
  EXPECT_DOUBLE_EQ(ff::existence_threshold(4, 1), kPi);
  for (double l : {0.5, 1.0, 1.5, 1.6, 3.0}) {
    const bool above = l > ff::existence_threshold(2.0, 0.7);
    EXPECT_EQ(above, 0.7 - 2.0 * std::pow(kPi / (2 * l), 2) > 0.0);
  }
}

TEST(Steady, BoundaryAtCapacityIsConstant) {
  const auto prof = ff::solve_bvp(bvp(3.0, 2.0, 1.0, 4.0, 2.0), 128);
  for (double v : prof.values) EXPECT_EQ(v, 2.0);
  EXPECT_LT(prof.residual_norm, 1e-12);
}

TEST(Steady, SubcriticalCollapses) {
  for (double l : {kPi / 4, 1.4}) {
    const auto prof = ff::solve_bvp(bvp(l), 200);
    EXPECT_TRUE(prof.subcritical);
    EXPECT_LE(prof.eigen_margin, 0.0);
    for (double v : prof.values) EXPECT_EQ(v, 0.0);
  }
  // Shooting oracle: every positive center value reaches zero beyond pi/2 > l.
  for (double s : {1e-6, 1e-3, 0.1, 0.5, 0.9}) EXPECT_GT(first_zero(s, 10.0), 1.4);
}

TEST(Steady, SupercriticalMatchesShooting) {
  const auto prof = ff::solve_bvp(bvp(1.6), 400);
  EXPECT_FALSE(prof.subcritical);
  EXPECT_GT(prof.center_value(), 0.0);
  EXPECT_NEAR(prof.center_value(), shooting_center(1.6), 2e-4);
  for (double v : prof.values) EXPECT_GE(v, 0.0);
}

TEST(Steady, SecondOrderUnderRefinement) {
  const double ref = shooting_center(3.0);
  const double e1 = std::abs(ff::solve_bvp(bvp(3.0), 101).center_value() - ref);
  const double e2 = std::abs(ff::solve_bvp(bvp(3.0), 201).center_value() - ref);
  EXPECT_NEAR(e1 / e2, 4.0, 0.4);
}

TEST(Steady, LargeDomainApproachesCapacity) {
  const auto prof = ff::solve_bvp(bvp(20.0), 2001);
  EXPECT_NEAR(prof.center_value(), 1.0, 0.01);
}

TEST(Steady, MonotoneInHalfLength) {
  const auto small = ff::solve_bvp(bvp(2.0), 401);
  const auto big = ff::solve_bvp(bvp(3.0), 601);
  // Compare on the small domain: interpolate the big profile at the small nodes.
  const double h_big = 6.0 / 600.0;
  for (std::size_t i = 0; i < small.x_nodes.size(); ++i) {
    const double x = small.x_nodes[i];
    const double pos = (x + 3.0) / h_big;
    const std::size_t j = static_cast<std::size_t>(pos);
    const double t = pos - j;
    const double vb = (1 - t) * big.values[j] + t * big.values[std::min(j + 1, big.values.size() - 1)];
    EXPECT_LT(small.values[i], vb + 1e-9);
  }
}

TEST(Steady, BoundsOfProfile) {
  const auto above = ff::solve_bvp(bvp(2.0, 1.5), 200);  // k > beta/theta
  for (double v : above.values) {
    EXPECT_GE(v, 1.0 - 1e-12);
    EXPECT_LE(v, 1.5 + 1e-12);
  }
  const auto below = ff::solve_bvp(bvp(6.0, 0.3), 400);  // 0 < k < beta/theta
  for (double v : below.values) {
    EXPECT_GE(v, 0.3 - 1e-12);
    EXPECT_LE(v, 1.0 + 1e-12);
  }
}

TEST(Steady, Validation) {
  EXPECT_THROW(ff::solve_bvp(bvp(2.0), 32), ff::ValidationError);
  EXPECT_THROW(ff::solve_bvp(bvp(-1.0), 100), ff::ValidationError);
}

TEST(OdeUpper, EndpointsAndRk4Oracle) {
  EXPECT_EQ(ff::ode_upper_v(0.0, 3.0, 5.0), 5.0);
  EXPECT_LT(std::abs(ff::ode_upper_v(50.0 / 3.0, 3.0, 5.0) - 3.0), 1e-10 * 3.0);
  for (double v0 : {0.5, 3.0, 7.0}) {
    const double b = 2.0;
    double v = v0;
    const int n = 20000;
    const double T = 10.0 / b;
    const double h = T / n;
    auto f = [b](double x) { return x * (b - x); };
    for (int i = 1; i <= n; ++i) {
      const double k1 = f(v), k2 = f(v + 0.5 * h * k1), k3 = f(v + 0.5 * h * k2), k4 = f(v + h * k3);
      v += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
      if (i % 1000 == 0) {
        EXPECT_NEAR(ff::ode_upper_v(i * h, b, v0), v, 1e-8);
      }
    }
  }
}
