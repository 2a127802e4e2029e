#include <gtest/gtest.h>

#include <cmath>

#include "freefront/errors.hpp"
#include "freefront/grid.hpp"
#include "freefront/numerics.hpp"

namespace ff = freefront;
using ff::numerics::kPi;

namespace {
ff::FrontState fronts(double g, double h, double gd = 0.0, double hd = 0.0) {
  ff::FrontState f;
  f.g = g;
  f.h = h;
  f.g_dot = gd;
  f.h_dot = hd;
  return f;
}
}  // namespace

TEST(StraightGrid, Layout) {
  const ff::StraightGrid g(64);
  EXPECT_EQ(g.size(), 66u);
  EXPECT_EQ(g.nodes().front(), -1.0);
  EXPECT_EQ(g.nodes().back(), 1.0);
  EXPECT_DOUBLE_EQ(g.dy(), 2.0 / 65.0);
  for (std::size_t i = 1; i < g.size(); ++i) {
    EXPECT_NEAR(g.nodes()[i] - g.nodes()[i - 1], g.dy(), 1e-15);
  }
  EXPECT_THROW(ff::StraightGrid(31), ff::ValidationError);
}

TEST(LineGrid, Layout) {
  const ff::LineGrid l(10.0, 201);
  EXPECT_EQ(l.nodes().front(), -10.0);
  EXPECT_EQ(l.nodes().back(), 10.0);
  EXPECT_DOUBLE_EQ(l.dx(), 0.1);
}

TEST(Transform, Coefficients) {
  auto c = ff::transform_coefficients(fronts(-1, 1));
  EXPECT_DOUBLE_EQ(c.phi, 1.0);
  EXPECT_EQ(c.psi(0.3), 0.0);
  c = ff::transform_coefficients(fronts(-0.5, 0.5));
  EXPECT_DOUBLE_EQ(c.phi, 4.0);
  c = ff::transform_coefficients(fronts(-1, 1, -0.2, 0.2));
  EXPECT_DOUBLE_EQ(c.psi(1.0), 0.2);
  EXPECT_DOUBLE_EQ(c.psi(-1.0), -0.2);
  EXPECT_DOUBLE_EQ(c.psi(0.5), 0.1);
  EXPECT_THROW(ff::transform_coefficients(fronts(1, 1)), ff::GeometryError);
}

TEST(Transform, Map) {
  const auto f = fronts(-2, 4);
  EXPECT_EQ(ff::y_to_x(f, -1.0), -2.0);
  EXPECT_EQ(ff::y_to_x(f, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(ff::y_to_x(f, 0.0), 1.0);
  EXPECT_THROW(ff::y_to_x(f, 1.0001), ff::RangeError);
  for (double y = -1.0; y <= 1.0; y += 0.0625) {
    EXPECT_NEAR(ff::x_to_y(f, ff::y_to_x(f, y)), y, 1e-14);
  }
}

TEST(Transform, StraightenedOperatorReproducesUxx) {
  // Static fronts at +-h, u = cos(pi x / 2h): phi w_yy + psi w_y = u_xx.
  const double h = 0.7;
  auto max_err = [&](std::size_t n) {
    const ff::StraightGrid grid(n);
    const auto c = ff::transform_coefficients(fronts(-h, h));
    const auto y = grid.nodes();
    const double dy = grid.dy();
    double err = 0.0;
    for (std::size_t j = 1; j + 1 < y.size(); ++j) {
      auto w = [](double s) { return std::cos(kPi * s / 2); };
      const double wyy = (w(y[j + 1]) - 2 * w(y[j]) + w(y[j - 1])) / (dy * dy);
      const double wy = (w(y[j + 1]) - w(y[j - 1])) / (2 * dy);
      const double x = ff::y_to_x(fronts(-h, h), y[j]);
      const double uxx = -std::pow(kPi / (2 * h), 2) * std::cos(kPi * x / (2 * h));
      err = std::max(err, std::abs(c.phi * wyy + c.psi(y[j]) * wy - uxx));
    }
    return err;
  };
  EXPECT_NEAR(max_err(63) / max_err(127), 4.0, 0.1);
}

TEST(Interp, PreyConstantAndLinear) {
  const ff::LineGrid line(5.0, 501);
  const ff::StraightGrid grid(64);
  const std::vector<double> konst(line.size(), 3.0);
  for (double v : ff::interp_prey_to_straight(konst, fronts(-1.3, 0.9), grid, line)) {
    EXPECT_EQ(v, 3.0);
  }
  // Shifted so the field stays nonnegative; samples must equal the node images.
  std::vector<double> lin(line.size());
  for (std::size_t i = 0; i < lin.size(); ++i) lin[i] = line.nodes()[i] + 5.0;
  const auto got = ff::interp_prey_to_straight(lin, fronts(-1, 1), grid, line);
  for (std::size_t j = 0; j < got.size(); ++j) EXPECT_NEAR(got[j] - 5.0, grid.nodes()[j], 1e-13);
}

TEST(Interp, PreyFourthOrderOnQuartic) {
  auto err = [](std::size_t n_x) {
    const ff::LineGrid line(2.0, n_x);
    const ff::StraightGrid grid(200);
    // Monotone on the window; at an interior extremum the limiter clips and the order drops to 2.
    auto f = [](double x) { return 2.0 + x + 0.1 * x * x * x + 0.05 * x * x * x * x; };
    std::vector<double> z(line.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = f(line.nodes()[i]);
    const auto fr = fronts(-1.0, 1.0);
    const auto got = ff::interp_prey_to_straight(z, fr, grid, line);
    double e = 0.0;
    for (std::size_t j = 0; j < got.size(); ++j) {
      e = std::max(e, std::abs(got[j] - f(ff::y_to_x(fr, grid.nodes()[j]))));
    }
    return e;
  };
  const double ratio = err(41) / err(81);
  EXPECT_GT(ratio, 12.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(Interp, PreyOutsideWindowIsGeometryError) {
  const ff::LineGrid line(2.0, 101);
  const std::vector<double> z(line.size(), 1.0);
  EXPECT_THROW(ff::interp_prey_to_straight(z, fronts(-1, 2.5), ff::StraightGrid(32), line),
               ff::GeometryError);
}

TEST(Interp, LimitedCubicStaysInHull) {
  const std::vector<double> v{0.0, 0.0, 1.0, 1.0, 0.0, 0.0};
  for (double x = 0.0; x <= 5.0; x += 0.01) {
    const double r = ff::limited_cubic(v, 0.0, 1.0, x);
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0);
  }
}

TEST(Interp, PredatorToLine) {
  const ff::StraightGrid grid(127);  // y = 0 is a node
  const ff::LineGrid line(4.0, 801);
  std::vector<double> w(grid.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::cos(kPi * grid.nodes()[j] / 2);
  w.front() = 0.0;
  w.back() = 0.0;
  const auto f = fronts(-1, 1);
  const auto u = ff::interp_pred_to_line(w, f, grid, line);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = line.nodes()[i];
    EXPECT_GE(u[i], 0.0);
    if (x >= 1.0 || x <= -1.0) {
      EXPECT_EQ(u[i], 0.0);
    }
  }
  EXPECT_NEAR(u[400], 1.0, 1e-12);  // x = 0
}

TEST(Interp, MassAgreesAcrossGrids) {
  // int u dx on the line vs (h - g)/2 int w dy; exact value 4 (h - g) / (2 pi) ... = 2 span / pi.
  auto mass_gap = [](std::size_t n) {
    const ff::StraightGrid grid(n);
    const ff::LineGrid line(4.0, 8 * n + 1);
    const auto f = fronts(-1.5, 2.5);
    std::vector<double> w(grid.size());
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::cos(kPi * grid.nodes()[j] / 2);
    w.front() = w.back() = 0.0;
    const auto u = ff::interp_pred_to_line(w, f, grid, line);
    const double line_mass = ff::numerics::trapezoid_uniform(u, line.dx());
    const double straight_mass = 0.5 * f.span() * ff::numerics::simpson_uniform(w, grid.dy());
    EXPECT_NEAR(straight_mass, 2.0 * f.span() / kPi, 1e-6);
    return std::abs(line_mass - straight_mass);
  };
  EXPECT_LT(mass_gap(127), 1e-3);
  EXPECT_LT(mass_gap(255), mass_gap(127));
}
