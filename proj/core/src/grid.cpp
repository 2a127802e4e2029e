#include "freefront/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "freefront/errors.hpp"
#include "freefront/numerics.hpp"

namespace freefront {

namespace {

constexpr double kUndershootTolerance = 1e-12;

double clamp_undershoot(double value) {
  if (value >= 0.0) return value;
  if (value > -kUndershootTolerance) return 0.0;
  std::ostringstream os;
  os << "interpolation undershoot " << value << " exceeds " << kUndershootTolerance;
  throw SolverError(os.str());
}

}  // namespace

StraightGrid::StraightGrid(std::size_t n_interior) {
  if (n_interior < kMinInterior) {
    std::ostringstream os;
    os << "n_y must be at least " << kMinInterior << " (got " << n_interior << ")";
    throw ValidationError(os.str());
  }
  nodes_ = numerics::uniform_nodes(-1.0, 1.0, n_interior + 2);
  dy_ = 2.0 / static_cast<double>(n_interior + 1);
}

LineGrid::LineGrid(double half_width, std::size_t n_nodes) : half_width_(half_width) {
  if (!(half_width > 0.0)) throw ValidationError("L must be positive");
  if (n_nodes < 5) throw ValidationError("n_x must be at least 5");
  nodes_ = numerics::uniform_nodes(-half_width, half_width, n_nodes);
  dx_ = 2.0 * half_width / static_cast<double>(n_nodes - 1);
}

std::vector<double> TransformCoefficients::psi_at(const StraightGrid& grid) const {
  std::vector<double> out(grid.size());
  const auto y = grid.nodes();
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = psi(y[j]);
  return out;
}

TransformCoefficients transform_coefficients(const FrontState& front) {
  const double span = front.h - front.g;
  if (!(span > 0.0)) throw GeometryError("front span must be positive (h > g)");
  TransformCoefficients c;
  c.phi = 4.0 / (span * span);
  c.psi_slope = (front.h_dot - front.g_dot) / span;
  c.psi_offset = (front.h_dot + front.g_dot) / span;
  return c;
}

double y_to_x(const FrontState& front, double y) {
  if (!(y >= -1.0 && y <= 1.0)) {
    std::ostringstream os;
    os << "straightened coordinate " << y << " outside [-1, 1]";
    throw RangeError(os.str());
  }
  if (y == -1.0) return front.g;
  if (y == 1.0) return front.h;
  return 0.5 * ((front.h - front.g) * y + front.h + front.g);
}

double x_to_y(const FrontState& front, double x) {
  const double span = front.h - front.g;
  if (!(span > 0.0)) throw GeometryError("front span must be positive (h > g)");
  return (2.0 * x - (front.h + front.g)) / span;
}

double limited_cubic(std::span<const double> values, double x_lo, double spacing, double x) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  if (n == 1) return values[0];
  const double s = (x - x_lo) / spacing;
  long cell = static_cast<long>(std::floor(s));
  cell = std::clamp<long>(cell, 0, static_cast<long>(n) - 2);
  const double t = s - static_cast<double>(cell);
  const double fa = values[static_cast<std::size_t>(cell)];
  const double fb = values[static_cast<std::size_t>(cell) + 1];
  if (n < 4) return fa + t * (fb - fa);

  long start = std::clamp<long>(cell - 1, 0, static_cast<long>(n) - 4);
  const double xi = s - static_cast<double>(start);  // local coordinate, nodes at 0..3
  const double f0 = values[static_cast<std::size_t>(start)];
  const double f1 = values[static_cast<std::size_t>(start) + 1];
  const double f2 = values[static_cast<std::size_t>(start) + 2];
  const double f3 = values[static_cast<std::size_t>(start) + 3];

  const double l0 = -(xi - 1.0) * (xi - 2.0) * (xi - 3.0) / 6.0;
  const double l1 = xi * (xi - 2.0) * (xi - 3.0) / 2.0;
  const double l2 = -xi * (xi - 1.0) * (xi - 3.0) / 2.0;
  const double l3 = xi * (xi - 1.0) * (xi - 2.0) / 6.0;
  const double cubic = l0 * f0 + l1 * f1 + l2 * f2 + l3 * f3;

  const bool increasing = f0 <= f1 && f1 <= f2 && f2 <= f3;
  const bool decreasing = f0 >= f1 && f1 >= f2 && f2 >= f3;
  double lo;
  double hi;
  if (increasing || decreasing) {
    lo = std::min(fa, fb);
    hi = std::max(fa, fb);
  } else {
    lo = std::min({f0, f1, f2, f3});
    hi = std::max({f0, f1, f2, f3});
  }
  return std::clamp(cubic, lo, hi);
}

std::vector<double> interp_prey_to_straight(std::span<const double> z_line,
                                            const FrontState& front,
                                            const StraightGrid& straight, const LineGrid& line) {
  const double L = line.half_width();
  if (front.g < -L || front.h > L) {
    std::ostringstream os;
    os << "front [" << front.g << ", " << front.h << "] leaves the truncation window [-" << L
       << ", " << L << "]; enlarge L";
    throw GeometryError(os.str());
  }
  const auto y = straight.nodes();
  std::vector<double> out(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double x = y_to_x(front, y[j]);
    out[j] = clamp_undershoot(limited_cubic(z_line, -L, line.dx(), x));
  }
  return out;
}

std::vector<double> interp_pred_to_line(std::span<const double> w, const FrontState& front,
                                        const StraightGrid& straight, const LineGrid& line) {
  const auto x = line.nodes();
  std::vector<double> out(x.size(), 0.0);
  const double span = front.h - front.g;
  if (!(span > 0.0)) throw GeometryError("front span must be positive (h > g)");
  const auto lo = std::upper_bound(x.begin(), x.end(), front.g);
  const auto hi = std::lower_bound(x.begin(), x.end(), front.h);
  for (auto it = lo; it < hi; ++it) {
    const double y = (2.0 * (*it) - (front.h + front.g)) / span;
    const auto i = static_cast<std::size_t>(it - x.begin());
    out[i] = clamp_undershoot(limited_cubic(w, -1.0, straight.dy(), y));
  }
  return out;
}

}  // namespace freefront
