#pragma once

#include <span>
#include <vector>

namespace freefront {

/// Uniform grid on the straightened predator interval [-1, 1].
class StraightGrid {
 public:
  static constexpr std::size_t kMinInterior = 32;

  /// `n_interior` interior nodes plus the two endpoints. Throws ValidationError below the floor.
  explicit StraightGrid(std::size_t n_interior);

  std::size_t n_interior() const { return nodes_.size() - 2; }
  std::size_t size() const { return nodes_.size(); }
  double dy() const { return dy_; }
  std::span<const double> nodes() const { return nodes_; }

 private:
  std::vector<double> nodes_;
  double dy_;
};

/// Uniform grid on the truncated prey line [-L, L].
class LineGrid {
 public:
  LineGrid(double half_width, std::size_t n_nodes);

  double half_width() const { return half_width_; }
  std::size_t size() const { return nodes_.size(); }
  double dx() const { return dx_; }
  std::span<const double> nodes() const { return nodes_; }

 private:
  double half_width_;
  std::vector<double> nodes_;
  double dx_;
};

/// Positions and velocities of the two free boundaries.
struct FrontState {
  double g = -1.0;
  double h = 1.0;
  double g_dot = 0.0;
  double h_dot = 0.0;

  double span() const { return h - g; }
};

/// Coefficients of the straightened predator equation
///   w_t = phi w_yy + psi(y) w_y + w (1 - w + a z),
/// phi = 4 / (h - g)^2, psi(y) = ((h' - g') y + h' + g') / (h - g).
struct TransformCoefficients {
  double phi = 1.0;
  double psi_slope = 0.0;
  double psi_offset = 0.0;

  double psi(double y) const { return psi_slope * y + psi_offset; }
  std::vector<double> psi_at(const StraightGrid& grid) const;
};

TransformCoefficients transform_coefficients(const FrontState& front);

/// x = ((h - g) y + h + g) / 2. Throws RangeError for y outside [-1, 1].
double y_to_x(const FrontState& front, double y);

/// Inverse of y_to_x.
double x_to_y(const FrontState& front, double x);

/// Four-point cubic interpolation on uniform samples with a monotonicity
/// limiter: a monotone stencil keeps the result between the two bracketing
/// samples, a non-monotone one keeps it within the stencil's range. The
/// result never leaves the convex hull of the stencil, so nonnegative data
/// give nonnegative output.
double limited_cubic(std::span<const double> values, double x_lo, double spacing, double x);

/// Prey samples evaluated at the physical images of the straightened nodes.
/// Throws GeometryError when an image falls outside [-L, L].
std::vector<double> interp_prey_to_straight(std::span<const double> z_line,
                                            const FrontState& front,
                                            const StraightGrid& straight, const LineGrid& line);

/// Predator samples on the line grid: interpolated inside (g, h), exactly 0 elsewhere.
std::vector<double> interp_pred_to_line(std::span<const double> w, const FrontState& front,
                                        const StraightGrid& straight, const LineGrid& line);

}  // namespace freefront
