#pragma once

#include <cstddef>
#include <vector>

namespace freefront {

/// -d w'' = w (beta - theta w) on (-l, l) with w(+-l) = k.
struct LogisticBVP {
  double d = 1.0;
  double beta = 1.0;
  double theta = 1.0;
  double l = 1.0;
  double k = 0.0;

  void validate() const;
};

struct SteadyProfile {
  std::vector<double> x_nodes;
  std::vector<double> values;
  double residual_norm = 0.0;
  int iterations = 0;
  /// k = 0 and no positive solution: the iterate collapsed to zero.
  bool subcritical = false;
  /// beta - d (pi / 2l)^2, the continuum principal-eigenvalue margin.
  double eigen_margin = 0.0;

  double center_value() const;
};

/// (pi / 2) sqrt(d / beta): half-length above which the k = 0 problem has a positive solution.
double existence_threshold(double d, double beta);

/// Newton with pseudo-transient continuation on the centered-difference
/// discretization with `n` nodes (endpoints included), started from
/// k + (max{k, beta/theta} - k) cos(pi x / 2l).
/// For k = 0 an iterate that collapses below 1e-10 beta/theta is reported as the
/// zero profile with `subcritical` set, provided the eigenvalue margin agrees.
/// Throws SolverError when the iteration stalls or the two signals disagree.
SteadyProfile solve_bvp(const LogisticBVP& problem, std::size_t n, double tol = 1e-10);

/// Solution of v' = v (b - v), v(0) = v0_sup:  b e^{bt} / (e^{bt} - 1 + b / v0_sup).
double ode_upper_v(double t, double b, double v0_sup);

}  // namespace freefront
