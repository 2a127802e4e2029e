#pragma once

#include <functional>
#include <span>
#include <vector>

namespace freefront::numerics {

inline constexpr double kPi = 3.14159265358979323846;

/// Thomas algorithm for a tridiagonal system.
///
/// `lower[i]` multiplies x[i-1] in row i (lower[0] is ignored), `upper[i]`
/// multiplies x[i+1] (upper[n-1] is ignored). The matrix is assumed to be
/// diagonally dominant; no pivoting is done.
std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs);

/// Composite Simpson rule on uniformly spaced samples. An odd number of
/// intervals closes with the 3/8 rule on the last three.
double simpson_uniform(std::span<const double> values, double spacing);

/// Composite trapezoid rule on uniformly spaced samples.
double trapezoid_uniform(std::span<const double> values, double spacing);

/// Adaptive Simpson quadrature of `f` over [a, b] to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 40);

/// Uniform nodes on [lo, hi], inclusive. Nodes symmetric about the midpoint
/// are exact negatives of each other when lo == -hi.
std::vector<double> uniform_nodes(double lo, double hi, std::size_t count);

}  // namespace freefront::numerics
