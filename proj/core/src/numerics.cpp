#include "freefront/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace freefront::numerics {

std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n) {
    throw std::invalid_argument("solve_tridiagonal: size mismatch");
  }
  std::vector<double> c_prime(n);
  std::vector<double> x(n);
  if (n == 0) return x;

  double denom = diag[0];
  c_prime[0] = upper[0] / denom;
  x[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - lower[i] * c_prime[i - 1];
    c_prime[i] = upper[i] / denom;
    x[i] = (rhs[i] - lower[i] * x[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] -= c_prime[i] * x[i + 1];
  }
  return x;
}

double simpson_uniform(std::span<const double> values, double spacing) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * spacing * (values[0] + values[1]);
  if (n == 4) {
    return 3.0 * spacing / 8.0 * (values[0] + 3.0 * values[1] + 3.0 * values[2] + values[3]);
  }
  const std::size_t intervals = n - 1;
  // Simpson needs an even interval count; peel three intervals for the 3/8 rule otherwise.
  const std::size_t simpson_end = (intervals % 2 == 0) ? n - 1 : n - 4;
  double sum = values[0] + values[simpson_end];
  for (std::size_t i = 1; i < simpson_end; ++i) {
    sum += (i % 2 == 1 ? 4.0 : 2.0) * values[i];
  }
  double total = sum * spacing / 3.0;
  if (simpson_end != n - 1) {
    const std::size_t k = simpson_end;
    total += 3.0 * spacing / 8.0 *
             (values[k] + 3.0 * values[k + 1] + 3.0 * values[k + 2] + values[k + 3]);
  }
  return total;
}

double trapezoid_uniform(std::span<const double> values, double spacing) {
  if (values.size() < 2) return 0.0;
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
  return sum * spacing;
}

namespace {

double simpson_step(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_recurse(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_step(fa, flm, fm, a, m);
  const double right = simpson_step(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  return adaptive_recurse(f, a, b, fa, fm, fb, simpson_step(fa, fm, fb, a, b), tol, max_depth);
}

std::vector<double> uniform_nodes(double lo, double hi, std::size_t count) {
  std::vector<double> nodes(count);
  if (count == 1) {
    nodes[0] = 0.5 * (lo + hi);
    return nodes;
  }
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double denom = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double unit = (2.0 * static_cast<double>(i) - denom) / denom;
    nodes[i] = mid + half * unit;
  }
  nodes.front() = lo;
  nodes.back() = hi;
  return nodes;
}

}  // namespace freefront::numerics
