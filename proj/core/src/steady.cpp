#include "freefront/steady.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "freefront/errors.hpp"
#include "freefront/numerics.hpp"

namespace freefront {

using numerics::kPi;

namespace {

constexpr int kMaxIterations = 2000;
constexpr double kTauNewton = 1e12;
constexpr double kCollapse = 1e-10;

double residual_inf(const std::vector<double>& w, const LogisticBVP& q, double h,
                    std::vector<double>* out) {
  const std::size_t n = w.size();
  double norm = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double lap = (w[i - 1] - 2.0 * w[i] + w[i + 1]) / (h * h);
    const double f = -q.d * lap - w[i] * (q.beta - q.theta * w[i]);
    if (out) (*out)[i] = f;
    norm = std::max(norm, std::abs(f));
  }
  return norm;
}

}  // namespace

void LogisticBVP::validate() const {
  if (!(d > 0.0)) throw ValidationError("d must be positive");
  if (!(beta > 0.0)) throw ValidationError("beta must be positive");
  if (!(theta > 0.0)) throw ValidationError("theta must be positive");
  if (!(l > 0.0)) throw ValidationError("l must be positive");
  if (!(k >= 0.0)) throw ValidationError("k must be nonnegative");
}

double SteadyProfile::center_value() const {
  if (values.empty()) return 0.0;
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double existence_threshold(double d, double beta) {
  if (!(d > 0.0) || !(beta > 0.0)) throw ValidationError("d and beta must be positive");
  return 0.5 * kPi * std::sqrt(d / beta);
}

SteadyProfile solve_bvp(const LogisticBVP& q, std::size_t n, double tol) {
  q.validate();
  if (n < 64) throw ValidationError("solve_bvp needs at least 64 nodes");

  SteadyProfile out;
  out.x_nodes = numerics::uniform_nodes(-q.l, q.l, n);
  out.eigen_margin = q.beta - q.d * (kPi / (2.0 * q.l)) * (kPi / (2.0 * q.l));
  const double h = 2.0 * q.l / static_cast<double>(n - 1);
  const double carrying = q.beta / q.theta;
  const double top = std::max(q.k, carrying);

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = q.k + (top - q.k) * std::cos(kPi * out.x_nodes[i] / (2.0 * q.l));
  }
  w.front() = q.k;
  w.back() = q.k;

  std::vector<double> f(n, 0.0);
  double norm = residual_inf(w, q, h, &f);
  const std::size_t m = n - 2;
  std::vector<double> lower(m), diag(m), upper(m), rhs(m), trial(w);
  // Pseudo-transient continuation: implicit steps of w_t = -F(w) with tau grown by
  // residual reduction (SER). Large tau is plain Newton; small tau keeps the
  // iterate on the positive parabolic flow, which plain Newton leaves on wide domains.
  double tau = 0.1 / q.beta;
  int it = 0;
  while (norm > tol) {
    if (it >= kMaxIterations) {
      std::ostringstream os;
      os << "steady solve did not converge in " << kMaxIterations << " iterations (residual "
         << norm << ")";
      throw SolverError(os.str());
    }
    ++it;
    const double off = -q.d / (h * h);
    const double shift = tau < kTauNewton ? 1.0 / tau : 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      const std::size_t i = r + 1;
      lower[r] = off;
      upper[r] = off;
      diag[r] = 2.0 * q.d / (h * h) - q.beta + 2.0 * q.theta * w[i] + shift;
      rhs[r] = -f[i];
    }
    const std::vector<double> delta = numerics::solve_tridiagonal(lower, diag, upper, rhs);
    bool negative = false;
    for (std::size_t r = 0; r < m; ++r) {
      trial[r + 1] = w[r + 1] + delta[r];
      negative = negative || !(trial[r + 1] >= -tol);
    }
    const double trial_norm = residual_inf(trial, q, h, nullptr);
    if (negative || !std::isfinite(trial_norm) ||
        (tau >= kTauNewton && trial_norm > norm)) {
      tau = std::min(tau, kTauNewton) * 0.5;
      if (tau < 1e-12 / q.beta) throw SolverError("steady solve stalled: pseudo-time step underflow");
      continue;
    }
    tau *= std::clamp(norm / std::max(trial_norm, 1e-300), 0.5, 10.0);
    w.swap(trial);
    norm = residual_inf(w, q, h, &f);
  }

  out.iterations = it;
  out.residual_norm = norm;
  double peak = 0.0;
  for (double v : w) peak = std::max(peak, std::abs(v));
  const bool collapsed = q.k == 0.0 && peak < kCollapse * carrying;
  if (collapsed) {
    if (out.eigen_margin > 0.0) {
      std::ostringstream os;
      os << "Newton collapsed to the zero profile although beta - d (pi/2l)^2 = "
         << out.eigen_margin << " > 0";
      throw SolverError(os.str());
    }
    out.subcritical = true;
    std::fill(w.begin(), w.end(), 0.0);
    out.residual_norm = 0.0;
  }
  for (double& v : w) {
    if (v < 0.0) {
      if (v > -tol) {
        v = 0.0;
      } else {
        throw SolverError("Newton converged to a sign-changing profile");
      }
    }
  }
  out.values = std::move(w);
  return out;
}

double ode_upper_v(double t, double b, double v0_sup) {
  if (!(b > 0.0) || !(v0_sup > 0.0) || !(t >= 0.0)) {
    throw ValidationError("ode_upper_v needs t >= 0 and positive b, v0_sup");
  }
  if (t == 0.0) return v0_sup;
  const double decay = std::exp(-b * t);
  return b / (1.0 + (b / v0_sup - 1.0) * decay);
}

}  // namespace freefront
