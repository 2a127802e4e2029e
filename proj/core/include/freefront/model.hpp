#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace freefront {

/// The six positive constants of the predator-prey free boundary problem
///
///   u_t - u_xx   = u (1 - u + a v),   g(t) < x < h(t)
///   v_t - D v_xx = v (b - v - c u),   x in R
///   g' = -mu u_x(g),  h' = -mu u_x(h),  g(0) = -h0, h(0) = h0.
struct ModelParams {
  double a = 1.0;   ///< predation benefit to the predator
  double b = 3.0;   ///< prey intrinsic growth rate
  double c = 0.5;   ///< predation loss to the prey
  double D = 1.0;   ///< prey diffusivity
  double mu = 1.0;  ///< front expansion coefficient
  double h0 = 1.0;  ///< initial half-span of the predator habitat

  /// Throws ValidationError naming the first non-positive field.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

enum class HuntingRegime { Weak, Strong, Uncovered };

std::string_view to_string(HuntingRegime regime);

/// weak: b > c and a c < 1; strong: b <= c; anything else is uncovered.
HuntingRegime hunting_regime(const ModelParams& p);

/// Uniform samples of a profile on [x_lo, x_hi], endpoints included.
struct SampledProfile {
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::vector<double> values;

  double spacing() const;
  double sup_norm() const;
  /// Abscissa of sample i.
  double x(std::size_t i) const;
};

/// Critical span pi * sqrt(1 / (1 + a b)). A habitat wider than this forces spreading.
double lambda_threshold(const ModelParams& p);

/// Expansion coefficient above which spreading is guaranteed for a narrow
/// initial habitat (2 h0 < lambda):
///
///   mu_up = max{1, |u0|_inf} (pi^2 - 4 h0^2) / (2 int_{-h0}^{h0} (x + h0) u0 dx).
///
/// The integral uses composite Simpson on the supplied samples.
double mu_upper_bound(const ModelParams& p, const SampledProfile& u0);

/// A-priori bound on the prey: max{|v0|_inf, b}.
double prey_bound(const ModelParams& p, double v0_sup);

/// A-priori bound on the predator: max{|u0|_inf, 1 + a * prey_bound}.
double predator_bound(const ModelParams& p, double u0_sup, double v0_sup);

/// Upper/lower iterates squeezing the spreading limits in the weak regime.
/// Entry i holds round i + 1.
struct LimitIterates {
  std::vector<double> under_u;
  std::vector<double> over_u;
  std::vector<double> under_v;
  std::vector<double> over_v;

  std::size_t rounds() const { return over_v.size(); }
};

inline constexpr std::size_t kDefaultLimitRounds = 200;
inline constexpr double kDefaultLimitGap = 1e-14;

/// Runs the recurrence
///   v_over_i = b - c u_under_i,  u_over_i = 1 + a v_over_i,
///   v_under_i = b - c u_over_i,  u_under_{i+1} = 1 + a v_under_i,
/// seeded with u_under_1 = 1. Stops early once over_v - under_v < stop_gap
/// (stop_gap = 0 runs all rounds). Throws DomainError outside the weak regime.
LimitIterates limit_iteration(const ModelParams& p, std::size_t n_rounds,
                              double stop_gap = 0.0);

/// Long-time limits (u*, v*) on compacts when the predator spreads.
/// weak: ((1 + ab)/(1 + ac), (b - c)/(1 + ac)); strong: (1, 0).
/// The uncovered regime throws DomainError.
std::pair<double, double> spreading_limits(const ModelParams& p);

}  // namespace freefront
