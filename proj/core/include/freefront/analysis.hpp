#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "freefront/model.hpp"
#include "freefront/solver.hpp"

namespace freefront {

enum class VerdictKind { Spreading, Vanishing, Undecided };

std::string_view to_string(VerdictKind kind);

/// Thresholds used to decide a finite-horizon run.
struct ClassifyTolerances {
  double u_tol = 0.0;          ///< sup-norm below which the predator counts as gone
  double span_tol = 0.0;       ///< slack on the critical span
  double v_tol = 0.0;          ///< |g'| + |h'| below which the fronts count as stopped
  double u_floor = 0.0;        ///< probe-window predator density required for spreading
  double trailing_time = 0.0;  ///< duration over which u_floor must hold

  /// u_tol = 1e-4 (1 + ab)/(1 + ac), span_tol = 2 dx, v_tol = 1e-5 h0 / t_max,
  /// u_floor = u*/2 (1/2 when no limit is known), trailing_time = min(t_max / 10, 5).
  static ClassifyTolerances defaults(const ModelParams& p, const NumericsConfig& resolved_cfg);
};

struct VerdictEvidence {
  double lambda = 0.0;
  double final_span = 0.0;
  double max_span = 0.0;
  double sup_u_end = 0.0;
  double front_speed_end = 0.0;     ///< |g'| + |h'| at the last record
  double trailing_probe_u_min = 0.0;
  double t_end = 0.0;
};

struct Verdict {
  VerdictKind kind = VerdictKind::Undecided;
  VerdictEvidence evidence;
  double t_decided = 0.0;
  /// Closest-margin explanation when undecided, otherwise the rule that fired.
  std::string diagnostic;
};

Verdict classify(const SimulationResult& result, const ModelParams& p,
                 const ClassifyTolerances& tols);

/// Early-exit rule: stops once the span exceeds lambda + span_tol and the
/// probe-window predator has stayed above u_floor for trailing_time.
StopRule spreading_stop_rule(const ModelParams& p, const ClassifyTolerances& tols);

struct ClassifiedRun {
  SimulationResult result;
  Verdict verdict;
  ClassifyTolerances tolerances;
};

/// simulate + classify with default tolerances; wires the stop rule when
/// cfg.stop_when_decided is set.
ClassifiedRun simulate_and_classify(const ModelParams& p, const InitialData& init,
                                    const NumericsConfig& cfg);

/// Explicit upper solution for a narrow initial habitat:
///   v_bar(t) = b e^{bt} / (e^{bt} - 1 + b / |v0|_inf)
///   f(t)     = M exp( int_0^t [1 + a v_bar(s) - (pi / 2 theta_len)^2] ds )
///   eta(t)   = sqrt( h0^2 (1 + delta)^2 + mu0 pi int_0^t f )
///   u_bar    = f(t) cos(pi x / (2 eta(t)))  on |x| <= eta(t)
/// with theta_len = h0 / 2 + lambda / 4 and
///   mu0 = (theta_len^2 - h0^2 (1 + delta)^2) / (pi int_0^inf f).
class Supersolution {
 public:
  double M() const { return M_; }
  double delta() const { return delta_; }
  double theta_len() const { return theta_len_; }
  double mu0() const { return mu0_; }
  double v0_sup() const { return v0_sup_; }
  /// int_0^inf f, including the geometric tail bound.
  double total_f_integral() const { return total_; }
  /// Time at which the tabulated integral was truncated.
  double tail_start() const { return tail_start_; }

  double v_bar(double t) const;
  /// Exponent rate 1 + a v_bar(t) - (pi / 2 theta_len)^2.
  double growth_rate(double t) const;
  double f(double t) const;
  /// int_0^t f(s) ds.
  double f_integral(double t) const;
  double eta(double t) const;
  /// u_bar(t, x); zero outside |x| <= eta(t).
  double barrier(double t, double x) const;

 private:
  friend Supersolution build_supersolution(const ModelParams&, const SampledProfile&,
                                           const SampledProfile&, double);
  double exponent(double t) const;

  ModelParams p_;
  double M_ = 0.0;
  double delta_ = 0.0;
  double theta_len_ = 0.0;
  double kappa_ = 0.0;
  double v0_sup_ = 0.0;
  double mu0_ = 0.0;
  double total_ = 0.0;
  double tail_start_ = 0.0;
  double panel_ = 0.05;
  std::vector<double> exponent_table_;  ///< int_0^{k panel} rate
  std::vector<double> integral_table_;  ///< int_0^{k panel} f
};

/// Throws DomainError when 2 h0 >= lambda or theta_len <= h0 (1 + delta), and
/// ConstructionError when no M <= 2^40 |u0|_inf dominates u0 on the samples.
Supersolution build_supersolution(const ModelParams& p, const SampledProfile& u0,
                                  const SampledProfile& v0, double delta);

struct DominationReport {
  bool precondition_met = false;  ///< run mu <= mu0
  double worst_front_margin = 1e300;  ///< min over records of min(eta - h, g + eta)
  double worst_front_time = 0.0;
  double worst_u_margin = 1e300;  ///< min over snapshots of u_bar - u
  double worst_u_time = 0.0;
  double worst_u_x = 0.0;
  double front_eps = 0.0;
  double u_eps = 0.0;
  bool passed = false;
};

/// Checks g >= -eta - eps, h <= eta + eps at every record and u <= u_bar + eps
/// on [g, h] at every snapshot.
DominationReport check_domination(const SimulationResult& result, const Supersolution& sup,
                                  double front_eps, double u_eps);

struct MuProbe {
  double mu = 0.0;
  VerdictKind kind = VerdictKind::Undecided;
  double t_max_used = 0.0;
  bool near_threshold = false;  ///< undecided even at doubled horizon; counted as spreading
  double final_span = 0.0;
};

struct MuStarBracket {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<MuProbe> probes;
  std::vector<double> near_threshold;

  /// Every vanishing probe lies strictly below every spreading or near-threshold probe.
  bool consistent() const;
};

/// Bisection on mu between a vanishing and a spreading end. Each probe is a
/// full simulate + classify; an undecided probe is rerun once at doubled
/// t_max, then counted on the spreading side.
MuStarBracket estimate_mu_star(const ModelParams& p_base, const InitialData& init,
                               const NumericsConfig& cfg, std::pair<double, double> bracket,
                               int n_bisect);

struct LimitCheck {
  std::string name;
  double value = 0.0;   ///< worst value on the probe window
  double target = 0.0;
  double error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct LimitReport {
  std::vector<LimitCheck> checks;
  std::string note;
  bool passed = false;
};

/// Compares the final profiles on [-probe_half_width, probe_half_width] with
/// the long-time limits implied by the verdict. Each check passes when
/// |value - target| <= tol * max(|target|, 1). Throws DomainError when undecided.
LimitReport verify_limits(const SimulationResult& result, const ModelParams& p,
                          const Verdict& verdict, double probe_half_width, double tol);

}  // namespace freefront
