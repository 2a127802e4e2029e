#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "freefront/grid.hpp"
#include "freefront/model.hpp"

namespace freefront {

/// Discretization and time-integration controls.
///
/// Fields left at 0 are resolved from the model by `resolved()`:
///   L                = max(10 h0, 4 lambda, 20)
///   n_x              = 2 L / 0.02 + 1
///   probe_half_width = h0 / 2
struct NumericsConfig {
  double dt = 5e-3;
  std::size_t n_y = 128;
  std::size_t n_x = 0;
  double L = 0.0;
  double t_max = 50.0;
  int front_stencil_order = 3;
  double tol_bounds = 1e-8;
  double snapshot_every = 1.0;
  double probe_half_width = 0.0;
  /// Fraction of a physical cell a front may travel in one step.
  double cfl_front = 0.5;
  int max_halvings = 8;
  /// Stop once a run is decided (spreading is irreversible); wired by the analysis layer.
  bool stop_when_decided = false;

  NumericsConfig resolved(const ModelParams& p) const;
  /// Throws ValidationError. Expects a resolved config.
  void validate(const ModelParams& p) const;

  friend bool operator==(const NumericsConfig&, const NumericsConfig&) = default;
};

/// Initial predator and prey profiles as functions of the physical coordinate.
struct InitialData {
  std::function<double(double)> u0;
  std::function<double(double)> v0;
};

/// A * cos(pi x / (2 h0)) on [-h0, h0].
std::function<double(double)> cosine_bump(double amplitude, double h0);
/// A * (1 - (x / h0)^2)^2 on [-h0, h0].
std::function<double(double)> quartic_bump(double amplitude, double h0);
std::function<double(double)> constant_profile(double value);
/// Limited-cubic interpolation of samples, held constant beyond the sample range.
std::function<double(double)> sampled_profile(SampledProfile samples);

/// Uniform samples of `f` on [lo, hi].
SampledProfile sample_profile(const std::function<double(double)>& f, double lo, double hi,
                              std::size_t count);

/// Predator, prey and fronts at one time level.
struct FieldState {
  double t = 0.0;
  std::vector<double> w;  ///< predator on the straightened grid, w(+-1) = 0
  std::vector<double> z;  ///< prey on the line grid
  FrontState front;
};

/// One row of the front time series.
struct FrontRecord {
  double t = 0.0;
  double g = 0.0;
  double h = 0.0;
  double g_dot = 0.0;
  double h_dot = 0.0;
  double sup_u = 0.0;
  double probe_v = 0.0;      ///< mean prey density on the probe window
  double probe_v_min = 0.0;
  double probe_v_max = 0.0;
  double probe_u_min = 0.0;  ///< predator density on the probe window
  double probe_u_max = 0.0;
};

struct Snapshot {
  double t = 0.0;
  FrontState front;
  std::vector<double> w;
  std::vector<double> z;
};

/// Worst-case excursions of the a-priori bounds over a run.
struct BoundsReport {
  double predator_bound = 0.0;
  double prey_bound = 0.0;
  double max_w_excess = -1e300;  ///< max(w) - predator_bound
  double max_z_excess = -1e300;  ///< max(z) - prey_bound
  double min_w = 1e300;
  double min_z = 1e300;
};

struct RunDiagnostics {
  std::uint64_t steps = 0;
  std::uint64_t dt_halvings = 0;
  std::uint64_t flux_clamps = 0;
  std::uint64_t undershoot_clamps = 0;
  bool stopped_early = false;
  std::vector<std::string> warnings;
};

struct SimulationResult {
  ModelParams params;
  NumericsConfig numerics;
  double u0_sup = 0.0;
  double v0_sup = 0.0;
  std::vector<FrontRecord> fronts;
  std::vector<Snapshot> snapshots;
  FieldState final_state;
  BoundsReport bounds;
  RunDiagnostics diagnostics;

  double line_dx() const;
  double t_end() const { return final_state.t; }
};

enum class Side { Left, Right };

/// u_x at a front from a one-sided difference of w at y = -1 (left) or +1
/// (right), scaled by 2 / (h - g). Order 2 uses 3 points, order 3 uses 4.
double boundary_flux(std::span<const double> w, const FrontState& front, Side side, int order);

/// Front velocities from the Stefan condition, clamped so fronts never retreat.
struct StefanVelocities {
  double g_dot = 0.0;
  double h_dot = 0.0;
  bool clamped = false;
};
StefanVelocities stefan_velocities(std::span<const double> w, const FrontState& front, double mu,
                                   int order);

/// Advances one step of size `dt` on fixed grids. Holds no mutable state.
class Stepper {
 public:
  Stepper(ModelParams p, NumericsConfig cfg, double u0_sup, double v0_sup);

  struct Success {
    FieldState state;
    bool flux_clamped = false;
    std::uint64_t undershoot_clamps = 0;
  };
  struct Failure {
    std::string reason;
  };

  /// One attempt without retries. Truncation-window breaches throw GeometryError.
  std::variant<Success, Failure> try_step(const FieldState& state, double dt) const;

  /// Largest step allowed by the front and advection stability caps, at most cfg.dt.
  double stable_dt(const FieldState& state) const;

  FrontRecord record(const FieldState& state) const;

  const StraightGrid& straight() const { return straight_; }
  const LineGrid& line() const { return line_; }
  const ModelParams& params() const { return p_; }
  const NumericsConfig& config() const { return cfg_; }
  double predator_bound() const { return w_bound_; }
  double prey_bound() const { return z_bound_; }

 private:
  ModelParams p_;
  NumericsConfig cfg_;
  StraightGrid straight_;
  LineGrid line_;
  double w_bound_;
  double z_bound_;
  std::vector<std::size_t> probe_nodes_;
};

/// Builds the t = 0 state, validating the initial data.
FieldState initial_state(const ModelParams& p, const InitialData& init, const NumericsConfig& cfg);

/// One step of size cfg.dt with halve-and-retry (up to cfg.max_halvings).
/// The returned state may sit at t + dt / 2^k after a retry.
FieldState step(const FieldState& state, const ModelParams& p, const NumericsConfig& cfg);

/// Optional early-exit predicate, fed every new record; returning true stops the run.
using StopRule = std::function<bool(const FrontRecord&)>;

/// Integrates to cfg.t_max (or until `stop` fires), recording every step.
SimulationResult simulate(const ModelParams& p, const InitialData& init,
                          const NumericsConfig& cfg, const StopRule& stop = {});

}  // namespace freefront
