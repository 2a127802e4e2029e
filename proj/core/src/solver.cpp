#include "freefront/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "freefront/errors.hpp"
#include "freefront/numerics.hpp"

namespace freefront {

using numerics::kPi;

namespace {

constexpr double kUndershoot = 1e-12;
constexpr double kDefaultLineSpacing = 0.02;
constexpr std::size_t kMaxLoggedWarnings = 20;

double max_of(std::span<const double> v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

double min_of(std::span<const double> v) {
  return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

/// Clamps undershoots in (-kUndershoot, 0) to zero. Returns false on a larger undershoot
/// or a non-finite value.
bool clamp_field(std::vector<double>& field, std::uint64_t& clamps, std::string& reason,
                 const char* name) {
  for (std::size_t i = 0; i < field.size(); ++i) {
    double& v = field[i];
    if (!std::isfinite(v)) {
      reason = std::string(name) + " became non-finite";
      return false;
    }
    if (v < 0.0) {
      if (v <= -kUndershoot) {
        std::ostringstream os;
        os << name << " undershoot " << v << " at node " << i;
        reason = os.str();
        return false;
      }
      v = 0.0;
      ++clamps;
    }
  }
  return true;
}

void add_warning(RunDiagnostics& d, std::string message) {
  if (d.warnings.size() < kMaxLoggedWarnings) d.warnings.push_back(std::move(message));
}

}  // namespace

NumericsConfig NumericsConfig::resolved(const ModelParams& p) const {
  NumericsConfig out = *this;
  if (out.L <= 0.0) {
    out.L = std::max({10.0 * p.h0, 4.0 * lambda_threshold(p), 20.0});
  }
  if (out.n_x == 0) {
    out.n_x = static_cast<std::size_t>(std::llround(2.0 * out.L / kDefaultLineSpacing)) + 1;
  }
  if (out.probe_half_width <= 0.0) out.probe_half_width = 0.5 * p.h0;
  return out;
}

void NumericsConfig::validate(const ModelParams& p) const {
  auto fail = [](const std::string& m) { throw ValidationError(m); };
  if (!(dt > 0.0)) fail("dt must be positive");
  if (!(t_max > 0.0)) fail("t_max must be positive");
  if (n_y < StraightGrid::kMinInterior) fail("n_y must be at least 32");
  if (n_x < 5) fail("n_x must be at least 5");
  if (!(L > 0.0)) fail("L must be positive");
  if (!(0.9 * L > p.h0)) fail("L must exceed h0 / 0.9 so the initial habitat fits the window");
  if (front_stencil_order != 2 && front_stencil_order != 3) {
    fail("front_stencil_order must be 2 or 3");
  }
  if (!(tol_bounds >= 0.0)) fail("tol_bounds must be nonnegative");
  if (!(snapshot_every > 0.0)) fail("snapshot_every must be positive");
  if (!(probe_half_width > 0.0) || probe_half_width > L) {
    fail("probe_half_width must lie in (0, L]");
  }
  if (!(cfl_front > 0.0 && cfl_front <= 1.0)) fail("cfl_front must lie in (0, 1]");
  if (max_halvings < 0) fail("max_halvings must be nonnegative");
}

std::function<double(double)> cosine_bump(double amplitude, double h0) {
  return [amplitude, h0](double x) {
    if (x <= -h0 || x >= h0) return 0.0;
    return amplitude * std::cos(kPi * x / (2.0 * h0));
  };
}

std::function<double(double)> quartic_bump(double amplitude, double h0) {
  return [amplitude, h0](double x) {
    if (x <= -h0 || x >= h0) return 0.0;
    const double s = 1.0 - (x / h0) * (x / h0);
    return amplitude * s * s;
  };
}

std::function<double(double)> constant_profile(double value) {
  return [value](double) { return value; };
}

std::function<double(double)> sampled_profile(SampledProfile samples) {
  if (samples.values.empty()) throw ValidationError("sampled profile has no samples");
  return [s = std::move(samples)](double x) {
    if (x <= s.x_lo) return s.values.front();
    if (x >= s.x_hi) return s.values.back();
    return limited_cubic(s.values, s.x_lo, s.spacing(), x);
  };
}

SampledProfile sample_profile(const std::function<double(double)>& f, double lo, double hi,
                              std::size_t count) {
  SampledProfile s;
  s.x_lo = lo;
  s.x_hi = hi;
  s.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) s.values[i] = f(s.x(i));
  return s;
}

double SimulationResult::line_dx() const {
  return 2.0 * numerics.L / static_cast<double>(numerics.n_x - 1);
}

double boundary_flux(std::span<const double> w, const FrontState& front, Side side, int order) {
  const double span = front.h - front.g;
  if (!(span > 0.0)) throw GeometryError("front span must be positive (h > g)");
  if (w.size() < 4) throw ValidationError("boundary_flux needs at least 4 samples");
  if (order != 2 && order != 3) throw ValidationError("stencil order must be 2 or 3");
  const double dy = 2.0 / static_cast<double>(w.size() - 1);
  const std::size_t n = w.size() - 1;
  double wy = 0.0;
  if (side == Side::Left) {
    wy = order == 2 ? (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * dy)
                    : (-11.0 * w[0] + 18.0 * w[1] - 9.0 * w[2] + 2.0 * w[3]) / (6.0 * dy);
  } else {
    wy = order == 2
             ? (3.0 * w[n] - 4.0 * w[n - 1] + w[n - 2]) / (2.0 * dy)
             : (11.0 * w[n] - 18.0 * w[n - 1] + 9.0 * w[n - 2] - 2.0 * w[n - 3]) / (6.0 * dy);
  }
  return 2.0 / span * wy;
}

StefanVelocities stefan_velocities(std::span<const double> w, const FrontState& front, double mu,
                                   int order) {
  StefanVelocities v;
  v.g_dot = -mu * boundary_flux(w, front, Side::Left, order);
  v.h_dot = -mu * boundary_flux(w, front, Side::Right, order);
  if (v.g_dot > 0.0) {
    v.g_dot = 0.0;
    v.clamped = true;
  }
  if (v.h_dot < 0.0) {
    v.h_dot = 0.0;
    v.clamped = true;
  }
  return v;
}

Stepper::Stepper(ModelParams p, NumericsConfig cfg, double u0_sup, double v0_sup)
    : p_(p),
      cfg_(cfg),
      straight_(cfg.n_y),
      line_(cfg.L, cfg.n_x),
      w_bound_(freefront::predator_bound(p, u0_sup, v0_sup)),
      z_bound_(freefront::prey_bound(p, v0_sup)) {
  const auto x = line_.nodes();
  std::size_t nearest = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) <= cfg_.probe_half_width) probe_nodes_.push_back(i);
    if (std::abs(x[i]) < std::abs(x[nearest])) nearest = i;
  }
  if (probe_nodes_.empty()) probe_nodes_.push_back(nearest);
}

double Stepper::stable_dt(const FieldState& state) const {
  double dt = cfg_.dt;
  const double speed = std::max(std::abs(state.front.g_dot), std::abs(state.front.h_dot));
  if (speed > 0.0) {
    const double cell = 0.5 * straight_.dy() * state.front.span();
    dt = std::min(dt, cfg_.cfl_front * cell / speed);
    // Explicit central advection under implicit diffusion stays stable for dt <= 2 / speed^2.
    dt = std::min(dt, 1.0 / (speed * speed));
  }
  return dt;
}

std::variant<Stepper::Success, Stepper::Failure> Stepper::try_step(const FieldState& state,
                                                                   double dt) const {
  const auto& old = state.front;
  const std::size_t ny = straight_.size();
  const std::size_t nx = line_.size();
  const double dy = straight_.dy();
  const double dx = line_.dx();

  // (i) fronts first, from the boundary gradients of the current profile.
  const StefanVelocities vel =
      stefan_velocities(state.w, old, p_.mu, cfg_.front_stencil_order);
  FrontState next;
  next.g = old.g + dt * vel.g_dot;
  next.h = old.h + dt * vel.h_dot;
  next.g_dot = vel.g_dot;
  next.h_dot = vel.h_dot;
  const double limit = 0.9 * line_.half_width();
  if (next.g <= -limit || next.h >= limit) {
    std::ostringstream os;
    os << "front reached 0.9 L at t = " << state.t + dt << " (g = " << next.g
       << ", h = " << next.h << ", L = " << line_.half_width() << "); enlarge L";
    throw GeometryError(os.str());
  }

  // (ii) predator on the straightened grid: implicit phi w_yy, explicit advection and reaction.
  const TransformCoefficients coef = transform_coefficients(next);
  const std::vector<double> z_straight = interp_prey_to_straight(state.z, old, straight_, line_);
  const auto y = straight_.nodes();
  const std::size_t m = ny - 2;
  std::vector<double> lower(m), diag(m), upper(m), rhs(m);
  const double r = dt * coef.phi / (dy * dy);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t j = k + 1;
    const double wj = state.w[j];
    const double wy = (state.w[j + 1] - state.w[j - 1]) / (2.0 * dy);
    rhs[k] = wj + dt * (coef.psi(y[j]) * wy + wj * (1.0 - wj + p_.a * z_straight[j]));
    lower[k] = -r;
    diag[k] = 1.0 + 2.0 * r;
    upper[k] = -r;
  }
  const std::vector<double> interior = numerics::solve_tridiagonal(lower, diag, upper, rhs);

  Success out;
  out.flux_clamped = vel.clamped;
  FieldState& s = out.state;
  s.t = state.t + dt;
  s.w.assign(ny, 0.0);
  std::copy(interior.begin(), interior.end(), s.w.begin() + 1);

  // (iii) prey on the line: implicit D z_xx with zero flux at +-L, explicit reaction.
  const std::vector<double> u_line = interp_pred_to_line(state.w, old, straight_, line_);
  std::vector<double> zl(nx), zd(nx), zu(nx), zr(nx);
  const double sx = dt * p_.D / (dx * dx);
  for (std::size_t i = 0; i < nx; ++i) {
    const double zi = state.z[i];
    zr[i] = zi + dt * zi * (p_.b - zi - p_.c * u_line[i]);
    zl[i] = -sx;
    zd[i] = 1.0 + 2.0 * sx;
    zu[i] = -sx;
  }
  zu[0] = -2.0 * sx;
  zl[nx - 1] = -2.0 * sx;
  s.z = numerics::solve_tridiagonal(zl, zd, zu, zr);

  // (iv) undershoot policy and a-priori bounds.
  Failure failure;
  if (!clamp_field(s.w, out.undershoot_clamps, failure.reason, "predator")) return failure;
  if (!clamp_field(s.z, out.undershoot_clamps, failure.reason, "prey")) return failure;
  const double w_max = max_of(s.w);
  const double z_max = max_of(s.z);
  if (w_max > w_bound_ + cfg_.tol_bounds) {
    std::ostringstream os;
    os << "predator bound breached: max w = " << w_max << " > " << w_bound_;
    return Failure{os.str()};
  }
  if (z_max > z_bound_ + cfg_.tol_bounds) {
    std::ostringstream os;
    os << "prey bound breached: max z = " << z_max << " > " << z_bound_;
    return Failure{os.str()};
  }

  // Velocities at the new time level, used by the next step and the record.
  const StefanVelocities after = stefan_velocities(s.w, next, p_.mu, cfg_.front_stencil_order);
  s.front = next;
  s.front.g_dot = after.g_dot;
  s.front.h_dot = after.h_dot;
  out.flux_clamped = out.flux_clamped || after.clamped;
  return out;
}

FrontRecord Stepper::record(const FieldState& state) const {
  FrontRecord r;
  r.t = state.t;
  r.g = state.front.g;
  r.h = state.front.h;
  r.g_dot = state.front.g_dot;
  r.h_dot = state.front.h_dot;
  r.sup_u = max_of(state.w);
  const auto x = line_.nodes();
  double sum = 0.0;
  r.probe_v_min = 1e300;
  r.probe_v_max = -1e300;
  r.probe_u_min = 1e300;
  r.probe_u_max = -1e300;
  const double span = state.front.span();
  for (std::size_t i : probe_nodes_) {
    const double zv = state.z[i];
    sum += zv;
    r.probe_v_min = std::min(r.probe_v_min, zv);
    r.probe_v_max = std::max(r.probe_v_max, zv);
    double uv = 0.0;
    if (x[i] > state.front.g && x[i] < state.front.h) {
      const double yv = (2.0 * x[i] - (state.front.h + state.front.g)) / span;
      uv = limited_cubic(state.w, -1.0, straight_.dy(), yv);
    }
    r.probe_u_min = std::min(r.probe_u_min, uv);
    r.probe_u_max = std::max(r.probe_u_max, uv);
  }
  r.probe_v = sum / static_cast<double>(probe_nodes_.size());
  return r;
}

FieldState initial_state(const ModelParams& p, const InitialData& init,
                         const NumericsConfig& cfg) {
  p.validate();
  cfg.validate(p);
  if (!init.u0 || !init.v0) throw ValidationError("initial data must define both u0 and v0");
  const StraightGrid straight(cfg.n_y);
  const LineGrid line(cfg.L, cfg.n_x);

  for (double end : {-p.h0, p.h0}) {
    const double value = init.u0(end);
    if (!(std::abs(value) <= 1e-12)) {
      std::ostringstream os;
      os << "u0 must vanish at the initial fronts (u0(" << end << ") = " << value << ")";
      throw ValidationError(os.str());
    }
  }

  FieldState s;
  s.front.g = -p.h0;
  s.front.h = p.h0;
  const auto y = straight.nodes();
  s.w.assign(y.size(), 0.0);
  for (std::size_t j = 1; j + 1 < y.size(); ++j) {
    const double value = init.u0(p.h0 * y[j]);
    if (!(value > 0.0) || !std::isfinite(value)) {
      std::ostringstream os;
      os << "u0 must be positive inside (-h0, h0) (u0(" << p.h0 * y[j] << ") = " << value << ")";
      throw ValidationError(os.str());
    }
    s.w[j] = value;
  }
  const auto x = line.nodes();
  s.z.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double value = init.v0(x[i]);
    if (!(value > 0.0) || !std::isfinite(value)) {
      std::ostringstream os;
      os << "v0 must be positive and bounded (v0(" << x[i] << ") = " << value << ")";
      throw ValidationError(os.str());
    }
    s.z[i] = value;
  }
  const StefanVelocities vel = stefan_velocities(s.w, s.front, p.mu, cfg.front_stencil_order);
  s.front.g_dot = vel.g_dot;
  s.front.h_dot = vel.h_dot;
  return s;
}

FieldState step(const FieldState& state, const ModelParams& p, const NumericsConfig& cfg) {
  const Stepper stepper(p, cfg, max_of(state.w), max_of(state.z));
  double dt = cfg.dt;
  std::string last_reason;
  for (int attempt = 0; attempt <= cfg.max_halvings; ++attempt) {
    auto outcome = stepper.try_step(state, dt);
    if (auto* ok = std::get_if<Stepper::Success>(&outcome)) return std::move(ok->state);
    last_reason = std::get<Stepper::Failure>(outcome).reason;
    dt *= 0.5;
  }
  throw SolverError("step failed after " + std::to_string(cfg.max_halvings) +
                    " halvings: " + last_reason);
}

namespace {

void update_bounds(BoundsReport& b, const FieldState& s) {
  b.max_w_excess = std::max(b.max_w_excess, max_of(s.w) - b.predator_bound);
  b.max_z_excess = std::max(b.max_z_excess, max_of(s.z) - b.prey_bound);
  b.min_w = std::min(b.min_w, min_of(s.w));
  b.min_z = std::min(b.min_z, min_of(s.z));
}

}  // namespace

SimulationResult simulate(const ModelParams& p, const InitialData& init,
                          const NumericsConfig& cfg_in, const StopRule& stop) {
  const NumericsConfig cfg = cfg_in.resolved(p);
  FieldState state = initial_state(p, init, cfg);

  SimulationResult result;
  result.params = p;
  result.numerics = cfg;
  result.u0_sup = max_of(state.w);
  result.v0_sup = max_of(state.z);
  const Stepper stepper(p, cfg, result.u0_sup, result.v0_sup);
  result.bounds.predator_bound = stepper.predator_bound();
  result.bounds.prey_bound = stepper.prey_bound();
  auto& diag = result.diagnostics;

  const double dy = stepper.straight().dy();
  const double soft_guard = dy * dy * (2.0 * p.h0) * (2.0 * p.h0) / 8.0;
  if (cfg.dt > soft_guard) {
    std::ostringstream os;
    os << "dt = " << cfg.dt << " exceeds the soft advection guard dy^2 (2 h0)^2 / 8 = "
       << soft_guard << "; the front and advection caps still bound each step";
    add_warning(diag, os.str());
  }

  update_bounds(result.bounds, state);
  result.fronts.push_back(stepper.record(state));
  result.snapshots.push_back({state.t, state.front, state.w, state.z});

  std::size_t next_snapshot = 1;
  bool last_was_snapshot = true;
  while (state.t < cfg.t_max) {
    const double snap_time = static_cast<double>(next_snapshot) * cfg.snapshot_every;
    const double target = std::min(cfg.t_max, snap_time);
    double dt = stepper.stable_dt(state);
    bool lands = false;
    if (state.t + dt >= target - 1e-12 * std::max(1.0, target)) {
      dt = target - state.t;
      lands = true;
    }

    std::string last_reason;
    std::optional<Stepper::Success> accepted;
    for (int attempt = 0; attempt <= cfg.max_halvings; ++attempt) {
      auto outcome = stepper.try_step(state, dt);
      if (auto* ok = std::get_if<Stepper::Success>(&outcome)) {
        accepted = std::move(*ok);
        break;
      }
      last_reason = std::get<Stepper::Failure>(outcome).reason;
      dt *= 0.5;
      lands = false;
      ++diag.dt_halvings;
    }
    if (!accepted) {
      std::ostringstream os;
      os << "step at t = " << state.t << " failed after " << cfg.max_halvings
         << " halvings: " << last_reason;
      throw SolverError(os.str());
    }
    if (accepted->flux_clamped) {
      ++diag.flux_clamps;
      add_warning(diag, "front velocity of the wrong sign clamped to zero near t = " +
                            std::to_string(accepted->state.t));
    }
    diag.undershoot_clamps += accepted->undershoot_clamps;
    ++diag.steps;

    state = std::move(accepted->state);
    if (lands) state.t = target;
    update_bounds(result.bounds, state);
    const FrontRecord rec = stepper.record(state);
    result.fronts.push_back(rec);

    last_was_snapshot = false;
    if (lands && target == snap_time) {
      result.snapshots.push_back({state.t, state.front, state.w, state.z});
      ++next_snapshot;
      last_was_snapshot = true;
    }
    if (stop && stop(rec)) {
      diag.stopped_early = true;
      break;
    }
  }
  if (!last_was_snapshot) {
    result.snapshots.push_back({state.t, state.front, state.w, state.z});
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace freefront
