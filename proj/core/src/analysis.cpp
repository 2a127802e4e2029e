#include "freefront/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "freefront/errors.hpp"
#include "freefront/numerics.hpp"
#include "freefront/steady.hpp"

namespace freefront {

using numerics::kPi;

std::string_view to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Spreading:
      return "Spreading";
    case VerdictKind::Vanishing:
      return "Vanishing";
    case VerdictKind::Undecided:
      return "Undecided";
  }
  return "Undecided";
}

ClassifyTolerances ClassifyTolerances::defaults(const ModelParams& p,
                                                const NumericsConfig& cfg) {
  ClassifyTolerances t;
  t.u_tol = 1e-4 * (1.0 + p.a * p.b) / (1.0 + p.a * p.c);
  t.span_tol = 2.0 * (2.0 * cfg.L / static_cast<double>(cfg.n_x - 1));
  t.v_tol = 1e-5 * p.h0 / cfg.t_max;
  t.u_floor = hunting_regime(p) == HuntingRegime::Uncovered ? 0.5 : 0.5 * spreading_limits(p).first;
  t.trailing_time = std::min(0.1 * cfg.t_max, 5.0);
  return t;
}

namespace {

bool spreading_holds(const FrontRecord& r, double lambda, const ClassifyTolerances& tols) {
  return r.h - r.g > lambda + tols.span_tol && r.probe_u_min >= tols.u_floor;
}

bool vanishing_holds(const FrontRecord& r, const ClassifyTolerances& tols) {
  return r.sup_u < tols.u_tol && std::abs(r.g_dot) + std::abs(r.h_dot) < tols.v_tol;
}

}  // namespace

Verdict classify(const SimulationResult& result, const ModelParams& p,
                 const ClassifyTolerances& tols) {
  Verdict v;
  const auto& recs = result.fronts;
  if (recs.empty()) {
    v.diagnostic = "empty run";
    return v;
  }
  const double lambda = lambda_threshold(p);
  const FrontRecord& last = recs.back();
  auto& e = v.evidence;
  e.lambda = lambda;
  e.final_span = last.h - last.g;
  e.t_end = last.t;
  e.sup_u_end = last.sup_u;
  e.front_speed_end = std::abs(last.g_dot) + std::abs(last.h_dot);
  e.max_span = 0.0;
  for (const auto& r : recs) e.max_span = std::max(e.max_span, r.h - r.g);

  const double window_start = last.t - tols.trailing_time;
  e.trailing_probe_u_min = 1e300;
  for (auto it = recs.rbegin(); it != recs.rend() && it->t >= window_start; ++it) {
    e.trailing_probe_u_min = std::min(e.trailing_probe_u_min, it->probe_u_min);
  }

  if (e.final_span > lambda + tols.span_tol && e.trailing_probe_u_min >= tols.u_floor) {
    v.kind = VerdictKind::Spreading;
    double since = last.t;
    for (auto it = recs.rbegin(); it != recs.rend() && spreading_holds(*it, lambda, tols); ++it) {
      since = it->t;
    }
    v.t_decided = std::min(last.t, since + tols.trailing_time);
    v.diagnostic = "span exceeds lambda + span_tol and the probe-window predator stays above u_floor";
    return v;
  }
  if (e.final_span <= lambda + tols.span_tol && vanishing_holds(last, tols)) {
    v.kind = VerdictKind::Vanishing;
    double since = last.t;
    for (auto it = recs.rbegin(); it != recs.rend() && vanishing_holds(*it, tols); ++it) {
      since = it->t;
    }
    v.t_decided = since;
    v.diagnostic = "span within lambda + span_tol, predator below u_tol, fronts stopped";
    return v;
  }

  std::ostringstream os;
  os << "undecided at t = " << last.t << ": span - lambda = " << e.final_span - lambda
     << " (span_tol " << tols.span_tol << "), sup_u / u_tol = " << e.sup_u_end / tols.u_tol
     << ", front speed / v_tol = " << e.front_speed_end / tols.v_tol
     << ", trailing probe u / u_floor = " << e.trailing_probe_u_min / tols.u_floor;
  v.diagnostic = os.str();
  v.t_decided = last.t;
  return v;
}

StopRule spreading_stop_rule(const ModelParams& p, const ClassifyTolerances& tols) {
  const double lambda = lambda_threshold(p);
  auto since = std::make_shared<double>(-1.0);
  return [lambda, tols, since](const FrontRecord& r) {
    if (!spreading_holds(r, lambda, tols)) {
      *since = -1.0;
      return false;
    }
    if (*since < 0.0) *since = r.t;
    return r.t - *since >= tols.trailing_time;
  };
}

ClassifiedRun simulate_and_classify(const ModelParams& p, const InitialData& init,
                                    const NumericsConfig& cfg) {
  const NumericsConfig resolved = cfg.resolved(p);
  ClassifiedRun run;
  run.tolerances = ClassifyTolerances::defaults(p, resolved);
  StopRule stop;
  if (resolved.stop_when_decided) stop = spreading_stop_rule(p, run.tolerances);
  run.result = simulate(p, init, resolved, stop);
  run.verdict = classify(run.result, p, run.tolerances);
  return run;
}

// ---------------------------------------------------------------------------
// Supersolution

double Supersolution::v_bar(double t) const { return ode_upper_v(t, p_.b, v0_sup_); }

double Supersolution::growth_rate(double t) const {
  return 1.0 + p_.a * v_bar(t) - kappa_;
}

double Supersolution::exponent(double t) const {
  const auto rate = [this](double s) { return growth_rate(s); };
  const std::size_t last = exponent_table_.size() - 1;
  std::size_t k = static_cast<std::size_t>(std::floor(t / panel_));
  k = std::min(k, last);
  const double t0 = static_cast<double>(k) * panel_;
  return exponent_table_[k] + numerics::adaptive_simpson(rate, t0, t, 1e-15);
}

double Supersolution::f(double t) const { return M_ * std::exp(exponent(t)); }

double Supersolution::f_integral(double t) const {
  const std::size_t last = integral_table_.size() - 1;
  std::size_t k = static_cast<std::size_t>(std::floor(t / panel_));
  k = std::min(k, last);
  const double t0 = static_cast<double>(k) * panel_;
  if (t == t0) return integral_table_[k];
  const auto rate = [this](double s) { return growth_rate(s); };
  const double base = exponent_table_[k];
  const auto fs = [&](double s) {
    return M_ * std::exp(base + numerics::adaptive_simpson(rate, t0, s, 1e-15));
  };
  const double tol = 1e-13 * std::max(integral_table_[k], M_ * panel_);
  return integral_table_[k] + numerics::adaptive_simpson(fs, t0, t, tol);
}

double Supersolution::eta(double t) const {
  const double start = p_.h0 * (1.0 + delta_);
  // Saturates at theta_len; the min only absorbs rounding at the last ulp.
  return std::min(theta_len_, std::sqrt(start * start + mu0_ * kPi * f_integral(t)));
}

double Supersolution::barrier(double t, double x) const {
  const double e = eta(t);
  if (std::abs(x) >= e) return 0.0;
  return f(t) * std::cos(kPi * x / (2.0 * e));
}

Supersolution build_supersolution(const ModelParams& p, const SampledProfile& u0,
                                  const SampledProfile& v0, double delta) {
  p.validate();
  const double lambda = lambda_threshold(p);
  if (2.0 * p.h0 >= lambda) {
    throw DomainError("the vanishing barrier needs 2 h0 < lambda");
  }
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  Supersolution s;
  s.p_ = p;
  s.delta_ = delta;
  s.theta_len_ = 0.5 * p.h0 + 0.25 * lambda;
  const double start = p.h0 * (1.0 + delta);
  if (!(s.theta_len_ > start)) {
    std::ostringstream os;
    os << "delta too large: theta_len = " << s.theta_len_ << " must exceed h0 (1 + delta) = "
       << start;
    throw DomainError(os.str());
  }
  s.kappa_ = (kPi / (2.0 * s.theta_len_)) * (kPi / (2.0 * s.theta_len_));
  s.v0_sup_ = v0.sup_norm();
  if (!(s.v0_sup_ > 0.0)) throw ValidationError("v0 must be positive");

  // Smallest power-of-two multiple of |u0|_inf dominating u0 under the widened cosine.
  const double u_sup = u0.sup_norm();
  if (!(u_sup > 0.0)) throw ValidationError("u0 must be positive somewhere");
  bool found = false;
  for (int k = 0; k <= 40 && !found; ++k) {
    const double M = std::ldexp(u_sup, k);
    bool ok = true;
    for (std::size_t i = 0; i < u0.values.size() && ok; ++i) {
      const double x = u0.x(i);
      ok = u0.values[i] <= M * std::cos(kPi * x / (2.0 * start));
    }
    if (ok) {
      s.M_ = M;
      found = true;
    }
  }
  if (!found) {
    throw ConstructionError(
        "no M <= 2^40 |u0|_inf dominates u0 under the barrier cosine; u0 hugs the endpoints");
  }

  const auto rate = [&s](double t) { return s.growth_rate(t); };
  const double rate_inf = 1.0 + p.a * p.b - s.kappa_;
  s.exponent_table_.assign(1, 0.0);
  s.integral_table_.assign(1, 0.0);
  constexpr std::size_t kMaxPanels = 4'000'000;
  for (std::size_t k = 1; k <= kMaxPanels; ++k) {
    const double t0 = static_cast<double>(k - 1) * s.panel_;
    const double t1 = static_cast<double>(k) * s.panel_;
    const double base = s.exponent_table_.back();
    const double e1 = base + numerics::adaptive_simpson(rate, t0, t1, 1e-15);
    const auto fs = [&](double t) {
      return s.M_ * std::exp(base + numerics::adaptive_simpson(rate, t0, t, 1e-15));
    };
    const double tol = 1e-13 * std::max(s.integral_table_.back(), s.M_ * s.panel_);
    const double f1 = s.integral_table_.back() + numerics::adaptive_simpson(fs, t0, t1, tol);
    s.exponent_table_.push_back(e1);
    s.integral_table_.push_back(f1);

    const double bound_rate = std::max(s.growth_rate(t1), rate_inf);
    if (bound_rate < 0.0) {
      const double tail = s.M_ * std::exp(e1) / (-bound_rate);
      if (tail < 1e-9 * f1) {
        s.tail_start_ = t1;
        s.total_ = f1 + tail;
        break;
      }
    }
  }
  if (s.total_ <= 0.0) throw ConstructionError("barrier integral did not converge");
  s.mu0_ = (s.theta_len_ * s.theta_len_ - start * start) / (kPi * s.total_);
  return s;
}

DominationReport check_domination(const SimulationResult& result, const Supersolution& sup,
                                  double front_eps, double u_eps) {
  DominationReport rep;
  rep.front_eps = front_eps;
  rep.u_eps = u_eps;
  rep.precondition_met = result.params.mu <= sup.mu0();
  for (const auto& r : result.fronts) {
    const double e = sup.eta(r.t);
    const double margin = std::min(e - r.h, r.g + e);
    if (margin < rep.worst_front_margin) {
      rep.worst_front_margin = margin;
      rep.worst_front_time = r.t;
    }
  }
  const StraightGrid grid(result.numerics.n_y);
  const auto y = grid.nodes();
  for (const auto& snap : result.snapshots) {
    const double ft = sup.f(snap.t);
    const double e = sup.eta(snap.t);
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double x = y_to_x(snap.front, y[j]);
      const double bar = std::abs(x) >= e ? 0.0 : ft * std::cos(kPi * x / (2.0 * e));
      const double margin = bar - snap.w[j];
      if (margin < rep.worst_u_margin) {
        rep.worst_u_margin = margin;
        rep.worst_u_time = snap.t;
        rep.worst_u_x = x;
      }
    }
  }
  rep.passed = rep.worst_front_margin >= -front_eps && rep.worst_u_margin >= -u_eps;
  return rep;
}

// ---------------------------------------------------------------------------
// Threshold bracketing

bool MuStarBracket::consistent() const {
  double max_vanishing = -1e300;
  double min_spreading = 1e300;
  for (const auto& pr : probes) {
    if (pr.kind == VerdictKind::Vanishing) {
      max_vanishing = std::max(max_vanishing, pr.mu);
    } else {
      min_spreading = std::min(min_spreading, pr.mu);
    }
  }
  return max_vanishing < min_spreading;
}

namespace {

MuProbe run_probe(const ModelParams& base, const InitialData& init, const NumericsConfig& cfg,
                  double mu) {
  ModelParams p = base;
  p.mu = mu;
  MuProbe probe;
  probe.mu = mu;
  NumericsConfig c = cfg;
  ClassifiedRun run = simulate_and_classify(p, init, c);
  probe.t_max_used = run.result.numerics.t_max;
  if (run.verdict.kind == VerdictKind::Undecided) {
    c.t_max = 2.0 * cfg.resolved(p).t_max;
    run = simulate_and_classify(p, init, c);
    probe.t_max_used = c.t_max;
    if (run.verdict.kind == VerdictKind::Undecided) probe.near_threshold = true;
  }
  probe.kind = run.verdict.kind;
  probe.final_span = run.verdict.evidence.final_span;
  return probe;
}

}  // namespace

MuStarBracket estimate_mu_star(const ModelParams& p_base, const InitialData& init,
                               const NumericsConfig& cfg, std::pair<double, double> bracket,
                               int n_bisect) {
  p_base.validate();
  auto [lo, hi] = bracket;
  if (!(lo > 0.0) || !(hi > lo)) throw BracketError("bracket must satisfy 0 < mu_lo < mu_hi");
  if (2.0 * p_base.h0 >= lambda_threshold(p_base)) {
    throw DomainError("threshold bracketing needs 2 h0 < lambda; every mu spreads");
  }
  if (n_bisect < 0) throw ValidationError("n_bisect must be nonnegative");

  MuStarBracket out;
  const MuProbe at_lo = run_probe(p_base, init, cfg, lo);
  const MuProbe at_hi = run_probe(p_base, init, cfg, hi);
  out.probes.push_back(at_lo);
  out.probes.push_back(at_hi);
  if (at_lo.kind != VerdictKind::Vanishing || at_hi.kind != VerdictKind::Spreading) {
    std::ostringstream os;
    os << "invalid bracket: mu_lo = " << lo << " is " << to_string(at_lo.kind)
       << ", mu_hi = " << hi << " is " << to_string(at_hi.kind)
       << " (need Vanishing below and Spreading above)";
    throw BracketError(os.str());
  }
  for (int i = 0; i < n_bisect; ++i) {
    const double mid = 0.5 * (lo + hi);
    const MuProbe probe = run_probe(p_base, init, cfg, mid);
    out.probes.push_back(probe);
    if (probe.near_threshold) out.near_threshold.push_back(mid);
    if (probe.kind == VerdictKind::Vanishing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.lo = lo;
  out.hi = hi;
  return out;
}

// ---------------------------------------------------------------------------
// Long-time limits

LimitReport verify_limits(const SimulationResult& result, const ModelParams& p,
                          const Verdict& verdict, double probe_half_width, double tol) {
  if (verdict.kind == VerdictKind::Undecided) {
    throw DomainError("verify_limits needs a decided verdict");
  }
  LimitReport rep;
  const auto& st = result.final_state;
  const LineGrid line(result.numerics.L, result.numerics.n_x);
  const StraightGrid straight(result.numerics.n_y);
  const std::vector<double> u_line = interp_pred_to_line(st.w, st.front, straight, line);
  const auto x = line.nodes();
  std::vector<std::size_t> window;
  std::size_t nearest = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) <= probe_half_width) window.push_back(i);
    if (std::abs(x[i]) < std::abs(x[nearest])) nearest = i;
  }
  if (window.empty()) window.push_back(nearest);

  auto worst_on_window = [&](const std::vector<double>& field, double target) {
    double worst = field[window.front()];
    for (std::size_t i : window) {
      if (std::abs(field[i] - target) > std::abs(worst - target)) worst = field[i];
    }
    return worst;
  };
  auto add = [&](std::string name, double value, double target) {
    LimitCheck c;
    c.name = std::move(name);
    c.value = value;
    c.target = target;
    c.error = std::abs(value - target);
    c.tolerance = tol * std::max(std::abs(target), 1.0);
    c.passed = c.error <= c.tolerance;
    rep.checks.push_back(c);
  };

  if (verdict.kind == VerdictKind::Spreading) {
    if (hunting_regime(p) == HuntingRegime::Uncovered) {
      rep.note = "no long-time limit is known for b > c with a c >= 1";
      rep.passed = false;
      return rep;
    }
    const auto [u_star, v_star] = spreading_limits(p);
    rep.note = std::string(to_string(hunting_regime(p))) + " hunting spreading limits";
    add("u", worst_on_window(u_line, u_star), u_star);
    add("v", worst_on_window(st.z, v_star), v_star);
  } else {
    rep.note = "vanishing: predator extinct, prey at carrying capacity b";
    add("sup_u", *std::max_element(st.w.begin(), st.w.end()), 0.0);
    add("v", worst_on_window(st.z, p.b), p.b);
  }
  rep.passed = std::all_of(rep.checks.begin(), rep.checks.end(),
                           [](const LimitCheck& c) { return c.passed; });
  return rep;
}

}  // namespace freefront
