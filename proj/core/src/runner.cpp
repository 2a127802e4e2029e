#include "freefront/runner.hpp"

#include <atomic>
#include <cstdio>
#include <ostream>
#include <thread>

#include "freefront/analysis.hpp"
#include "freefront/artifacts.hpp"
#include "freefront/plots.hpp"
#include "freefront/steady.hpp"
#include "json.hpp"
#include "json_format.hpp"

namespace freefront {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation:
    case ErrorKind::Domain:
    case ErrorKind::Range:
    case ErrorKind::Bracket:
    case ErrorKind::Io:
      return 2;
    case ErrorKind::Geometry:
    case ErrorKind::Solver:
    case ErrorKind::Construction:
      return 3;
    case ErrorKind::Oracle:
      return 4;
  }
  return 3;
}

std::string error_json(ErrorKind kind, const std::string& message) {
  json j;
  j["error"] = {{"kind", std::string(to_string(kind))},
                {"message", message},
                {"exit_code", exit_code_for(kind)}};
  return format_json(j);
}

namespace {

json model_json(const ModelParams& p) {
  return {{"a", p.a}, {"b", p.b}, {"c", p.c}, {"D", p.D}, {"mu", p.mu}, {"h0", p.h0}};
}

json numerics_json(const NumericsConfig& n) {
  return {{"dt", n.dt},
          {"n_y", n.n_y},
          {"n_x", n.n_x},
          {"L", n.L},
          {"t_max", n.t_max},
          {"front_stencil_order", n.front_stencil_order},
          {"tol_bounds", n.tol_bounds},
          {"snapshot_every", n.snapshot_every},
          {"probe_half_width", n.probe_half_width},
          {"cfl_front", n.cfl_front},
          {"max_halvings", n.max_halvings},
          {"stop_when_decided", n.stop_when_decided}};
}

json verdict_json(const Verdict& v) {
  const auto& e = v.evidence;
  return {{"kind", std::string(to_string(v.kind))},
          {"t_decided", v.t_decided},
          {"diagnostic", v.diagnostic},
          {"evidence",
           {{"lambda", e.lambda},
            {"final_span", e.final_span},
            {"max_span", e.max_span},
            {"sup_u_end", e.sup_u_end},
            {"front_speed_end", e.front_speed_end},
            {"trailing_probe_u_min", e.trailing_probe_u_min},
            {"t_end", e.t_end}}}};
}

json tolerances_json(const ClassifyTolerances& t) {
  return {{"u_tol", t.u_tol},
          {"span_tol", t.span_tol},
          {"v_tol", t.v_tol},
          {"u_floor", t.u_floor},
          {"trailing_time", t.trailing_time}};
}

json limits_json(const LimitReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"target", c.target},
                      {"error", c.error},
                      {"tolerance", c.tolerance},
                      {"passed", c.passed}});
  }
  return {{"checks", checks}, {"note", r.note}, {"passed", r.passed}};
}

json domination_json(const DominationReport& d) {
  return {{"precondition_met", d.precondition_met},
          {"worst_front_margin", d.worst_front_margin},
          {"worst_front_time", d.worst_front_time},
          {"worst_u_margin", d.worst_u_margin},
          {"worst_u_time", d.worst_u_time},
          {"worst_u_x", d.worst_u_x},
          {"front_eps", d.front_eps},
          {"u_eps", d.u_eps},
          {"passed", d.passed}};
}

json diagnostics_json(const SimulationResult& r) {
  const auto& d = r.diagnostics;
  const auto& b = r.bounds;
  return {{"steps", d.steps},
          {"dt_halvings", d.dt_halvings},
          {"flux_clamps", d.flux_clamps},
          {"undershoot_clamps", d.undershoot_clamps},
          {"stopped_early", d.stopped_early},
          {"warnings", d.warnings},
          {"bounds",
           {{"predator_bound", b.predator_bound},
            {"prey_bound", b.prey_bound},
            {"max_w_excess", b.max_w_excess},
            {"max_z_excess", b.max_z_excess},
            {"min_w", b.min_w},
            {"min_z", b.min_z}}}};
}

struct Thresholds {
  double lambda = 0.0;
  std::optional<double> mu_upper;
  std::optional<Supersolution> sup;
};

Thresholds thresholds_for(const ModelParams& p, const InitialData& init,
                          const NumericsConfig& resolved, double delta) {
  Thresholds t;
  t.lambda = lambda_threshold(p);
  if (2.0 * p.h0 < t.lambda) {
    const SampledProfile u0 = sample_profile(init.u0, -p.h0, p.h0, 401);
    const SampledProfile v0 = sample_profile(init.v0, -resolved.L, resolved.L, resolved.n_x);
    t.mu_upper = mu_upper_bound(p, u0);
    t.sup = build_supersolution(p, u0, v0, delta);
  }
  return t;
}

json thresholds_json(const Thresholds& t) {
  json j = {{"lambda", t.lambda}};
  if (t.mu_upper) j["mu_upper"] = *t.mu_upper;
  if (t.sup) j["mu0"] = t.sup->mu0();
  return j;
}

std::optional<std::pair<double, double>> limit_targets(const ModelParams& p, VerdictKind kind) {
  if (kind == VerdictKind::Vanishing) return std::pair{0.0, p.b};
  if (kind == VerdictKind::Spreading && hunting_regime(p) != HuntingRegime::Uncovered) {
    return spreading_limits(p);
  }
  return std::nullopt;
}

void say(const RunOptions& o, const std::string& msg) {
  if (o.log) *o.log << msg << '\n';
}

int run_simulate(const RunConfig& cfg, const fs::path& out, const RunOptions& opts) {
  const ModelParams& p = cfg.model;
  const InitialData init = make_initial_data(cfg.initial, p.h0);
  ClassifiedRun run = simulate_and_classify(p, init, cfg.run_numerics());
  const SimulationResult& r = run.result;
  const Thresholds th = thresholds_for(p, init, r.numerics, cfg.analysis.delta);

  json s;
  s["mode"] = "simulate";
  s["model"] = model_json(p);
  s["numerics"] = numerics_json(r.numerics);
  s["regime"] = std::string(to_string(hunting_regime(p)));
  s["verdict"] = verdict_json(run.verdict);
  s["tolerances"] = tolerances_json(run.tolerances);
  s["thresholds"] = thresholds_json(th);
  s["diagnostics"] = diagnostics_json(r);

  if (run.verdict.kind != VerdictKind::Undecided) {
    s["limits"] = limits_json(
        verify_limits(r, p, run.verdict, r.numerics.probe_half_width, cfg.analysis.limit_tol));
  } else {
    s["limits"] = nullptr;
  }
  if (auto lt = limit_targets(p, run.verdict.kind)) {
    s["limit_targets"] = {{"u", lt->first}, {"v", lt->second}};
  }

  std::optional<DominationReport> dom;
  if (cfg.analysis.domination && th.sup && p.mu <= th.sup->mu0()) {
    dom = check_domination(r, *th.sup, 2.0 * r.line_dx(), cfg.analysis.domination_u_eps);
    s["domination"] = domination_json(*dom);
  } else {
    s["domination"] = nullptr;
  }

  write_simulation_csv(out, r);
  write_atomic(out / "summary.json", format_json(s));
  if (cfg.outputs.plots) emit_plots(out);
  say(opts, "verdict: " + std::string(to_string(run.verdict.kind)) + " (t_end = " +
                format_number(r.t_end()) + ", span = " + format_number(run.verdict.evidence.final_span) + ")");

  if (dom && !dom->passed) {
    throw OracleViolation("barrier domination failed: worst front margin " +
                          format_number(dom->worst_front_margin) + ", worst u margin " +
                          format_number(dom->worst_u_margin) + " at t = " +
                          format_number(dom->worst_u_time));
  }
  return 0;
}

int run_bisect(const RunConfig& cfg, const fs::path& out, const RunOptions& opts) {
  const ModelParams& p = cfg.model;
  const InitialData init = make_initial_data(cfg.initial, p.h0);
  const NumericsConfig resolved = cfg.run_numerics().resolved(p);
  if (2.0 * p.h0 >= lambda_threshold(p)) {
    throw DomainError("bisection needs 2 h0 < lambda; every mu spreads");
  }
  const Thresholds th = thresholds_for(p, init, resolved, cfg.analysis.delta);
  const double lo = cfg.bisect.mu_lo.value_or(th.sup->mu0());
  const double hi = cfg.bisect.mu_hi.value_or(*th.mu_upper);
  say(opts, "bisecting mu on [" + format_number(lo) + ", " + format_number(hi) + "]");
  const MuStarBracket br = estimate_mu_star(p, init, cfg.run_numerics(), {lo, hi}, cfg.bisect.n_bisect);

  json probes = json::array();
  std::string csv = "mu,verdict,t_max_used,near_threshold,final_span\n";
  for (const auto& pr : br.probes) {
    probes.push_back({{"mu", pr.mu},
                      {"verdict", std::string(to_string(pr.kind))},
                      {"t_max_used", pr.t_max_used},
                      {"near_threshold", pr.near_threshold},
                      {"final_span", pr.final_span}});
    csv += format_number(pr.mu) + "," + std::string(to_string(pr.kind)) + "," +
           format_number(pr.t_max_used) + "," + (pr.near_threshold ? "1" : "0") + "," +
           format_number(pr.final_span) + "\n";
  }
  json s;
  s["mode"] = "bisect";
  s["model"] = model_json(p);
  s["numerics"] = numerics_json(resolved);
  s["thresholds"] = thresholds_json(th);
  s["initial_bracket"] = {lo, hi};
  s["bracket"] = {{"lo", br.lo}, {"hi", br.hi}, {"width", br.hi - br.lo}};
  s["near_threshold"] = br.near_threshold;
  s["consistent"] = br.consistent();
  s["probes"] = probes;
  write_atomic(out / "probes.csv", csv);
  write_atomic(out / "summary.json", format_json(s));
  say(opts, "mu threshold bracket: [" + format_number(br.lo) + ", " + format_number(br.hi) + "]");
  if (!br.consistent()) {
    throw OracleViolation("bisection probes are not ordered: a Vanishing probe lies above a Spreading one");
  }
  return 0;
}

struct CellResult {
  ModelParams p;
  double lambda = 0.0;
  std::string verdict;
  double final_span = 0.0;
  double t_decided = 0.0;
  std::string error;
};

CellResult run_cell(const RunConfig& cfg, const ModelParams& p, const fs::path& dir) {
  CellResult c;
  c.p = p;
  c.lambda = lambda_threshold(p);
  try {
    const InitialData init = make_initial_data(cfg.initial, p.h0);
    ClassifiedRun run = simulate_and_classify(p, init, cfg.run_numerics());
    c.verdict = std::string(to_string(run.verdict.kind));
    c.final_span = run.verdict.evidence.final_span;
    c.t_decided = run.verdict.t_decided;
    json s;
    s["model"] = model_json(p);
    s["numerics"] = numerics_json(run.result.numerics);
    s["verdict"] = verdict_json(run.verdict);
    s["tolerances"] = tolerances_json(run.tolerances);
    s["thresholds"] = {{"lambda", c.lambda}};
    s["diagnostics"] = diagnostics_json(run.result);
    write_simulation_csv(dir, run.result, false);
    write_atomic(dir / "summary.json", format_json(s));
  } catch (const Error& e) {
    c.verdict = "Error";
    c.error = std::string(to_string(e.kind())) + ": " + e.what();
    try {
      write_atomic(dir / "error.json", error_json(e.kind(), e.what()));
    } catch (const Error&) {
      // recorded in phase_diagram.csv regardless
    }
  }
  return c;
}

int run_sweep(const RunConfig& cfg, const fs::path& out, const RunOptions& opts) {
  const auto& axes = cfg.sweep.axes;
  const std::size_t n0 = axes[0].count;
  const std::size_t n1 = axes.size() == 2 ? axes[1].count : 1;
  const std::size_t total = n0 * n1;
  std::size_t workers = opts.workers.value_or(cfg.sweep.workers);
  if (workers == 0) {
    if (opts.seedless) {
      throw ValidationError("--seedless: workers = 0 depends on the host; give an explicit count");
    }
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  workers = std::min(workers, total);

  std::vector<ModelParams> params(total, cfg.model);
  for (std::size_t i = 0; i < n0; ++i) {
    for (std::size_t j = 0; j < n1; ++j) {
      set_param(params[i * n1 + j], axes[0].param, axes[0].value(i));
      if (n1 > 1) set_param(params[i * n1 + j], axes[1].param, axes[1].value(j));
    }
  }
  say(opts, "sweep: " + std::to_string(total) + " cells on " + std::to_string(workers) + " workers");

  // Each cell writes only into its own directory; results are merged by index.
  std::vector<CellResult> results(total);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      char name[32];
      std::snprintf(name, sizeof name, "%04zu", k);
      results[k] = run_cell(cfg, params[k], out / "cells" / name);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::string csv = "cell,i,j,a,b,c,D,mu,h0,lambda,verdict,final_span,t_decided\n";
  json cells = json::array();
  std::size_t errors = 0;
  for (std::size_t k = 0; k < total; ++k) {
    const auto& c = results[k];
    csv += std::to_string(k) + "," + std::to_string(k / n1) + "," + std::to_string(k % n1);
    for (double v : {c.p.a, c.p.b, c.p.c, c.p.D, c.p.mu, c.p.h0, c.lambda}) csv += "," + format_number(v);
    csv += "," + c.verdict + "," + format_number(c.final_span) + "," + format_number(c.t_decided) + "\n";
    if (!c.error.empty()) {
      ++errors;
      cells.push_back({{"cell", k}, {"error", c.error}});
    }
  }
  json ax = json::array();
  for (const auto& a : axes) {
    ax.push_back({{"param", a.param}, {"min", a.min}, {"max", a.max}, {"count", a.count}});
  }
  json s;
  s["mode"] = "sweep";
  s["model"] = model_json(cfg.model);
  s["sweep"] = {{"axes", ax}, {"cells", total}};
  s["cell_errors"] = cells;
  write_atomic(out / "phase_diagram.csv", csv);
  write_atomic(out / "summary.json", format_json(s));
  if (cfg.outputs.plots) emit_plots(out);
  say(opts, "sweep done: " + std::to_string(errors) + " cell errors");
  return 0;
}

int run_steady(const RunConfig& cfg, const fs::path& out, const RunOptions& opts) {
  const auto& q = cfg.steady.problem;
  const SteadyProfile prof = solve_bvp(q, cfg.steady.n, cfg.steady.tol);
  std::string csv = "x,w\n";
  for (std::size_t i = 0; i < prof.x_nodes.size(); ++i) {
    csv += format_number(prof.x_nodes[i]) + "," + format_number(prof.values[i]) + "\n";
  }
  json s;
  s["mode"] = "steady";
  s["problem"] = {{"d", q.d}, {"beta", q.beta}, {"theta", q.theta}, {"l", q.l}, {"k", q.k}};
  s["existence_threshold"] = existence_threshold(q.d, q.beta);
  s["subcritical"] = prof.subcritical;
  s["eigen_margin"] = prof.eigen_margin;
  s["center_value"] = prof.center_value();
  s["residual_norm"] = prof.residual_norm;
  s["iterations"] = prof.iterations;
  write_atomic(out / "steady.csv", csv);
  write_atomic(out / "summary.json", format_json(s));
  say(opts, prof.subcritical ? "no positive solution (subcritical half-length)"
                             : "center value " + format_number(prof.center_value()));
  return 0;
}

int run_limits(const RunConfig& cfg, const fs::path& out, const RunOptions& opts) {
  const ModelParams& p = cfg.model;
  const HuntingRegime regime = hunting_regime(p);
  json s;
  s["mode"] = "limits";
  s["model"] = model_json(p);
  s["regime"] = std::string(to_string(regime));
  s["thresholds"] = {{"lambda", lambda_threshold(p)}};
  say(opts, "regime: " + std::string(to_string(regime)) + ", critical span " +
                format_number(lambda_threshold(p)));
  if (regime == HuntingRegime::Uncovered) {
    s["note"] = "no long-time limit is known for b > c with a c >= 1";
    write_atomic(out / "summary.json", format_json(s));
    say(opts, "no closed-form spreading limits in this regime");
    return 0;
  }
  const auto [u_star, v_star] = spreading_limits(p);
  s["targets"] = {{"u", u_star}, {"v", v_star}};
  say(opts, "spreading limits: u* = " + format_number(u_star) + ", v* = " + format_number(v_star));
  if (regime == HuntingRegime::Weak) {
    const LimitIterates it = limit_iteration(p, cfg.limits.rounds);
    std::string csv = "round,under_u,over_u,under_v,over_v\n";
    json rows = json::array();
    say(opts, "round  under_u                  over_u                   under_v                  over_v");
    for (std::size_t i = 0; i < it.rounds(); ++i) {
      csv += std::to_string(i + 1) + "," + format_number(it.under_u[i]) + "," +
             format_number(it.over_u[i]) + "," + format_number(it.under_v[i]) + "," +
             format_number(it.over_v[i]) + "\n";
      rows.push_back({it.under_u[i], it.over_u[i], it.under_v[i], it.over_v[i]});
      char line[160];
      std::snprintf(line, sizeof line, "%5zu  %-23.17g  %-23.17g  %-23.17g  %.17g", i + 1,
                    it.under_u[i], it.over_u[i], it.under_v[i], it.over_v[i]);
      say(opts, line);
    }
    s["iteration"] = {{"columns", {"under_u", "over_u", "under_v", "over_v"}}, {"rows", rows}};
    write_atomic(out / "limits.csv", csv);
  }
  write_atomic(out / "summary.json", format_json(s));
  return 0;
}

}  // namespace

RunStatus run(const RunConfig& cfg, const RunOptions& opts) {
  RunStatus status;
  status.out_dir = opts.out.value_or(fs::path(cfg.outputs.dir));
  auto fail = [&](ErrorKind kind, const std::string& msg) {
    status.exit_code = exit_code_for(kind);
    status.error = error_json(kind, msg);
    try {
      write_atomic(status.out_dir / "error.json", status.error);
    } catch (const Error&) {
      // the JSON still reaches the caller
    }
  };
  try {
    cfg.validate();
    std::error_code ec;
    fs::remove(status.out_dir / "error.json", ec);
    write_atomic(status.out_dir / "config.json", dump_config(cfg));
    switch (cfg.mode) {
      case RunMode::Simulate:
        status.exit_code = run_simulate(cfg, status.out_dir, opts);
        break;
      case RunMode::Bisect:
        status.exit_code = run_bisect(cfg, status.out_dir, opts);
        break;
      case RunMode::Sweep:
        status.exit_code = run_sweep(cfg, status.out_dir, opts);
        break;
      case RunMode::Steady:
        status.exit_code = run_steady(cfg, status.out_dir, opts);
        break;
      case RunMode::Limits:
        status.exit_code = run_limits(cfg, status.out_dir, opts);
        break;
    }
  } catch (const Error& e) {
    fail(e.kind(), e.what());
  } catch (const std::exception& e) {
    fail(ErrorKind::Solver, std::string("unexpected failure: ") + e.what());
  }
  return status;
}

}  // namespace freefront
