#include <gtest/gtest.h>

#include <cmath>

#include "freefront/analysis.hpp"
#include "freefront/errors.hpp"
#include "freefront/numerics.hpp"

namespace ff = freefront;
using ff::numerics::kPi;

namespace {

ff::ModelParams preset(double mu, double h0, double b = 3.0, double c = 0.5) {
  ff::ModelParams p;
  p.a = 1;
  p.b = b;
  p.c = c;
  p.mu = mu;
  p.h0 = h0;
  return p;
}

ff::InitialData cosine_data(const ff::ModelParams& p, double amp = 1.0) {
  return {ff::cosine_bump(amp, p.h0), ff::constant_profile(p.b)};
}

ff::NumericsConfig coarse(double t_max) {
  ff::NumericsConfig c;
  c.t_max = t_max;
  c.n_y = 64;
  return c;
}

// Hand-built record series for the classifier.
ff::SimulationResult synthetic(const ff::ModelParams& p, double span, double sup_u, double speed,
                               double probe_u, double t_end = 50.0) {
  ff::SimulationResult r;
  r.params = p;
  r.numerics = coarse(t_end).resolved(p);
  for (int i = 0; i <= 100; ++i) {
    ff::FrontRecord rec;
    rec.t = t_end * i / 100.0;
    rec.h = 0.5 * span;
    rec.g = -0.5 * span;
    rec.h_dot = 0.5 * speed;
    rec.g_dot = -0.5 * speed;
    rec.sup_u = sup_u;
    rec.probe_u_min = probe_u;
    r.fronts.push_back(rec);
  }
  return r;
}

ff::Supersolution barrier(const ff::ModelParams& p, double delta = 0.1) {
  const auto d = cosine_data(p);
  return ff::build_supersolution(p, ff::sample_profile(d.u0, -p.h0, p.h0, 401),
                                 ff::sample_profile(d.v0, -20, 20, 2001), delta);
}

}  // namespace

TEST(Classify, VanishingRule) {
  const auto p = preset(1.0, 0.3);
  const auto r = synthetic(p, 0.8 * kPi / 2, 1e-6, 0.0, 1e-6);
  const auto tols = ff::ClassifyTolerances::defaults(p, r.numerics);
  const auto v = ff::classify(r, p, tols);
  EXPECT_EQ(v.kind, ff::VerdictKind::Vanishing);
  EXPECT_NEAR(v.evidence.lambda, kPi / 2, 1e-15);
  EXPECT_EQ(v.t_decided, 0.0);
}

TEST(Classify, SpreadingRule) {
  const auto p = preset(1.0, 0.3);
  const auto r = synthetic(p, 1.1 * kPi / 2 + 0.1, 2.6, 0.1, 2.6);
  const auto v = ff::classify(r, p, ff::ClassifyTolerances::defaults(p, r.numerics));
  EXPECT_EQ(v.kind, ff::VerdictKind::Spreading);
}

TEST(Classify, NeverVanishingBeyondCriticalSpan) {
  const auto p = preset(1.0, 0.3);
  // Span above lambda + span_tol with a dead predator: not Vanishing, not Spreading.
  const auto r = synthetic(p, kPi / 2 + 0.2, 1e-9, 0.0, 1e-9);
  const auto v = ff::classify(r, p, ff::ClassifyTolerances::defaults(p, r.numerics));
  EXPECT_EQ(v.kind, ff::VerdictKind::Undecided);
  EXPECT_NE(v.diagnostic.find("span - lambda"), std::string::npos);
}

TEST(Classify, UndecidedWhenFrontsStillMove) {
  const auto p = preset(1.0, 0.3);
  const auto r = synthetic(p, 1.0, 1e-6, 1e-3, 1e-6);
  const auto v = ff::classify(r, p, ff::ClassifyTolerances::defaults(p, r.numerics));
  EXPECT_EQ(v.kind, ff::VerdictKind::Undecided);
}

TEST(Classify, Tolerances) {
  const auto p = preset(1.0, 0.3);
  const auto cfg = coarse(50).resolved(p);
  const auto t = ff::ClassifyTolerances::defaults(p, cfg);
  EXPECT_DOUBLE_EQ(t.u_tol, 1e-4 * 4.0 / 1.5);
  EXPECT_DOUBLE_EQ(t.span_tol, 0.04);
  EXPECT_DOUBLE_EQ(t.v_tol, 1e-5 * 0.3 / 50);
  EXPECT_DOUBLE_EQ(t.u_floor, 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(t.trailing_time, 5.0);
}

TEST(Classify, GuaranteedSpreadingWhenHabitatExceedsHalfLambda) {
  const auto p = preset(1.0, 1.1 * kPi / 4);  // 2 h0 = 1.1 lambda
  auto cfg = coarse(40);
  cfg.stop_when_decided = true;
  const auto run = ff::simulate_and_classify(p, cosine_data(p), cfg);
  EXPECT_EQ(run.verdict.kind, ff::VerdictKind::Spreading);
  EXPECT_TRUE(run.result.diagnostics.stopped_early);
}

TEST(Classify, DeterministicVerdict) {
  const auto p = preset(0.1, 0.3);
  const auto run = ff::simulate_and_classify(p, cosine_data(p), coarse(30));
  const auto again = ff::classify(run.result, p, run.tolerances);
  EXPECT_EQ(again.kind, run.verdict.kind);
  EXPECT_EQ(again.t_decided, run.verdict.t_decided);
  EXPECT_EQ(again.diagnostic, run.verdict.diagnostic);
}

TEST(Supersolution, Construction) {
  const auto p = preset(1.0, 0.3);
  const auto s = barrier(p);
  EXPECT_EQ(s.v_bar(0.0), 3.0);
  EXPECT_NEAR(s.v_bar(100.0), 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(s.eta(0.0), 0.33);
  EXPECT_DOUBLE_EQ(s.theta_len(), 0.15 + kPi / 8);
  EXPECT_EQ(s.M(), 1.0);
  const double kappa = std::pow(kPi / (2 * s.theta_len()), 2);
  EXPECT_LT(1.0 + p.a * p.b - kappa, 0.0);
  double prev = s.eta(0.0);
  for (double t = 0.05; t < 10.0; t += 0.05) {
    const double e = s.eta(t);
    EXPECT_GE(e, prev - 1e-15);
    EXPECT_LE(e, s.theta_len());
    if (t < 1.0) {
      EXPECT_LT(e, s.theta_len());
    }
    prev = e;
  }
  // mu0 from the definition and the tabulated integral.
  EXPECT_NEAR(s.mu0(), (std::pow(s.theta_len(), 2) - 0.33 * 0.33) / (kPi * s.total_f_integral()), 1e-15);
  EXPECT_GT(s.mu0(), 0.0);
}

TEST(Supersolution, IntegralMatchesDirectQuadrature) {
  const auto p = preset(1.0, 0.3);
  const auto s = barrier(p);
  const double direct = ff::numerics::adaptive_simpson([&](double t) { return s.f(t); }, 0.0, 3.0, 1e-12);
  EXPECT_NEAR(s.f_integral(3.0), direct, 1e-9);
  // Past the truncation point the remaining mass is negligible.
  EXPECT_GT(s.tail_start(), 0.0);
  EXPECT_NEAR(s.f_integral(s.tail_start()), s.total_f_integral(), 1e-8 * s.total_f_integral());
}

TEST(Supersolution, PdeDefectNonnegative) {
  const auto p = preset(0.5, 0.3);
  const auto s = barrier(p);
  const double dt = 1e-5;
  for (double t : {0.01, 0.1, 0.5, 1.0, 2.0}) {
    const double e = s.eta(t);
    for (double frac : {-0.9, -0.5, 0.0, 0.3, 0.8}) {
      const double x = frac * e;
      const double ubar = s.barrier(t, x);
      const double ut = (s.barrier(t + dt, x) - s.barrier(t - dt, x)) / (2 * dt);
      const double uxx = -std::pow(kPi / (2 * e), 2) * ubar;
      const double defect = ut - uxx - ubar * (1.0 - ubar + p.a * s.v_bar(t));
      EXPECT_GE(defect, -1e-6) << "t=" << t << " x=" << x;
    }
  }
}

TEST(Supersolution, Errors) {
  EXPECT_THROW(barrier(preset(1.0, 0.8)), ff::DomainError);
  EXPECT_THROW(barrier(preset(1.0, 0.3), 1.0), ff::DomainError);  // theta <= h0 (1 + delta)
  const auto p = preset(1.0, 0.3);
  // Positive at the endpoints, and the barrier support barely wider than h0:
  // dominating needs M ~ 1e14 > 2^40.
  ff::SampledProfile flat{-0.3, 0.3, std::vector<double>(101, 1.0)};
  ff::SampledProfile v0{-20, 20, std::vector<double>(101, 3.0)};
  EXPECT_NO_THROW(ff::build_supersolution(p, flat, v0, 0.1));
  EXPECT_THROW(ff::build_supersolution(p, flat, v0, 1e-14), ff::ConstructionError);
}

TEST(Domination, HoldsBelowMu0AndFailsForCorruptedRun) {
  const auto base = preset(1.0, 0.3);
  const auto s = barrier(base);
  auto p = base;
  p.mu = 0.5 * s.mu0();
  const auto run = ff::simulate(p, cosine_data(p), coarse(20));
  const auto rep = ff::check_domination(run, s, 2 * run.line_dx(), 1e-6);
  EXPECT_TRUE(rep.precondition_met);
  EXPECT_TRUE(rep.passed);
  EXPECT_GE(rep.worst_u_margin, 0.0);
  EXPECT_LE(run.fronts.back().h, s.eta(run.t_end()) + 2 * run.line_dx());
  EXPECT_LT(run.fronts.back().h, s.theta_len());

  p.mu = 10.0 * s.mu0();
  const auto bad = ff::simulate(p, cosine_data(p), coarse(3));
  const auto neg = ff::check_domination(bad, s, 2 * bad.line_dx(), 1e-6);
  EXPECT_FALSE(neg.precondition_met);
  EXPECT_FALSE(neg.passed);
  EXPECT_LT(neg.worst_front_margin, 0.0);
}

TEST(MuStar, BisectionContract) {
  const auto p = preset(1.0, 0.3);
  auto cfg = coarse(20);
  cfg.stop_when_decided = true;
  const double lo = 0.25;
  const double hi = 8.0;
  const auto br = ff::estimate_mu_star(p, cosine_data(p), cfg, {lo, hi}, 4);
  EXPECT_TRUE(br.consistent());
  EXPECT_LE(br.hi - br.lo, (hi - lo) / 16 + 1e-12);
  EXPECT_EQ(br.probes.size(), 6u);
  EXPECT_THROW(ff::estimate_mu_star(p, cosine_data(p), cfg, {20.0, 40.0}, 2), ff::BracketError);
  EXPECT_THROW(ff::estimate_mu_star(p, cosine_data(p), cfg, {2.0, 1.0}, 2), ff::BracketError);
  EXPECT_THROW(ff::estimate_mu_star(preset(1, 0.8), cosine_data(preset(1, 0.8)), cfg, {0.1, 1.0}, 2),
               ff::DomainError);
}

TEST(MuStar, LargerInitialDataDoNotRaiseThreshold) {
  const auto p = preset(1.0, 0.3);
  auto cfg = coarse(20);
  cfg.stop_when_decided = true;
  const auto small = ff::estimate_mu_star(p, cosine_data(p, 0.5), cfg, {0.25, 8.0}, 6);
  const auto large = ff::estimate_mu_star(p, cosine_data(p, 1.0), cfg, {0.25, 8.0}, 6);
  EXPECT_LE(large.hi, small.hi + (8.0 - 0.25) / 64);
}

TEST(Limits, TargetsByRegime) {
  // Synthetic final state sitting exactly on the weak-regime limits (2, 1).
  const auto p = preset(1.0, 0.3, 2.0, 0.5);
  ff::SimulationResult r;
  r.params = p;
  r.numerics = coarse(10).resolved(p);
  r.final_state.front = ff::FrontState{-5, 5, 0, 0};
  r.final_state.w.assign(r.numerics.n_y + 2, 2.0);
  r.final_state.w.front() = r.final_state.w.back() = 0.0;
  r.final_state.z.assign(r.numerics.n_x, 1.0);
  ff::Verdict v;
  v.kind = ff::VerdictKind::Spreading;
  auto rep = ff::verify_limits(r, p, v, 1.0, 1e-3);
  ASSERT_EQ(rep.checks.size(), 2u);
  EXPECT_EQ(rep.checks[0].target, 2.0);
  EXPECT_EQ(rep.checks[1].target, 1.0);
  EXPECT_TRUE(rep.passed);

  const auto strong = preset(1.0, 0.3, 1.0, 2.0);
  rep = ff::verify_limits(r, strong, v, 1.0, 1e-3);
  EXPECT_EQ(rep.checks[0].target, 1.0);
  EXPECT_EQ(rep.checks[1].target, 0.0);
  EXPECT_FALSE(rep.passed);

  v.kind = ff::VerdictKind::Vanishing;
  rep = ff::verify_limits(r, p, v, 1.0, 1e-3);
  EXPECT_EQ(rep.checks[1].target, p.b);

  v.kind = ff::VerdictKind::Undecided;
  EXPECT_THROW(ff::verify_limits(r, p, v, 1.0, 1e-3), ff::DomainError);
}
