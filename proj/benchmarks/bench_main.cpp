#include <benchmark/benchmark.h>

#include <vector>

#include "freefront/grid.hpp"
#include "freefront/numerics.hpp"
#include "freefront/solver.hpp"

namespace ff = freefront;

static void BM_Tridiagonal(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> lo(n, -1.0), di(n, 4.0), up(n, -1.0), rhs(n, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ff::numerics::solve_tridiagonal(lo, di, up, rhs));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Tridiagonal)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oN);

static void BM_PreyToStraight(benchmark::State& state) {
  const ff::LineGrid line(20.0, 4001);
  const ff::StraightGrid straight(static_cast<std::size_t>(state.range(0)));
  std::vector<double> z(line.size(), 3.0);
  const ff::FrontState front{-2.3, 2.1, 0.0, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ff::interp_prey_to_straight(z, front, straight, line));
  }
}
BENCHMARK(BM_PreyToStraight)->Arg(128)->Arg(512);

static void BM_Step(benchmark::State& state) {
  ff::ModelParams p;
  p.h0 = 0.8;
  p.mu = 0.5;
  ff::NumericsConfig cfg;
  cfg.n_y = static_cast<std::size_t>(state.range(0));
  cfg = cfg.resolved(p);
  const ff::InitialData init{ff::cosine_bump(1.0, p.h0), ff::constant_profile(p.b)};
  const auto s0 = ff::initial_state(p, init, cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ff::step(s0, p, cfg));
  }
}
BENCHMARK(BM_Step)->Arg(128)->Arg(512);
BENCHMARK_MAIN();
