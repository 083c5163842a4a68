#include <benchmark/benchmark.h>

#include "ma/discretization.hpp"
#include "ma/linearization.hpp"
#include "ma/solvers.hpp"

namespace {

void BM_ResidualHybrid(benchmark::State& state) {
  const auto problem = ma::get_problem("c2_2d");
  const auto grid = ma::make_grid(2, static_cast<int>(state.range(0)));
  const ma::SchemeOperator op(problem, grid, ma::SolverConfig{});
  const auto u = ma::sample(grid, *problem.exact);
  for (auto _ : state) benchmark::DoNotOptimize(op.residual(u));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}
BENCHMARK(BM_ResidualHybrid)->Arg(31)->Arg(63)->Arg(127);

void BM_JacobianHybrid(benchmark::State& state) {
  const auto problem = ma::get_problem("c2_2d");
  const auto grid = ma::make_grid(2, static_cast<int>(state.range(0)));
  const ma::SchemeOperator op(problem, grid, ma::SolverConfig{});
  const auto u = ma::sample(grid, *problem.exact);
  const auto r = op.residual(u);
  for (auto _ : state) benchmark::DoNotOptimize(op.jacobian(u, r));
}
BENCHMARK(BM_JacobianHybrid)->Arg(31)->Arg(63)->Arg(127);

void BM_NewtonC2(benchmark::State& state) {
  const auto problem = ma::get_problem("c2_2d");
  const auto grid = ma::make_grid(2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ma::newton_solve(problem, grid, ma::SolverConfig{}));
}
BENCHMARK(BM_NewtonC2)->Arg(31)->Arg(63)->Unit(benchmark::kMillisecond);

void BM_Convexify(benchmark::State& state) {
  const auto problem = ma::get_problem("c2_2d");
  const auto grid = ma::make_grid(2, static_cast<int>(state.range(0)));
  const auto dirs = ma::make_stencil(2, 2).directions;
  const auto u = ma::sample(grid, *problem.exact);
  for (auto _ : state) benchmark::DoNotOptimize(ma::convexify(u, dirs, problem.boundary()));
}
BENCHMARK(BM_Convexify)->Arg(31)->Arg(63);

}  // namespace

BENCHMARK_MAIN();
