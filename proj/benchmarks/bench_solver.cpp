#include <benchmark/benchmark.h>

#include "aniso/solver.hpp"

using namespace aniso;

namespace {

void BM_TorsionSolve(benchmark::State& state) {
  const Anisotropy a(state.range(1) / 10.0, {0.6, 0.9}, 0.4);
  const Grid g(a, static_cast<std::size_t>(state.range(0)), 1.0);
  const auto f = GridFunction::sample(g, [](const Point&) { return 1.0; });
  const auto prob = make_problem(KernelFamily::axes(a), f, GridFunction(g));
  int iterations = 0;
  for (auto _ : state) {
    const auto r = solve(prob);
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.u.values().data());
  }
  state.counters["iterations"] = iterations;
}
BENCHMARK(BM_TorsionSolve)->ArgsProduct({{17, 33}, {15, 20, 30}})->Unit(benchmark::kMillisecond);

void BM_SolveByMethod(benchmark::State& state) {
  const Anisotropy a(2.0, {0.5, 0.5});
  const Grid g(a, 17, 1.0);
  const auto f = GridFunction::sample(g, [](const Point&) { return 1.0; });
  auto prob = make_problem(KernelFamily::axes(a), f, GridFunction(g));
  prob.method = static_cast<SolverMethod>(state.range(0));
  prob.max_iter = 20000;
  state.SetLabel(to_string(prob.method));
  for (auto _ : state) benchmark::DoNotOptimize(solve(prob).residual);
}
BENCHMARK(BM_SolveByMethod)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace
