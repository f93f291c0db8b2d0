#include <benchmark/benchmark.h>

#include <cmath>

#include "aniso/maximal.hpp"
#include "aniso/verify/algebraic.hpp"

using namespace aniso;

namespace {

void BM_MaximalAll(benchmark::State& state) {
  const Anisotropy a(2.0, {0.4, 0.95});
  const Grid g(a, static_cast<std::size_t>(state.range(0)), 1.0);
  const auto u = GridFunction::sample(g, [](const Point& x) { return std::exp(-8.0 * (x[0] * x[0] + x[1] * x[1])); });
  for (auto _ : state) benchmark::DoNotOptimize(maximal_all(u).Md.values().data());
}
BENCHMARK(BM_MaximalAll)->Arg(17)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);

void BM_GoodLambda(benchmark::State& state) {
  const Anisotropy a(2.0, {0.5, 0.8});
  const Grid g(a, 33, 1.0);
  const auto u = GridFunction::sample(g, [](const Point& x) { return std::exp(-8.0 * (x[0] * x[0] + x[1] * x[1])); });
  const auto m = maximal_all(u);
  for (auto _ : state) benchmark::DoNotOptimize(good_lambda(m, 0.1, 0.5).lhs);
}
BENCHMARK(BM_GoodLambda);

void BM_AlgebraicLemma(benchmark::State& state) {
  const auto l = static_cast<Lemma>(state.range(0));
  state.SetLabel(to_string(l));
  for (auto _ : state) benchmark::DoNotOptimize(check_algebraic(l, 10000, 1).violations);
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_AlgebraicLemma)->DenseRange(0, 5);

}  // namespace
