#include <benchmark/benchmark.h>

#include <cmath>

#include "aniso/nonlocal.hpp"

using namespace aniso;

namespace {

GridFunction wave(const Grid& g) {
  return GridFunction::sample(g, [](const Point& x) { return std::sin(3.0 * x[0]) * std::cos(2.0 * x[1]); });
}

void BM_Energy(benchmark::State& state) {
  const Anisotropy a(state.range(1) / 10.0, {0.4, 0.9});
  const Grid g(a, static_cast<std::size_t>(state.range(0)), 1.0);
  const auto fam = KernelFamily::axes(a);
  const auto u = wave(g);
  const auto mask = g.full_mask();
  for (auto _ : state) benchmark::DoNotOptimize(energy(u, u, fam, mask));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_Energy)->ArgsProduct({{17, 33, 65}, {15, 20, 30}});

void BM_ApplyOperator(benchmark::State& state) {
  const Anisotropy a(2.0, {0.6, 0.6});
  const Grid g(a, static_cast<std::size_t>(state.range(0)), 1.0);
  const auto fam = KernelFamily::axes(a);
  const auto u = wave(g);
  const std::size_t x = g.center_node();
  for (auto _ : state) benchmark::DoNotOptimize(apply_operator(u, fam, x));
}
BENCHMARK(BM_ApplyOperator)->Arg(33)->Arg(129);

}  // namespace
