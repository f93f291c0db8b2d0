#include <cmath>
#include <random>

#include <fmt/format.h>

#include "aniso/kernel.hpp"
#include "aniso/nonlocal.hpp"

namespace aniso {

namespace {

// Same double sum with each summand written from the other node's side.
double exchanged_energy(const GridFunction& u, const GridFunction& v, const KernelFamily& fam,
                        const std::vector<char>& mask, double* magnitude) {
  const Grid& g = u.grid();
  const double p = fam.anisotropy().p();
  const long N = static_cast<long>(g.nodes_per_axis());
  double acc = 0.0, mag = 0.0;
  for (std::size_t y = 0; y < g.size(); ++y) {
    if (!mask[y]) continue;
    const Point py = g.point(y);
    for (int k = 0; k < g.dim(); ++k) {
      const long i = g.axis_index(y, k);
      const long s = static_cast<long>(g.stride(k));
      for (long j = N - 1; j >= 0; --j) {
        if (j == i) continue;
        const std::size_t x = static_cast<std::size_t>(static_cast<long>(y) + (j - i) * s);
        if (!mask[x]) continue;
        Point px = py;
        px[k] = g.coord(k, j);
        const double t = cell_weight(k, j - i, g.spacing(k), fam.anisotropy()) * fam.coefficient(py, px) *
                         jp(u[y] - u[x], p) * (v[y] - v[x]);
        acc += t;
        mag += std::abs(t);
      }
    }
  }
  *magnitude = mag * g.cell_volume();
  return acc * g.cell_volume();
}

}  // namespace

AdmissibilityReport admissibility_report(const KernelFamily& fam, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("admissibility_report: samples must be >= 1");
  const Anisotropy& a = fam.anisotropy();
  const int n = a.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  AdmissibilityReport rep;
  rep.samples = static_cast<std::size_t>(samples);
  auto witness = [&](std::string s) {
    if (rep.witnesses.size() < 8) rep.witnesses.push_back(std::move(s));
  };

  for (int t = 0; t < samples; ++t) {
    Point x0(n);
    for (auto& v : x0) v = -2.0 + 4.0 * unit(rng);
    const double r = std::exp(std::log(1e-2) + unit(rng) * (std::log(3.0) - std::log(1e-2)));
    const int k = static_cast<int>(unit(rng) * n) % n;
    const auto est = family_tail_slab(fam, x0, r, k);
    const double tail = est.value + est.error;
    const double ratio = tail / ((1.0 - a.order(k)) * std::pow(r, -a.p() * a.s_max()));
    rep.worst_tail_ratio = std::max(rep.worst_tail_ratio, ratio);
    if (ratio > fam.tail_constant() * (1.0 + 1e-8)) {
      rep.tail_ok = false;
      witness(fmt::format("tail: r={:.6g} axis={} ratio {:.12g} > {:.12g}", r, k, ratio, fam.tail_constant()));
    }
  }

  const std::size_t nodes = n == 1 ? 33 : n == 2 ? 17 : 9;
  Grid grid(a, nodes, 2.0);
  const auto axes = KernelFamily::axes(a);
  const double lam = fam.comparability_constant();
  for (int t = 0; t < samples; ++t) {
    GridFunction u(grid), v(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      u[i] = 2.0 * unit(rng) - 1.0;
      v[i] = 2.0 * unit(rng) - 1.0;
    }
    Point x0(n);
    for (int k = 0; k < n; ++k) x0[k] = grid.half_extent(k) * (2.0 * unit(rng) - 1.0);
    const double rho = 3.0 * std::max(unit(rng), 1e-3);
    const auto mask = grid.mask(Rect(x0, rho, a));
    const double ef = energy(u, u, fam, mask);
    const double ea = energy(u, u, axes, mask);
    if (ea > 0.0) {
      const double c = std::max(ef / ea, ea / ef);
      rep.worst_comparability = std::max(rep.worst_comparability, c);
      if (c > lam * (1.0 + 1e-12)) {
        rep.comparable = false;
        witness(fmt::format("comparability: rho={:.6g} ratio {:.12g} > {:.12g}", rho, c, lam));
      }
    }
    double mag = 0.0;
    const double e1 = energy(u, v, fam, mask);
    const double e2 = exchanged_energy(u, v, fam, mask, &mag);
    if (mag > 0.0) {
      const double err = std::abs(e1 - e2) / mag;
      rep.worst_symmetry_error = std::max(rep.worst_symmetry_error, err);
      if (err > 1e-12) {
        rep.symmetric = false;
        witness(fmt::format("symmetry: rho={:.6g} relative error {:.3e}", rho, err));
      }
    }
  }
  return rep;
}

}  // namespace aniso
