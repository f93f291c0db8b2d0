#include "aniso/cutoff.hpp"

#include <cmath>
#include <stdexcept>

#include "aniso/nonlocal.hpp"
#include "aniso/parallel.hpp"

namespace aniso {

double cutoff_value(const Point& x0, double r, double lambda, const Anisotropy& a, const Point& y) {
  double v = 1.0;
  for (int k = 0; k < a.dim() && v > 0.0; ++k) {
    const double inner = std::pow(r, a.axis_exponent(k));
    const double outer = std::pow(lambda * r, a.axis_exponent(k));
    const double t = std::abs(y[k] - x0[k]);
    if (t >= outer) return 0.0;
    if (t > inner) v *= (outer - t) / (outer - inner);
  }
  return v;
}

CutOff make_cutoff(const Point& x0, double r, double lambda, const Grid& grid) {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("make_cutoff: r must lie in (0,1]");
  if (!(lambda > 1.0 && lambda <= 2.0)) throw std::invalid_argument("make_cutoff: lambda must lie in (1,2]");
  if (static_cast<int>(x0.size()) != grid.dim()) throw std::invalid_argument("make_cutoff: dimension mismatch");
  const Anisotropy& a = grid.anisotropy();
  auto values = GridFunction::sample(
      grid, [&](const Point& y) { return cutoff_value(x0, r, lambda, a, y); }, ExteriorRule::zero());
  return CutOff{x0, r, lambda, std::move(values)};
}

double cutoff_constant(const KernelFamily& fam) {
  return 4.0 * fam.coefficient_upper() / fam.anisotropy().p();
}

namespace {

double geometric_factor(const CutOff& tau, const Anisotropy& a) {
  double s = 0.0;
  for (int k = 0; k < a.dim(); ++k)
    s += std::pow(std::pow(tau.lambda, a.axis_exponent(k)) - 1.0, -a.p() * a.order(k));
  return s * std::pow(tau.r, -a.p() * a.s_max());
}

// int |tau(y) - tau(x)|^p mu(x, dy) at node f; tau vanishes beyond the box.
double node_integral(const GridFunction& t, const KernelFamily& fam, const AxisWeights& W, std::size_t f) {
  const Grid& g = t.grid();
  const double p = fam.anisotropy().p();
  const long N = static_cast<long>(g.nodes_per_axis());
  Point x = g.point(f), y = x;
  double acc = 0.0;
  for (int k = 0; k < g.dim(); ++k) {
    const long i = g.axis_index(f, k);
    const long s = static_cast<long>(g.stride(k));
    for (long j = 0; j < N; ++j) {
      if (j == i) continue;
      const double diff = std::abs(t[static_cast<std::size_t>(static_cast<long>(f) + (j - i) * s)] - t[f]);
      if (diff == 0.0) continue;
      y[k] = g.coord(k, j);
      acc += W.w[k][std::labs(j - i)] * fam.coefficient(x, y) * std::pow(diff, p);
    }
    if (t[f] != 0.0) {
      const double tp = std::pow(std::abs(t[f]), p);
      y[k] = g.coord(k, N);
      const double cr = fam.coefficient(x, y);
      y[k] = g.coord(k, -1);
      const double cl = fam.coefficient(x, y);
      acc += tp * (W.tail[k][N - i] * cr + W.tail[k][i + 1] * cl);
    }
    y[k] = x[k];
  }
  return acc;
}

}  // namespace

CutoffBound cutoff_energy_bound(const CutOff& tau, const KernelFamily& fam) {
  require_family_matches(tau.values.grid(), fam, "cutoff_energy_bound");
  const Grid& g = tau.values.grid();
  AxisWeights W(g, fam.anisotropy());
  std::vector<double> vals(g.size());
  parallel::for_chunks(g.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t f = b; f < e; ++f) vals[f] = node_integral(tau.values, fam, W, f);
  });
  CutoffBound out;
  for (double v : vals) out.lhs = std::max(out.lhs, v);
  out.constant = cutoff_constant(fam);
  out.geometric = geometric_factor(tau, fam.anisotropy());
  out.rhs = out.constant * out.geometric;
  return out;
}

CutoffBound cutoff_weighted_bound(const CutOff& tau, const GridFunction& u, const KernelFamily& fam) {
  require_same_grid(tau.values, u, "cutoff_weighted_bound");
  CutoffBound base = cutoff_energy_bound(tau, fam);
  const Grid& g = u.grid();
  AxisWeights W(g, fam.anisotropy());
  const double p = fam.anisotropy().p();
  double sup_u = 0.0, lhs = 0.0;
  for (std::size_t f = 0; f < g.size(); ++f) {
    sup_u = std::max(sup_u, std::pow(std::abs(u[f]), p));
    lhs = std::max(lhs, std::pow(std::abs(u[f]), p) * node_integral(tau.values, fam, W, f));
  }
  base.lhs = lhs;
  base.rhs *= sup_u;
  return base;
}

}  // namespace aniso
