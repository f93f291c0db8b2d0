#include "aniso/verify/functional.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "aniso/cutoff.hpp"
#include "aniso/nonlocal.hpp"

namespace aniso {

FunctionalInequality parse_functional(const std::string& name) {
  if (name == "sobolev") return FunctionalInequality::Sobolev;
  if (name == "sobolev-local") return FunctionalInequality::SobolevLocal;
  if (name == "poincare") return FunctionalInequality::Poincare;
  throw std::invalid_argument("unknown functional inequality '" + name +
                              "' (expected sobolev, sobolev-local or poincare)");
}

std::string to_string(FunctionalInequality w) {
  switch (w) {
    case FunctionalInequality::Sobolev: return "sobolev";
    case FunctionalInequality::SobolevLocal: return "sobolev-local";
    case FunctionalInequality::Poincare: return "poincare";
  }
  return "?";
}

double discrete_lq_power(const GridFunction& u, double q, const std::vector<char>& mask) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (mask.empty() || mask[i]) s += std::pow(std::abs(u[i]), q);
  return s * u.grid().cell_volume();
}

namespace {

void require_inside_box(const Rect& m, const Grid& g, const char* what) {
  for (int k = 0; k < g.dim(); ++k)
    if (std::abs(m.center()[k]) + m.half_width(k) > g.half_extent(k) * (1.0 + kGeomSlack))
      throw std::invalid_argument(fmt::format("{}: rectangle of radius {} leaves the grid box", what, m.radius()));
}

double geometric_sum(double lambda, const Anisotropy& a) {
  double s = 0.0;
  for (int k = 0; k < a.dim(); ++k) s += std::pow(std::pow(lambda, a.axis_exponent(k)) - 1.0, -a.order(k) * a.p());
  return s;
}

}  // namespace

FunctionalSides functional_sides(FunctionalInequality which, const GridFunction& u, const KernelFamily& fam,
                                 const FunctionalOptions& opts) {
  const Grid& g = u.grid();
  require_family_matches(g, fam, "functional_sides");
  const Anisotropy& a = g.anisotropy();
  const double p = a.p();
  const Point x0 = opts.x0.empty() ? Point(static_cast<std::size_t>(g.dim()), 0.0) : opts.x0;
  if (!(opts.r > 0.0)) throw std::invalid_argument("functional_sides: r must be positive");
  FunctionalSides out;
  switch (which) {
    case FunctionalInequality::Sobolev: {
      const double ps = a.sobolev_exponent();
      if (u.rule().far_value() != 0.0) throw std::invalid_argument("functional_sides: Sobolev needs a zero exterior");
      out.lhs = std::pow(discrete_lq_power(u, ps), p / ps);
      out.rhs = weak_form(u, u, fam, g.full_mask());
      break;
    }
    case FunctionalInequality::SobolevLocal: {
      if (!(opts.lambda > 1.0)) throw std::invalid_argument("functional_sides: lambda must exceed 1");
      const double ps = a.sobolev_exponent();
      const Rect inner(x0, opts.r, a), outer(x0, opts.lambda * opts.r, a);
      require_inside_box(outer, g, "functional_sides");
      const auto mi = g.mask(inner), mo = g.mask(outer);
      out.lhs = std::pow(discrete_lq_power(u, ps, mi), p / ps);
      out.rhs = energy(u, u, fam, mo) +
                geometric_sum(opts.lambda, a) * std::pow(opts.r, -p * a.s_max()) * discrete_lq_power(u, p, mo);
      break;
    }
    case FunctionalInequality::Poincare: {
      const Rect m(x0, opts.r, a);
      require_inside_box(m, g, "functional_sides");
      const auto mask = g.mask(m);
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t i = 0; i < u.size(); ++i)
        if (mask[i]) sum += u[i], ++count;
      if (count == 0) throw std::invalid_argument("functional_sides: M_r holds no grid node");
      const double mean = sum / static_cast<double>(count);
      double dev = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i)
        if (mask[i]) dev += std::pow(std::abs(u[i] - mean), p);
      out.lhs = dev * g.cell_volume();
      out.rhs = std::pow(opts.r, p * a.s_max()) * energy(u, u, fam, mask);
      break;
    }
  }
  return out;
}

std::vector<GridFunction> functional_test_family(const Grid& grid, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = grid.dim();
  std::vector<GridFunction> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> c(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      c[k] = grid.half_extent(k) * (0.8 * unit(rng) - 0.4);
      w[k] = grid.half_extent(k) * (0.15 + 0.35 * unit(rng));
    }
    switch (i % 3) {
      case 0:
        out.push_back(GridFunction::sample(grid, [&](const Point& x) {
          double v = 1.0;
          for (int k = 0; k < n; ++k) {
            const double z = (x[k] - c[k]) / w[k];
            v *= z * z < 1.0 ? (1.0 - z * z) * (1.0 - z * z) : 0.0;
          }
          return v;
        }));
        break;
      case 1:
        out.push_back(GridFunction::sample(grid, [&](const Point& x) {
          double v = 1.0;
          for (int k = 0; k < n; ++k) v *= std::max(0.0, 1.0 - std::abs(x[k] - c[k]) / w[k]);
          return v;
        }));
        break;
      default: {
        const double outer = grid.box_radius() * (0.15 + 0.3 * unit(rng));
        out.push_back(make_cutoff(c, outer / 2.0, 2.0, grid).values);
        break;
      }
    }
  }
  return out;
}

InequalityReport estimate_functional_constant(FunctionalInequality which, const KernelFamily& fam,
                                              const std::vector<GridFunction>& family,
                                              const FunctionalOptions& opts) {
  InequalityReport r;
  r.name = to_string(which);
  r.worst_margin = 0.0;
  std::size_t used = 0, worst = 0;
  double wl = 0.0, wr = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto sides = functional_sides(which, family[i], fam, opts);
    if (sides.lhs == 0.0 && sides.rhs == 0.0) continue;
    ++used;
    const double ratio = sides.rhs > 0.0 ? sides.lhs / sides.rhs : INFINITY;
    if (ratio > r.worst_margin) r.worst_margin = ratio, worst = i, wl = sides.lhs, wr = sides.rhs;
  }
  r.samples = used;
  r.passed = used > 0 && std::isfinite(r.worst_margin) && r.worst_margin > 0.0;
  r.violations = r.passed ? 0 : 1;
  const Anisotropy& a = fam.anisotropy();
  r.values = {{"C", r.worst_margin}, {"lhs", wl}, {"rhs", wr}};
  r.witness = {{"member", static_cast<double>(worst)}};
  r.constants = {{"p", a.p()}, {"s_max", a.s_max()}, {"s_bar", a.s_bar()}, {"r", opts.r}, {"lambda", opts.lambda}};
  if (a.has_sobolev_exponent()) {
    r.constants.emplace_back("p_star", a.sobolev_exponent());
    r.constants.emplace_back("gamma_sob", a.moser_gain());
  }
  return r;
}

InequalityReport functional_sweep(FunctionalInequality which, const FunctionalSweep& sweep,
                                  const FunctionalOptions& opts) {
  if (sweep.orders.empty()) throw std::invalid_argument("functional_sweep: empty order list");
  if (!(sweep.robustness > 1.0)) throw std::invalid_argument("functional_sweep: robustness factor must exceed 1");
  InequalityReport r;
  r.name = to_string(which) + "-sweep";
  double lo = INFINITY, hi = 0.0;
  bool finite = true;
  for (std::size_t i = 0; i < sweep.orders.size(); ++i) {
    const Anisotropy a(sweep.p, sweep.orders[i], sweep.s0);
    const Grid grid(a, sweep.nodes_per_axis, sweep.box_radius);
    const auto fam = KernelFamily::axes(a);
    const auto family = functional_test_family(grid, sweep.family_size, sweep.seed);
    const auto rep = estimate_functional_constant(which, fam, family, opts);
    const double c = rep.worst_margin;
    r.samples += rep.samples;
    finite = finite && rep.passed;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
    r.values.emplace_back(fmt::format("C[{}]", i), c);
    r.values.emplace_back(fmt::format("s_max[{}]", i), a.s_max());
  }
  const double spread = hi / lo;
  r.values.emplace_back("spread", spread);
  r.worst_margin = spread;
  r.passed = finite && spread < sweep.robustness;
  r.violations = r.passed ? 0 : 1;
  r.constants = {{"p", sweep.p}, {"s0", sweep.s0}, {"robustness", sweep.robustness},
                 {"N", static_cast<double>(sweep.nodes_per_axis)}};
  return r;
}

}  // namespace aniso
