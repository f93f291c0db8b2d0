#include "aniso/verify/hoelder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "aniso/nonlocal.hpp"
#include "aniso/verify/harnack.hpp"

namespace aniso {

InequalityReport hoelder_decay(const GridFunction& u, const DirichletProblem& prob, const HoelderOptions& opts) {
  const Grid& g = u.grid();
  if (!(g == prob.f.grid())) throw std::invalid_argument("hoelder_decay: u and f live on different grids");
  if (!(opts.base > 1.0)) throw std::invalid_argument("hoelder_decay: base must exceed 1");
  if (opts.skip_finest < 0) throw std::invalid_argument("hoelder_decay: skip_finest must be >= 0");
  const Anisotropy& a = g.anisotropy();
  const int n = g.dim();
  const Point c = opts.center.empty() ? Point(static_cast<std::size_t>(n), 0.0) : opts.center;
  if (static_cast<int>(c.size()) != n) throw std::invalid_argument("hoelder_decay: centre has the wrong dimension");

  std::vector<double> rho, osc;
  for (int k = 0;; ++k) {
    const double r = std::pow(opts.base, -k);
    const Rect m(c, r, a);
    bool fits = true, resolved = true;
    for (int j = 0; j < n; ++j) {
      fits = fits && std::abs(c[j]) + m.half_width(j) <= g.half_extent(j) * (1.0 + kGeomSlack);
      resolved = resolved && m.half_width(j) > g.spacing(j) * (1.0 + kGeomSlack);
    }
    if (!resolved) break;
    if (!fits) {
      if (k > 64) break;
      continue;
    }
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i : g.nodes_in(m)) lo = std::min(lo, u[i]), hi = std::max(hi, u[i]);
    rho.push_back(r);
    osc.push_back(hi - lo);
  }
  const int K = static_cast<int>(rho.size());
  if (K < 3)
    throw std::invalid_argument(fmt::format("hoelder_decay: only {} resolvable scales (need at least 3)", K));

  int window = std::max(2, K - opts.skip_finest);
  for (int k = 0; k < window; ++k)
    if (osc[k] == 0.0) {
      window = k;
      break;
    }
  double alpha = INFINITY, logc = -INFINITY;
  if (window >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < window; ++k) {
      const double x = -std::log(rho[k]), y = std::log(osc[k]);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double w = window;
    const double slope = (w * sxy - sx * sy) / (w * sxx - sx * sx);
    alpha = -slope;
    logc = (sy - slope * sx) / w;
  } else if (window == 1) {
    logc = std::log(osc[0]);
  }

  double sup = std::abs(u.rule().far_value());
  for (double v : u.values()) sup = std::max(sup, std::abs(v));
  const double fnorm = data_norm(prob.f, prob.q, Rect(Point(static_cast<std::size_t>(n), 0.0), 15.0 / 16.0, a));
  const double norm = sup + fnorm;

  InequalityReport r;
  r.name = "hoelder";
  r.samples = static_cast<std::size_t>(K);
  r.worst_margin = alpha;
  r.passed = alpha > 0.0;
  r.violations = r.passed ? 0 : 1;
  r.values = {{"alpha", alpha},
              {"C_fit", norm > 0.0 ? std::exp(logc) / norm : 0.0},
              {"norm", norm},
              {"sup_u", sup},
              {"f_norm", fnorm},
              {"fit_points", static_cast<double>(window)},
              {"scales", static_cast<double>(K)}};
  for (int k = 0; k < K; ++k) {
    r.values.emplace_back(fmt::format("rho[{}]", k), rho[k]);
    r.values.emplace_back(fmt::format("osc[{}]", k), osc[k]);
  }
  r.constants = {{"base", opts.base}, {"skip_finest", static_cast<double>(opts.skip_finest)}, {"q", prob.q}};
  for (int j = 0; j < n; ++j) r.witness.emplace_back(fmt::format("center[{}]", j), c[j]);
  return r;
}

DirichletProblem manufactured_problem(const KernelFamily& fam, const Grid& grid,
                                      const std::function<double(const Point&)>& exact) {
  require_family_matches(grid, fam, "manufactured_problem");
  auto data = GridFunction::sample(grid, exact, ExteriorRule::tabulated());
  GridFunction f(grid);
  auto prob = make_problem(fam, f, data);
  const double dv = grid.cell_volume();
  for (std::size_t i : grid.nodes_in(prob.domain)) prob.f[i] = pairing_with_node(data, fam, i) / dv;
  return prob;
}

}  // namespace aniso
