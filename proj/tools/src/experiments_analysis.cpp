#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "aniso/dyadic.hpp"
#include "aniso/maximal.hpp"
#include "aniso/verify/algebraic.hpp"
#include "aniso/verify/convergence.hpp"
#include "aniso/verify/functional.hpp"
#include "aniso_cli/experiments.hpp"
#include "common.hpp"

namespace aniso::cli {

using namespace detail;

namespace {

std::vector<Point> default_points(int n) {
  const std::vector<Point> base{{0.5, -0.4, 0.2}, {-0.3, 0.7, -0.1}, {0.9, 0.35, 0.6}};
  std::vector<Point> pts;
  for (const auto& b : base) pts.emplace_back(b.begin(), b.begin() + n);
  return pts;
}

bool admits_global_sobolev(const ExperimentConfig& cfg) {
  for (const auto& sp : sweep_points(cfg))
    if (!anisotropy_of(cfg, sp).has_sobolev_exponent()) return false;
  return true;
}

}  // namespace

double good_lambda_bound(int n, double s0) { return std::pow(4.0, n) * std::pow(2.0, n / s0); }

std::vector<InequalityReport> run_functional(const ExperimentConfig& cfg, Artifacts& out) {
  std::vector<FunctionalInequality> kinds;
  if (cfg.experiment == Experiment::Poincare) {
    kinds = {FunctionalInequality::Poincare};
  } else {
    if (admits_global_sobolev(cfg)) kinds.push_back(FunctionalInequality::Sobolev);
    kinds.push_back(FunctionalInequality::SobolevLocal);
  }
  std::vector<InequalityReport> reports;
  SvgPlot plot{to_string(cfg.experiment) + " constants", "s_max", "C", false, true, {}};
  const double s0 = cfg.s0 > 0.0 ? cfg.s0 : [&] {
    double m = 1.0;
    for (const auto& s : cfg.orders_sweep())
      for (double v : s) m = std::min(m, v);
    return m;
  }();
  for (auto which : kinds) {
    for (double p : cfg.p_sweep()) {
      FunctionalSweep sw;
      sw.p = p;
      sw.s0 = s0;
      sw.orders = cfg.orders_sweep();
      sw.nodes_per_axis = cfg.nodes;
      sw.box_radius = cfg.box;
      sw.family_size = cfg.count;
      sw.seed = cfg.seed;
      sw.robustness = cfg.robustness;
      auto r = functional_sweep(which, sw);
      r.name = fmt::format("{}[p={:.17g}]", to_string(which), p);
      SvgSeries series{r.name, {}, {}};
      for (std::size_t k = 0; k < sw.orders.size(); ++k) {
        series.x.push_back(r.value(fmt::format("s_max[{}]", k)));
        series.y.push_back(r.value(fmt::format("C[{}]", k)));
      }
      plot.series.push_back(std::move(series));
      reports.push_back(std::move(r));
    }
  }
  out.write(to_string(cfg.experiment) + ".svg", svg_text(plot));
  return reports;
}

std::vector<InequalityReport> run_maximal(const ExperimentConfig& cfg, Artifacts& out) {
  std::vector<InequalityReport> reports;
  // sharp-maximal constants per p across the s-sweep
  std::vector<std::vector<double>> sharp(cfg.p_sweep().size());
  const std::size_t ns = cfg.orders_sweep().size();
  std::ostringstream rows;
  rows << "point,function,max_Md_minus_M,lp_u,lp_Msharp,ratio\r\n";
  for (const auto& sp : sweep_points(cfg)) {
    const Anisotropy a = anisotropy_of(cfg, sp);
    const Grid g(a, cfg.nodes, cfg.box);
    const auto family = functional_test_family(g, cfg.count, cfg.seed);
    InequalityReport r;
    r.name = fmt::format("maximal[{}]", label(sp));
    double worst_gap = -std::numeric_limits<double>::infinity(), c_sharp = 0.0;
    std::size_t skipped = 0;
    for (std::size_t f = 0; f < family.size(); ++f) {
      const auto m = maximal_all(family[f]);
      double gap = -std::numeric_limits<double>::infinity(), scale = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        gap = std::max(gap, m.Md[i] - m.Mu[i]);
        scale = std::max(scale, std::abs(m.u[i]));
      }
      const bool bad = gap > 1e-12 * scale;
      if (bad) ++r.violations;
      if (gap > worst_gap) {
        worst_gap = gap;
        r.witness = {{"function", static_cast<double>(f)}, {"gap", gap}};
      }
      const double lu = lp_norm(m.u, sp.p), ls = lp_norm(m.Msharp, sp.p);
      // a function vanishing on every node has 0/0 and is left out
      const bool vanishes = !(lu > 0.0);
      const double ratio = vanishes ? std::numeric_limits<double>::quiet_NaN()
                                    : ls > 0.0 ? lu / ls : std::numeric_limits<double>::infinity();
      if (vanishes) ++skipped;
      else c_sharp = std::max(c_sharp, ratio);
      rows << fmt::format("{},{},{},{},{},{}\r\n", sp.index, f, csv_number(gap), csv_number(lu), csv_number(ls),
                          csv_number(ratio));
    }
    r.samples = family.size();
    r.worst_margin = 0.0 - worst_gap;
    r.values = {{"max_Md_minus_M", worst_gap}, {"C_sharp", c_sharp}, {"vanishing", static_cast<double>(skipped)}};
    r.constants = {{"p", sp.p}, {"s_max", a.s_max()}};
    r.passed = r.violations == 0 && std::isfinite(c_sharp) && skipped < family.size();
    sharp[sp.index / ns].push_back(c_sharp);
    reports.push_back(std::move(r));
  }
  out.write("maximal.csv", rows.str());
  SvgPlot plot{"sharp maximal constant", "sweep point", "C_sharp", false, true, {}};
  for (std::size_t ip = 0; ip < sharp.size(); ++ip) {
    InequalityReport r;
    r.name = fmt::format("sharp_maximal_robustness[p={:.17g}]", cfg.p_sweep()[ip]);
    r.samples = sharp[ip].size();
    const double sp = spread(sharp[ip]);
    SvgSeries series{r.name, {}, sharp[ip]};
    for (std::size_t k = 0; k < sharp[ip].size(); ++k) {
      r.values.emplace_back(fmt::format("C[{}]", k), sharp[ip][k]);
      series.x.push_back(static_cast<double>(k));
    }
    r.values.emplace_back("spread", sp);
    r.worst_margin = sp;
    r.constants = {{"robustness", cfg.robustness}};
    r.passed = sp < cfg.robustness;
    r.violations = r.passed ? 0 : 1;
    plot.series.push_back(std::move(series));
    reports.push_back(std::move(r));
  }
  out.write("maximal.svg", svg_text(plot));
  return reports;
}

std::vector<InequalityReport> run_goodlambda(const ExperimentConfig& cfg, Artifacts& out) {
  std::vector<InequalityReport> reports;
  SvgPlot plot{"good-lambda constant", "gamma", "max lhs/(gamma rhs)", true, true, {}};
  for (const auto& sp : sweep_points(cfg)) {
    const Anisotropy a = anisotropy_of(cfg, sp);
    const Grid g(a, cfg.nodes, cfg.box);
    const auto family = functional_test_family(g, cfg.count, cfg.seed);
    std::vector<GoodLambda> rows;
    std::vector<double> k_gamma(cfg.gammas.size(), 0.0);
    for (const auto& u : family) {
      const auto m = maximal_all(u);
      const double top = *std::max_element(m.Md.values().begin(), m.Md.values().end());
      if (!(top > 0.0)) continue;
      for (double frac : {0.05, 0.1, 0.2, 0.3, 0.45}) {
        for (std::size_t j = 0; j < cfg.gammas.size(); ++j) {
          const auto gl = good_lambda(m, frac * top, cfg.gammas[j]);
          rows.push_back(gl);
          if (gl.rhs > 0.0) k_gamma[j] = std::max(k_gamma[j], gl.lhs / (cfg.gammas[j] * gl.rhs));
        }
      }
    }
    std::ostringstream os;
    write_good_lambda_csv(os, rows);
    out.write(fmt::format("goodlambda_{:03}.csv", sp.index), os.str());
    InequalityReport r;
    r.name = fmt::format("good_lambda[{}]", label(sp));
    r.samples = rows.size();
    const double bound = good_lambda_bound(a.dim(), a.s0());
    double kmax = 0.0;
    for (std::size_t j = 0; j < k_gamma.size(); ++j) {
      r.values.emplace_back(fmt::format("K[{}]", j), k_gamma[j]);
      r.values.emplace_back(fmt::format("gamma[{}]", j), cfg.gammas[j]);
      if (k_gamma[j] > bound) ++r.violations;
      kmax = std::max(kmax, k_gamma[j]);
    }
    r.values.emplace_back("K_max", kmax);
    r.constants = {{"bound", bound}, {"n", static_cast<double>(a.dim())}, {"s0", a.s0()}};
    r.worst_margin = bound - kmax;
    r.passed = r.violations == 0 && std::isfinite(kmax);
    plot.series.push_back({label(sp), cfg.gammas, k_gamma});
    reports.push_back(std::move(r));
  }
  out.write("goodlambda.svg", svg_text(plot));
  return reports;
}

std::vector<InequalityReport> run_dyadic(const ExperimentConfig& cfg, Artifacts& out) {
  std::vector<InequalityReport> reports;
  for (const auto& s : cfg.orders_sweep()) {
    const std::size_t idx = reports.size();
    const Anisotropy a(cfg.p_sweep().front(), s, cfg.s0, cfg.ellipticity);
    const Rect box(Point(s.size(), 0.0), cfg.box, a);
    const auto tree = build_dyadic_tree(a, box, cfg.kmin, cfg.kmax);
    const auto d = dyadic_check(tree, a);
    std::ostringstream os;
    write_dyadic_tree(os, tree);
    out.write(fmt::format("dyadic_{:03}.csv", idx), os.str());
    InequalityReport r;
    r.name = fmt::format("dyadic[s=({})]", numbers_joined(s, ","));
    r.samples = d.cells_checked;
    const bool props[] = {d.covers, d.radius, d.nested, d.bounded_overlap, d.chain};
    const char* names[] = {"covers", "radius", "nested", "bounded_overlap", "chain"};
    for (int k = 0; k < 5; ++k) {
      r.values.emplace_back(names[k], props[k] ? 1.0 : 0.0);
      if (!props[k]) ++r.violations;
    }
    r.values.emplace_back("witnesses", static_cast<double>(d.witnesses.size()));
    r.values.emplace_back("rectangles", static_cast<double>(tree.size()));
    r.constants = {{"kmin", static_cast<double>(cfg.kmin)}, {"kmax", static_cast<double>(cfg.kmax)}};
    r.worst_margin = d.ok() ? 0.0 : -1.0;
    r.passed = d.ok();
    reports.push_back(std::move(r));
  }
  return reports;
}

std::vector<InequalityReport> run_convergence(const ExperimentConfig& cfg, Artifacts& out) {
  std::vector<InequalityReport> reports;
  SvgPlot plot{"fractional to local ratio", "s", "ratio", false, false, {}};
  for (const auto& s : cfg.orders_sweep()) {
    const int n = static_cast<int>(s.size());
    std::vector<SmoothFunction> fns;
    for (const auto& name : cfg.functions) fns.push_back(smooth_function(name, n));
    const auto points = cfg.points.empty() ? default_points(n) : cfg.points;
    for (double p : cfg.p_sweep()) {
      auto r = convergence_suite(p, fns, points, cfg.orders);
      r.name = fmt::format("convergence[p={:.17g};n={}]", p, n);
      for (const auto& f : fns) {
        for (std::size_t k = 0; k < points.size(); ++k) {
          const auto one = convergence_to_local(f, points[k], p, cfg.orders);
          SvgSeries series{fmt::format("{} p={:g} x{}", f.name, p, k), cfg.orders, {}};
          for (std::size_t j = 0; j < cfg.orders.size(); ++j)
            series.y.push_back(one.value(fmt::format("ratio[{}]", j)));
          plot.series.push_back(std::move(series));
        }
      }
      reports.push_back(std::move(r));
    }
  }
  out.write("convergence.svg", svg_text(plot));
  return reports;
}

std::vector<InequalityReport> run_ineq(const ExperimentConfig& cfg, Artifacts& out) {
  std::vector<InequalityReport> reports;
  std::ostringstream os;
  os << "lemma,samples,violations,worst_margin\r\n";
  for (const auto& name : cfg.lemmas) {
    auto r = check_algebraic(parse_lemma(name), cfg.samples, cfg.seed);
    os << fmt::format("{},{},{},{}\r\n", csv_field(r.name), r.samples, r.violations, csv_number(r.worst_margin));
    reports.push_back(std::move(r));
  }
  out.write("ineq_margins.csv", os.str());
  return reports;
}

}  // namespace aniso::cli
