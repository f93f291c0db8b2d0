#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "aniso/verify/harnack.hpp"
#include "aniso/verify/hoelder.hpp"
#include "aniso_cli/experiments.hpp"
#include "common.hpp"

namespace aniso::cli {

using namespace detail;

namespace {

std::string grid_csv(const GridFunction& u) {
  std::ostringstream os;
  write_grid_function_csv(os, u);
  return os.str();
}

std::string log_csv(const std::vector<SolverLogEntry>& log) {
  std::ostringstream os;
  write_solver_log_csv(os, log);
  return os.str();
}

struct Solved {
  SolveResult result;
  bool ok = true;
};

// Solves and writes solution and log; a failed solve keeps the last iterate
// flagged as partial.
Solved solve_and_store(const DirichletProblem& prob, const std::string& stem, Artifacts& out) {
  Solved s = [&] {
    try {
      return Solved{solve(prob), true};
    } catch (const ConvergenceError& e) {
      return Solved{e.partial(), false};
    }
  }();
  out.write(stem + "_u.csv", grid_csv(s.result.u), !s.ok);
  out.write(stem + "_log.csv", log_csv(s.result.log), !s.ok);
  return s;
}

InequalityReport solve_report(const SweepPoint& sp, const Solved& s) {
  InequalityReport r;
  r.name = "solve[" + label(sp) + "]";
  r.samples = 1;
  r.passed = s.ok;
  r.violations = s.ok ? 0 : 1;
  r.worst_margin = s.result.residual;
  r.values = {{"converged", s.ok ? 1.0 : 0.0},
              {"iterations", static_cast<double>(s.result.iterations)},
              {"residual", s.result.residual}};
  return r;
}

}  // namespace

std::vector<InequalityReport> run_solve(const ExperimentConfig& cfg, Artifacts& out) {
  std::vector<InequalityReport> reports;
  bool failed = false;
  for (const auto& sp : sweep_points(cfg)) {
    const Anisotropy a = anisotropy_of(cfg, sp);
    const Grid g(a, cfg.nodes, cfg.box);
    const auto prob = problem_of(cfg, family_of(cfg, a), g);
    const auto s = solve_and_store(prob, fmt::format("solve_{:03}", sp.index), out);
    failed = failed || !s.ok;
    auto r = solve_report(sp, s);
    r.values.emplace_back("max_abs_u", [&] {
      double m = 0.0;
      for (double v : s.result.u.values()) m = std::max(m, std::abs(v));
      return m;
    }());
    reports.push_back(std::move(r));
  }
  if (failed) {
    out.write("solve_reports.csv", reports_csv(reports), true);
    throw NumericFailure("solve: solver did not converge for at least one sweep point");
  }
  return reports;
}

std::vector<InequalityReport> run_harnack(const ExperimentConfig& cfg, Artifacts& out) {
  std::vector<InequalityReport> reports;
  bool failed = false;
  // C_emp collected per (p, p0) across the s-sweep
  std::vector<std::vector<double>> cemp(cfg.p_sweep().size() * cfg.p0_sweep().size());
  std::vector<std::vector<double>> smax(cemp.size());
  const std::size_t ns = cfg.orders_sweep().size();
  for (const auto& sp : sweep_points(cfg)) {
    const Anisotropy a = anisotropy_of(cfg, sp);
    const Grid g(a, cfg.nodes, cfg.box);
    const auto prob = problem_of(cfg, family_of(cfg, a), g);
    const auto s = solve_and_store(prob, fmt::format("harnack_{:03}", sp.index), out);
    if (!s.ok) {
      failed = true;
      reports.push_back(solve_report(sp, s));
      continue;
    }
    const std::size_t ip = sp.index / ns;
    for (std::size_t j = 0; j < cfg.p0_sweep().size(); ++j) {
      WeakHarnackOptions o;
      o.p0 = cfg.p0_sweep()[j];
      auto r = weak_harnack(s.result.u, prob, o);
      r.name = fmt::format("weak_harnack[{};p0={:.17g}]", label(sp), o.p0);
      cemp[ip * cfg.p0_sweep().size() + j].push_back(r.value("C_emp"));
      smax[ip * cfg.p0_sweep().size() + j].push_back(a.s_max());
      reports.push_back(std::move(r));
    }
  }
  SvgPlot plot{"weak Harnack constant", "s_max", "C_emp", false, true, {}};
  for (std::size_t ip = 0; ip < cfg.p_sweep().size(); ++ip) {
    for (std::size_t j = 0; j < cfg.p0_sweep().size(); ++j) {
      const auto& c = cemp[ip * cfg.p0_sweep().size() + j];
      InequalityReport r;
      r.name = fmt::format("harnack_robustness[p={:.17g};p0={:.17g}]", cfg.p_sweep()[ip], cfg.p0_sweep()[j]);
      r.samples = c.size();
      const double sp = spread(c);
      r.worst_margin = sp;
      for (std::size_t k = 0; k < c.size(); ++k) {
        r.values.emplace_back(fmt::format("C[{}]", k), c[k]);
        if (!(c[k] > 0.0)) ++r.violations;
      }
      r.values.emplace_back("spread", sp);
      r.constants = {{"robustness", cfg.robustness}, {"s0", cfg.s0}};
      r.passed = c.size() == ns && r.violations == 0 && sp < cfg.robustness;
      reports.push_back(std::move(r));
      plot.series.push_back({fmt::format("p={:g} p0={:g}", cfg.p_sweep()[ip], cfg.p0_sweep()[j]),
                             smax[ip * cfg.p0_sweep().size() + j], c});
    }
  }
  out.write("harnack.svg", svg_text(plot), failed);
  if (failed) {
    out.write("harnack_reports.csv", reports_csv(reports), true);
    throw NumericFailure("harnack: solver did not converge for at least one sweep point");
  }
  return reports;
}

std::vector<InequalityReport> run_hoelder(const ExperimentConfig& cfg, Artifacts& out) {
  std::vector<InequalityReport> reports;
  bool failed = false;
  SvgPlot plot{"oscillation decay", "rho", "osc", true, true, {}};
  for (const auto& sp : sweep_points(cfg)) {
    const Anisotropy a = anisotropy_of(cfg, sp);
    const Grid g(a, cfg.nodes, cfg.box);
    const auto fam = family_of(cfg, a);
    DirichletProblem prob = cfg.manufactured.empty()
                                ? problem_of(cfg, fam, g)
                                : manufactured_problem(fam, g, profile_function({0.0, cfg.manufactured, 1.0}, a.dim()));
    prob.tol = cfg.tol;
    prob.max_iter = cfg.max_iter;
    prob.method = cfg.method;
    const auto s = solve_and_store(prob, fmt::format("hoelder_{:03}", sp.index), out);
    if (!s.ok) {
      failed = true;
      reports.push_back(solve_report(sp, s));
      continue;
    }
    HoelderOptions o;
    o.base = cfg.hoelder_base;
    auto r = hoelder_decay(s.result.u, prob, o);
    r.name = fmt::format("hoelder[{}]", label(sp));
    const double threshold = cfg.manufactured.empty() ? 0.0 : 0.9;
    r.constants.emplace_back("alpha_threshold", threshold);
    r.passed = r.passed && (cfg.manufactured.empty() ? r.worst_margin > 0.0 : r.worst_margin >= threshold);
    SvgSeries series{label(sp), {}, {}};
    for (std::size_t k = 0; k < static_cast<std::size_t>(r.value("scales")); ++k) {
      const double osc = r.value(fmt::format("osc[{}]", k));
      if (osc > 0.0) {
        series.x.push_back(r.value(fmt::format("rho[{}]", k)));
        series.y.push_back(osc);
      }
    }
    plot.series.push_back(std::move(series));
    reports.push_back(std::move(r));
  }
  out.write("hoelder.svg", svg_text(plot), failed);
  if (failed) {
    out.write("hoelder_reports.csv", reports_csv(reports), true);
    throw NumericFailure("hoelder: solver did not converge for at least one sweep point");
  }
  return reports;
}

}  // namespace aniso::cli
