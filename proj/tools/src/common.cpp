#include "common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "aniso/verify/convergence.hpp"

namespace aniso::cli::detail {

std::vector<SweepPoint> sweep_points(const ExperimentConfig& cfg) {
  std::vector<SweepPoint> out;
  for (double p : cfg.p_sweep())
    for (const auto& s : cfg.orders_sweep()) out.push_back({out.size(), p, s});
  return out;
}

Anisotropy anisotropy_of(const ExperimentConfig& cfg, const SweepPoint& sp) {
  return Anisotropy(sp.p, sp.s, cfg.s0, cfg.ellipticity);
}

KernelFamily family_of(const ExperimentConfig& cfg, const Anisotropy& a) {
  if (cfg.coefficient.empty()) return KernelFamily::axes(a);
  return KernelFamily::with_coefficient(a, coefficient_from_catalog(cfg.coefficient));
}

std::function<double(const Point&)> profile_function(const Profile& pr, int dim) {
  if (pr.function.empty()) {
    const double c = pr.constant;
    return [c](const Point&) { return c; };
  }
  auto fn = smooth_function(pr.function, dim);
  const double scale = pr.scale;
  return [fn, scale](const Point& x) { return scale * fn.value(x); };
}

DirichletProblem problem_of(const ExperimentConfig& cfg, const KernelFamily& fam, const Grid& g) {
  const int n = g.dim();
  auto f = GridFunction::sample(g, profile_function(cfg.f, n));
  auto gg = GridFunction::sample(g, profile_function(cfg.g, n), cfg.exterior);
  auto prob = make_problem(fam, std::move(f), std::move(gg));
  if (cfg.q > 0.0) prob.q = cfg.q;
  prob.tol = cfg.tol;
  prob.max_iter = cfg.max_iter;
  prob.method = cfg.method;
  prob.validate();
  return prob;
}

std::string numbers_joined(const std::vector<double>& v, const char* sep) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? sep : "") + fmt::format("{:.17g}", v[k]);
  return out;
}

std::string label(const SweepPoint& sp) {
  return fmt::format("p={:.17g};s=({})", sp.p, numbers_joined(sp.s, ","));
}

std::string reports_csv(const std::vector<InequalityReport>& reports) {
  std::ostringstream os;
  write_reports_csv(os, reports);
  return os.str();
}

std::string svg_text(const SvgPlot& plot) {
  std::ostringstream os;
  write_svg(os, plot);
  return os.str();
}

double spread(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double x : v) {
    if (!(x > 0.0) || !std::isfinite(x)) return std::numeric_limits<double>::infinity();
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return hi / lo;
}

}  // namespace aniso::cli::detail
