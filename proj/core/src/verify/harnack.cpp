#include "aniso/verify/harnack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "aniso/cutoff.hpp"
#include "aniso/nonlocal.hpp"

namespace aniso {

namespace {

Point origin_or(const Point& x0, int n) { return x0.empty() ? Point(static_cast<std::size_t>(n), 0.0) : x0; }

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

double tail_sup(const GridFunction& u, const KernelFamily& fam, const Rect& over, const Rect& hole) {
  double best = 0.0;
  for (std::size_t i : u.grid().nodes_in(over)) best = std::max(best, tail_term(u, fam, i, hole));
  return best;
}

// log of ||1/u||_{L^q} over the nodes, scaled by the largest term so that
// high exponents do not overflow.
double log_reciprocal_norm(const GridFunction& u, double q, const std::vector<std::size_t>& nodes) {
  double lmax = -INFINITY;
  for (std::size_t i : nodes) lmax = std::max(lmax, -std::log(u[i]));
  double s = 0.0;
  for (std::size_t i : nodes) s += std::exp(q * (-std::log(u[i]) - lmax));
  return lmax + std::log(s * u.grid().cell_volume()) / q;
}

}  // namespace

double log_lemma_constant(const KernelFamily& fam) {
  return std::pow(2.0, fam.anisotropy().p() + 2.0) * cutoff_constant(fam);
}

double data_norm(const GridFunction& f, double q, const Rect& m) {
  const Anisotropy& a = f.grid().anisotropy();
  const double e = q / (a.p() * a.s_bar());
  double s = 0.0;
  for (std::size_t i : f.grid().nodes_in(m)) s += std::pow(std::abs(f[i]), e);
  return std::pow(s * f.grid().cell_volume(), 1.0 / e);
}

InequalityReport check_log_lemma(const GridFunction& u, const DirichletProblem& prob, const LogLemmaOptions& opts) {
  const Grid& g = u.grid();
  if (!(g == prob.f.grid())) throw std::invalid_argument("check_log_lemma: u and f live on different grids");
  require_family_matches(g, prob.family, "check_log_lemma");
  if (!(opts.eps > 0.0)) throw std::invalid_argument("check_log_lemma: eps must be positive");
  if (!(opts.r > 0.0) || !(opts.lambda > 1.0)) throw std::invalid_argument("check_log_lemma: need r > 0 and lambda > 1");
  const Anisotropy& a = g.anisotropy();
  const double p = a.p();
  const Point x0 = origin_or(opts.x0, g.dim());
  const Rect inner(x0, opts.r, a), outer(x0, opts.lambda * opts.r, a), mid(x0, (opts.lambda + 1.0) * opts.r / 2.0, a);
  require_inside_box(outer, g, "check_log_lemma");
  const auto outer_nodes = g.nodes_in(outer);
  GridFunction logu(g);
  for (std::size_t i : outer_nodes) {
    if (!(u[i] >= opts.eps))
      throw std::invalid_argument(fmt::format("check_log_lemma: u = {} < eps = {} at node {}", u[i], opts.eps, i));
    logu[i] = std::log(u[i]);
  }
  const double lhs = energy(logu, logu, prob.family, g.mask(inner));
  const double C = opts.constant > 0.0 ? opts.constant : log_lemma_constant(prob.family);
  const double vol = outer.volume();
  const double t1 = C * geometric_sum(opts.lambda, a) * std::pow(opts.r, -p * a.s_max()) * vol;
  const double fnorm = data_norm(prob.f, prob.q, outer);
  const double t2 = std::pow(opts.eps, 1.0 - p) * fnorm * std::pow(vol, (prob.q - p * a.s_bar()) / prob.q);
  const double tail = tail_sup(u, prob.family, mid, outer);
  const double t3 = 2.0 * std::pow(opts.eps, 1.0 - p) * vol * tail;
  const double rhs = t1 + t2 + t3;

  InequalityReport r;
  r.name = "log-lemma";
  r.samples = 1;
  r.worst_margin = (rhs - lhs) / rhs;
  r.passed = lhs <= rhs;
  r.violations = r.passed ? 0 : 1;
  r.values = {{"lhs", lhs},           {"rhs", rhs},     {"cutoff_term", t1}, {"f_term", t2},
              {"tail_term", t3},      {"tail_sup", tail}, {"f_norm", fnorm},  {"ratio_to_cutoff_term", lhs / (t1 / C)}};
  r.constants = {{"C", C}, {"eps", opts.eps}, {"r", opts.r}, {"lambda", opts.lambda}, {"q", prob.q}, {"p", p}};
  return r;
}

BmoEstimate bmo_log(const GridFunction& u, double r) {
  const Grid& g = u.grid();
  const Anisotropy& a = g.anisotropy();
  const Point x0(static_cast<std::size_t>(g.dim()), 0.0);
  const Rect m(x0, r, a);
  const auto nodes = g.nodes_in(m);
  if (nodes.empty()) throw std::invalid_argument("bmo_log: M_r holds no grid node");
  std::vector<double> lg(g.size(), 0.0);
  for (std::size_t i : nodes) {
    if (!(u[i] > 0.0)) throw std::domain_error(fmt::format("bmo_log: u = {} is not positive at node {}", u[i], i));
    lg[i] = std::log(u[i]);
  }
  const double p = a.p();
  auto oscillation = [&](const std::vector<std::size_t>& set, double power) {
    double mean = 0.0;
    for (std::size_t i : set) mean += lg[i];
    mean /= static_cast<double>(set.size());
    double s = 0.0;
    for (std::size_t i : set) s += std::pow(std::abs(lg[i] - mean), power);
    return s / static_cast<double>(set.size());
  };
  BmoEstimate out;
  out.mean_oscillation_p = std::pow(oscillation(nodes, p), 1.0 / p);
  const auto inside = g.mask(m);
  for (double rho = r / 2.0; ; rho /= 2.0) {
    bool any = false;
    for (std::size_t c : nodes) {
      const Rect q(g.point(c), rho, a);
      bool contained = true;
      for (int k = 0; k < g.dim() && contained; ++k)
        contained = q.lower(k) >= m.lower(k) - kGeomSlack && q.upper(k) <= m.upper(k) + kGeomSlack;
      if (!contained) continue;
      const auto sub = g.nodes_in(q);
      if (sub.size() < 2) continue;
      any = true;
      bool ok = true;
      for (std::size_t i : sub) ok = ok && inside[i];
      if (ok) out.sup_mean_oscillation = std::max(out.sup_mean_oscillation, oscillation(sub, 1.0));
    }
    if (!any) break;
  }
  return out;
}

InequalityReport weak_harnack(const GridFunction& u, const DirichletProblem& prob, const WeakHarnackOptions& opts) {
  const Grid& g = u.grid();
  if (!(g == prob.f.grid())) throw std::invalid_argument("weak_harnack: u and f live on different grids");
  require_family_matches(g, prob.family, "weak_harnack");
  if (!(opts.p0 > 0.0 && opts.p0 < 1.0)) throw std::invalid_argument("weak_harnack: p0 must lie in (0, 1)");
  const Anisotropy& a = g.anisotropy();
  const double p = a.p();
  const Point o(static_cast<std::size_t>(g.dim()), 0.0);
  const Rect m1(o, 1.0, a), quarter(o, 0.25, a), half(o, 0.5, a), m1516(o, 15.0 / 16.0, a);
  require_inside_box(m1, g, "weak_harnack");
  for (std::size_t i : g.nodes_in(m1))
    if (u[i] < 0.0) throw std::invalid_argument(fmt::format("weak_harnack: u = {} < 0 at interior node {}", u[i], i));
  const auto qn = g.nodes_in(quarter), hn = g.nodes_in(half);
  if (qn.empty()) throw std::invalid_argument("weak_harnack: M_{1/4} holds no grid node");

  double inf = INFINITY;
  for (std::size_t i : qn) inf = std::min(inf, u[i]);
  double avg = 0.0;
  for (std::size_t i : hn) avg += std::pow(u[i], opts.p0);
  avg = std::pow(avg / static_cast<double>(hn.size()), 1.0 / opts.p0);
  const double tail = 2.0 * std::pow(tail_sup(u, prob.family, m1516, m1), 1.0 / (p - 1.0));
  const double fterm = data_norm(prob.f, prob.q, m1516);
  const double c_emp = (inf + tail + fterm) / std::max(avg, 1e-300);

  InequalityReport r;
  r.name = "weak-harnack";
  r.samples = 1;
  r.worst_margin = c_emp;
  r.passed = std::isfinite(c_emp) && c_emp > 0.0;
  r.violations = r.passed ? 0 : 1;
  r.values = {{"C_emp", c_emp}, {"inf", inf}, {"average", avg}, {"tail", tail}, {"f_term", fterm},
              {"raw_ratio", inf / std::max(avg, 1e-300)}};
  const double delta = p * a.s_max() / (p - 1.0) * (prob.q - static_cast<double>(g.dim())) / prob.q;
  r.constants = {{"p0", opts.p0}, {"q", prob.q}, {"p", p}, {"delta", delta}, {"s_max", a.s_max()}, {"s_bar", a.s_bar()}};

  bool positive = true;
  for (std::size_t i : g.nodes_in(half)) positive = positive && u[i] > 0.0;
  if (positive) {
    const auto b = bmo_log(u, opts.bmo_radius);
    r.values.emplace_back("bmo_p", b.mean_oscillation_p);
    r.values.emplace_back("bmo_sup", b.sup_mean_oscillation);
  }
  if (positive && a.has_sobolev_exponent()) {
    const double gamma = a.moser_gain();
    r.constants.emplace_back("gamma", gamma);
    double theta = 0.5;  // t - p + 1 with t_0 = p - 1/2
    for (int j = 0; j < opts.moser_rungs; ++j) {
      const double outer_r = 0.25 + std::ldexp(1.0, -(j + 2)), inner_r = 0.25 + std::ldexp(1.0, -(j + 3));
      const double lambda = outer_r / inner_r;
      const auto in = g.nodes_in(Rect(o, inner_r, a)), out = g.nodes_in(Rect(o, outer_r, a));
      const double log_ratio = theta * (log_reciprocal_norm(u, theta * gamma, in) - log_reciprocal_norm(u, theta, out)) -
                               std::log(geometric_sum(lambda, a)) + a.s_max() * p * std::log(inner_r);
      r.values.emplace_back(fmt::format("moser[{}]", j), std::exp(log_ratio));
      r.values.emplace_back(fmt::format("t[{}]", j), theta + p - 1.0);
      theta *= gamma;
    }
  }
  return r;
}

}  // namespace aniso
