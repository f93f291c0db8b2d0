#include "aniso/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "aniso/nonlocal.hpp"
#include "aniso/parallel.hpp"

namespace aniso {

SolverMethod parse_solver_method(const std::string& name) {
  if (name == "gauss-seidel" || name == "gs") return SolverMethod::GaussSeidel;
  if (name == "newton") return SolverMethod::Newton;
  if (name == "hybrid") return SolverMethod::Hybrid;
  throw std::invalid_argument("unknown solver method '" + name + "' (gauss-seidel, newton, hybrid)");
}

std::string to_string(SolverMethod m) {
  switch (m) {
    case SolverMethod::GaussSeidel: return "gauss-seidel";
    case SolverMethod::Newton: return "newton";
    case SolverMethod::Hybrid: return "hybrid";
  }
  return "?";
}

void DirichletProblem::validate() const {
  const Anisotropy& a = family.anisotropy();
  if (!(a.p() > 1.0)) throw std::invalid_argument("DirichletProblem: p must exceed 1");
  require_same_grid(f, g, "DirichletProblem");
  require_family_matches(f.grid(), family, "DirichletProblem");
  if (domain.dim() != a.dim()) throw std::invalid_argument("DirichletProblem: domain dimension mismatch");
  if (!(q > static_cast<double>(a.dim())))
    throw std::invalid_argument(fmt::format("DirichletProblem: q = {} must exceed n = {}", q, a.dim()));
  if (!(tol > 0.0)) throw std::invalid_argument("DirichletProblem: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("DirichletProblem: max_iter must be positive");
  if (warmup_sweeps < 0) throw std::invalid_argument("DirichletProblem: warmup_sweeps must be nonnegative");
  f.check_finite();
  g.check_finite();
  if (f.grid().nodes_in(domain).empty()) throw std::invalid_argument("DirichletProblem: domain holds no grid nodes");
}

DirichletProblem make_problem(KernelFamily fam, GridFunction f, GridFunction g) {
  const int n = fam.anisotropy().dim();
  Rect dom(Point(static_cast<std::size_t>(n), 0.0), 1.0, fam.anisotropy());
  return DirichletProblem{std::move(fam), std::move(f), std::move(g), std::move(dom), 2.0 * n};
}

namespace {

struct Link {
  std::size_t node;  // flat index of the partner
  double weight;     // w_k(m) * coefficient
  bool inside;       // partner is a domain node
};

// The discrete problem restricted to domain nodes: for every domain node its
// full list of line partners, the lumped far-field weight and the data.
class Discrete {
 public:
  explicit Discrete(const DirichletProblem& prob) : prob_(prob), grid_(prob.f.grid()) {
    prob.validate();
    p_ = prob.family.anisotropy().p();
    dv_ = grid_.cell_volume();
    const std::vector<char> mask = grid_.mask(prob.domain);
    nodes_ = grid_.nodes_in(prob.domain);
    local_.assign(grid_.size(), npos);
    for (std::size_t i = 0; i < nodes_.size(); ++i) local_[nodes_[i]] = i;
    const AxisWeights W(grid_, prob.family.anisotropy());
    const long N = static_cast<long>(grid_.nodes_per_axis());
    const bool far = prob.g.rule().has_far_field();
    g_far_ = prob.g.rule().far_value();
    links_.resize(nodes_.size());
    far_.assign(nodes_.size(), 0.0);
    fnorm_ = 0.0;
    for (double v : prob.f.values()) fnorm_ = std::max(fnorm_, std::abs(v));
    parallel::for_chunks(nodes_.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t li = b; li < e; ++li) {
        const std::size_t f = nodes_[li];
        const Point x = grid_.point(f);
        Point y = x;
        auto coef = [&](int k, double t) {
          if (!prob.family.has_coefficient()) return 1.0;
          y[k] = t;
          const double c = prob.family.coefficient(x, y);
          y[k] = x[k];
          return c;
        };
        auto& L = links_[li];
        L.reserve(static_cast<std::size_t>(grid_.dim() * (N - 1)));
        for (int k = 0; k < grid_.dim(); ++k) {
          const long i = grid_.axis_index(f, k);
          const long s = static_cast<long>(grid_.stride(k));
          const long base = static_cast<long>(f) - i * s;
          for (long j = 0; j < N; ++j) {
            if (j == i) continue;
            const std::size_t yn = static_cast<std::size_t>(base + j * s);
            L.push_back({yn, W.w[k][std::labs(j - i)] * coef(k, grid_.coord(k, j)), mask[yn] != 0});
          }
          if (far)
            far_[li] += W.tail[k][N - i] * coef(k, grid_.coord(k, N)) +
                        W.tail[k][i + 1] * coef(k, grid_.coord(k, -1));
        }
      }
    });
  }

  std::size_t count() const { return nodes_.size(); }
  const std::vector<std::size_t>& nodes() const { return nodes_; }
  double p() const { return p_; }
  double fnorm() const { return fnorm_; }

  // Full-grid vector with the domain values of `inside` and the datum elsewhere.
  std::vector<double> assemble(const std::vector<double>& inside) const {
    std::vector<double> v = prob_.g.values();
    for (std::size_t li = 0; li < nodes_.size(); ++li) v[nodes_[li]] = inside[nodes_[li]];
    return v;
  }

  // sum_y a_y J_p(v_y - v_i) + a_far J_p(g_far - v_i) at domain node li, with v_i = t.
  double line_sum(const std::vector<double>& v, std::size_t li, double t) const {
    double acc = 0.0;
    for (const Link& l : links_[li]) acc += l.weight * jp(v[l.node] - t, p_);
    if (far_[li] != 0.0) acc += far_[li] * jp(g_far_ - t, p_);
    return acc;
  }

  // E(v, phi_i) - (f, phi_i).
  double gradient(const std::vector<double>& v, std::size_t li) const {
    const std::size_t f = nodes_[li];
    return -2.0 * dv_ * line_sum(v, li, v[f]) - prob_.f[f] * dv_;
  }

  std::vector<double> gradient(const std::vector<double>& v) const {
    std::vector<double> G(nodes_.size());
    parallel::for_chunks(nodes_.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t li = b; li < e; ++li) G[li] = gradient(v, li);
    });
    return G;
  }

  double residual_of(const std::vector<double>& G) const {
    double r = 0.0;
    for (double x : G) r = std::max(r, std::abs(x));
    return r / (1.0 + fnorm_);
  }

  double objective(const std::vector<double>& v) const {
    const double e = parallel::sum(nodes_.size(), [&](std::size_t li) {
      const std::size_t f = nodes_[li];
      double acc = 0.0;
      for (const Link& l : links_[li]) {
        const double d = std::pow(std::abs(v[l.node] - v[f]), p_);
        acc += l.inside ? l.weight * d : 2.0 * l.weight * d;
      }
      if (far_[li] != 0.0) acc += 2.0 * far_[li] * std::pow(std::abs(g_far_ - v[f]), p_);
      return acc / p_ - prob_.f[f] * v[f];
    });
    return e * dv_;
  }

  // Solves the one-node equation line_sum(t) = -f_i / 2 in place; returns the new value.
  double relax(std::vector<double>& v, std::size_t li) const {
    const std::size_t f = nodes_[li];
    const double target = -0.5 * prob_.f[f];
    double W = far_[li], vmin = far_[li] != 0.0 ? g_far_ : v[f], vmax = vmin;
    for (const Link& l : links_[li]) {
      W += l.weight;
      vmin = std::min(vmin, v[l.node]);
      vmax = std::max(vmax, v[l.node]);
    }
    if (!(W > 0.0)) return v[f];
    auto jinv = [&](double y) { return std::copysign(std::pow(std::abs(y), 1.0 / (p_ - 1.0)), y); };
    // phi(t) = line_sum(t) - target is strictly decreasing.
    double lo = vmin - jinv(std::max(target, 0.0) / W);
    double hi = vmax + jinv(std::max(-target, 0.0) / W);
    double t = std::clamp(v[f], lo, hi);
    for (int it = 0; it < 200; ++it) {
      double phi = -target, dphi = 0.0, scale = std::abs(target);
      for (const Link& l : links_[li]) {
        const double d = v[l.node] - t;
        const double j = jp(d, p_);
        phi += l.weight * j;
        scale += l.weight * std::abs(j);
        if (d != 0.0) dphi -= l.weight * (p_ - 1.0) * std::pow(std::abs(d), p_ - 2.0);
      }
      if (far_[li] != 0.0) {
        const double d = g_far_ - t;
        const double j = jp(d, p_);
        phi += far_[li] * j;
        scale += far_[li] * std::abs(j);
        if (d != 0.0) dphi -= far_[li] * (p_ - 1.0) * std::pow(std::abs(d), p_ - 2.0);
      }
      if (std::abs(phi) <= 1e-15 * scale) break;
      if (phi > 0.0) lo = t; else hi = t;
      if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(t))) break;
      double next = (dphi < 0.0 && std::isfinite(dphi)) ? t - phi / dphi : lo - 1.0;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      t = next;
    }
    v[f] = t;
    return t;
  }

  void sweep(std::vector<double>& v) const {
    for (std::size_t li = 0; li < nodes_.size(); ++li) relax(v, li);
  }

  // Damped Newton step; returns false when no descent was achieved.
  bool newton_step(std::vector<double>& v, const std::vector<double>& G, double J0, double rel) const {
    const std::size_t m = nodes_.size();
    double vmin = g_far_, vmax = g_far_;
    for (double x : v) { vmin = std::min(vmin, x); vmax = std::max(vmax, x); }
    const double range = vmax > vmin ? vmax - vmin : 1.0;
    const double eps = range * (p_ < 2.0 ? 1e-6 : 1e-4);
    auto slope = [&](double d) {
      if (p_ == 2.0) return 1.0;
      return (p_ - 1.0) * std::pow(std::max(std::abs(d), eps), p_ - 2.0);
    };
    std::vector<Eigen::Triplet<double>> trip;
    std::size_t reserve = 0;
    for (const auto& L : links_) reserve += L.size() + 1;
    trip.reserve(reserve);
    for (std::size_t li = 0; li < m; ++li) {
      const std::size_t f = nodes_[li];
      double diag = 0.0;
      for (const Link& l : links_[li]) {
        const double h = 2.0 * dv_ * l.weight * slope(v[l.node] - v[f]);
        diag += h;
        if (l.inside) trip.emplace_back(static_cast<int>(li), static_cast<int>(local_[l.node]), -h);
      }
      if (far_[li] != 0.0) diag += 2.0 * dv_ * far_[li] * slope(g_far_ - v[f]);
      trip.emplace_back(static_cast<int>(li), static_cast<int>(li), diag);
    }
    Eigen::SparseMatrix<double> H(static_cast<int>(m), static_cast<int>(m));
    H.setFromTriplets(trip.begin(), trip.end());
    Eigen::VectorXd rhs(static_cast<int>(m));
    for (std::size_t li = 0; li < m; ++li) rhs[static_cast<int>(li)] = -G[li];
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(std::clamp(rel, 1e-14, 1e-2));
    cg.setMaxIterations(static_cast<int>(std::max<std::size_t>(100, 10 * m)));
    cg.compute(H);
    const Eigen::VectorXd d = cg.solve(rhs);
    if (!d.allFinite()) return false;
    double slope0 = 0.0;
    for (std::size_t li = 0; li < m; ++li) slope0 += G[li] * d[static_cast<int>(li)];
    if (!(slope0 < 0.0)) return false;
    std::vector<double> trial = v;
    for (double step = 1.0; step > 1e-12; step *= 0.5) {
      for (std::size_t li = 0; li < m; ++li) trial[nodes_[li]] = v[nodes_[li]] + step * d[static_cast<int>(li)];
      const double J1 = objective(trial);
      if (J1 <= J0 + 1e-4 * step * slope0 && J1 < J0) {
        v.swap(trial);
        return true;
      }
    }
    return false;
  }

  // Interior values interpolated linearly along each axis between the
  // nearest exterior nodes, averaged over the axes.
  std::vector<double> initial_guess() const {
    std::vector<double> v = prob_.g.values();
    const long N = static_cast<long>(grid_.nodes_per_axis());
    for (std::size_t f : nodes_) {
      double acc = 0.0;
      int used = 0;
      for (int k = 0; k < grid_.dim(); ++k) {
        const long i = grid_.axis_index(f, k);
        const long s = static_cast<long>(grid_.stride(k));
        long lo = i, hi = i;
        while (lo >= 0 && local_[static_cast<std::size_t>(static_cast<long>(f) + (lo - i) * s)] != npos) --lo;
        while (hi < N && local_[static_cast<std::size_t>(static_cast<long>(f) + (hi - i) * s)] != npos) ++hi;
        const double a = lo >= 0 ? prob_.g[static_cast<std::size_t>(static_cast<long>(f) + (lo - i) * s)] : g_far_;
        const double b = hi < N ? prob_.g[static_cast<std::size_t>(static_cast<long>(f) + (hi - i) * s)] : g_far_;
        const double t = static_cast<double>(i - lo) / static_cast<double>(hi - lo);
        acc += (1.0 - t) * a + t * b;
        ++used;
      }
      v[f] = acc / used;
    }
    return v;
  }

 private:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  const DirichletProblem& prob_;
  const Grid& grid_;
  double p_ = 2.0, dv_ = 1.0, g_far_ = 0.0, fnorm_ = 0.0;
  std::vector<std::size_t> nodes_, local_;
  std::vector<std::vector<Link>> links_;
  std::vector<double> far_;
};

void require_on_problem_grid(const GridFunction& u, const DirichletProblem& prob, const char* what) {
  require_same_grid(u, prob.f, what);
}

}  // namespace

GridFunction with_exterior(const GridFunction& inside, const DirichletProblem& prob) {
  require_on_problem_grid(inside, prob, "with_exterior");
  GridFunction out = prob.g;
  for (std::size_t f : prob.f.grid().nodes_in(prob.domain)) out[f] = inside[f];
  return out;
}

double objective(const GridFunction& v, const DirichletProblem& prob) {
  require_on_problem_grid(v, prob, "objective");
  Discrete D(prob);
  return D.objective(D.assemble(v.values()));
}

std::vector<double> residuals(const GridFunction& u, const DirichletProblem& prob) {
  require_on_problem_grid(u, prob, "residuals");
  Discrete D(prob);
  return D.gradient(D.assemble(u.values()));
}

double normalized_residual(const GridFunction& u, const DirichletProblem& prob) {
  require_on_problem_grid(u, prob, "normalized_residual");
  Discrete D(prob);
  return D.residual_of(D.gradient(D.assemble(u.values())));
}

SupersolutionReport check_supersolution(const GridFunction& u, const DirichletProblem& prob) {
  require_on_problem_grid(u, prob, "check_supersolution");
  Discrete D(prob);
  const std::vector<double> G = D.gradient(D.assemble(u.values()));
  SupersolutionReport rep;
  rep.nodes = G.size();
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t li = 0; li < G.size(); ++li) {
    const double m = G[li] / (1.0 + D.fnorm());
    if (m < rep.worst_margin) {
      rep.worst_margin = m;
      rep.worst_node = D.nodes()[li];
    }
  }
  rep.holds = rep.worst_margin >= -prob.tol;
  return rep;
}

SolveResult solve(const DirichletProblem& prob) {
  Discrete D(prob);
  std::vector<double> v = D.initial_guess();
  SolveResult res{GridFunction(prob.g.grid(), prob.g.rule()), false, 0, 0.0, {}};
  std::vector<double> G = D.gradient(v);
  double r = D.residual_of(G);
  double J = D.objective(v);
  res.log.push_back({0, J, r});
  const double r0 = r > 0.0 ? r : 1.0;
  int it = 0;
  while (r > prob.tol && it < prob.max_iter) {
    ++it;
    const bool gs = prob.method == SolverMethod::GaussSeidel ||
                    (prob.method == SolverMethod::Hybrid && it <= prob.warmup_sweeps);
    bool moved = false;
    if (!gs) moved = D.newton_step(v, G, J, 0.1 * std::min(1.0, r / r0));
    if (!moved) D.sweep(v);
    G = D.gradient(v);
    r = D.residual_of(G);
    J = D.objective(v);
    res.log.push_back({it, J, r});
  }
  res.u = GridFunction(prob.g.grid(), std::move(v), prob.g.rule());
  res.iterations = it;
  res.residual = r;
  res.converged = r <= prob.tol;
  if (!res.converged)
    throw ConvergenceError(fmt::format("solve: no convergence after {} iterations (residual {:.3e}, tol {:.1e})",
                                       it, r, prob.tol),
                           std::move(res));
  return res;
}

void write_solver_log_csv(std::ostream& os, const std::vector<SolverLogEntry>& log) {
  os << "iteration,J,residual\n";
  for (const auto& e : log) os << fmt::format("{},{:.17g},{:.17g}\n", e.iteration, e.objective, e.residual);
}

}  // namespace aniso
