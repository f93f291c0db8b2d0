#include "aniso/nonlocal.hpp"

#include <limits>
#include <stdexcept>

#include "aniso/parallel.hpp"

namespace aniso {

AxisWeights::AxisWeights(const Grid& g, const Anisotropy& a) {
  const long N = static_cast<long>(g.nodes_per_axis());
  w.resize(a.dim());
  tail.resize(a.dim());
  for (int k = 0; k < a.dim(); ++k) {
    w[k].assign(N, 0.0);
    tail[k].assign(N + 1, 0.0);
    for (long m = 1; m < N; ++m) w[k][m] = cell_weight(k, m, g.spacing(k), a);
    for (long M = 1; M <= N; ++M) tail[k][M] = cell_tail(k, M, g.spacing(k), a);
  }
}

void require_family_matches(const Grid& g, const KernelFamily& fam, const char* what) {
  if (!(g.anisotropy() == fam.anisotropy()))
    throw std::invalid_argument(std::string(what) + ": kernel and grid anisotropy differ");
}

namespace {

// Visits every other node on the axis-k line through f: (j, flat index, |m|).
template <class F>
void for_line(const Grid& g, std::size_t f, int k, F&& fn) {
  const long N = static_cast<long>(g.nodes_per_axis());
  const long i = g.axis_index(f, k);
  const long s = static_cast<long>(g.stride(k));
  const long base = static_cast<long>(f) - i * s;
  for (long j = 0; j < N; ++j) {
    if (j == i) continue;
    fn(j, static_cast<std::size_t>(base + j * s), std::labs(j - i));
  }
}

// Point with coordinate k replaced by the axis position t.
struct Probe {
  Point x, y;
  void reset(const Grid& g, std::size_t f) {
    x = g.point(f);
    y = x;
  }
  double coef(const KernelFamily& fam, int k, double t) {
    if (!fam.has_coefficient()) return 1.0;
    y[k] = t;
    const double c = fam.coefficient(x, y);
    y[k] = x[k];
    return c;
  }
};

double local_node_sum(const GridFunction& u, const GridFunction& v, const KernelFamily& fam,
                      const AxisWeights& W, const std::vector<char>& mask, std::size_t f,
                      bool global) {
  const Grid& g = u.grid();
  const double p = fam.anisotropy().p();
  const long N = static_cast<long>(g.nodes_per_axis());
  Probe pr;
  pr.reset(g, f);
  double acc = 0.0;
  for (int k = 0; k < g.dim(); ++k) {
    for_line(g, f, k, [&](long j, std::size_t y, long m) {
      const bool inside = mask[y] != 0;
      if (!inside && !global) return;
      const double c = pr.coef(fam, k, g.coord(k, j));
      const double term = W.w[k][m] * c * jp(u[y] - u[f], p) * (v[y] - v[f]);
      acc += inside ? term : 2.0 * term;
    });
    if (global && u.rule().has_far_field() && v.rule().has_far_field()) {
      const long i = g.axis_index(f, k);
      const double du = u.rule().far_value() - u[f];
      const double dv = v.rule().far_value() - v[f];
      if (du != 0.0 && dv != 0.0) {
        const double ju = jp(du, p) * dv;
        const double cr = pr.coef(fam, k, g.coord(k, N));
        const double cl = pr.coef(fam, k, g.coord(k, -1));
        acc += 2.0 * ju * (W.tail[k][N - i] * cr + W.tail[k][i + 1] * cl);
      }
    }
  }
  return acc;
}

double form(const GridFunction& u, const GridFunction& v, const KernelFamily& fam,
            const std::vector<char>& mask, bool global, const char* what) {
  require_same_grid(u, v, what);
  require_family_matches(u.grid(), fam, what);
  if (mask.size() != u.size()) throw std::invalid_argument(std::string(what) + ": mask size mismatch");
  AxisWeights W(u.grid(), fam.anisotropy());
  const double s = parallel::sum(u.size(), [&](std::size_t f) {
    return mask[f] ? local_node_sum(u, v, fam, W, mask, f, global) : 0.0;
  });
  return s * u.grid().cell_volume();
}

}  // namespace

double energy(const GridFunction& u, const GridFunction& v, const KernelFamily& fam,
              const std::vector<char>& domain) {
  return form(u, v, fam, domain, false, "energy");
}

double energy(const GridFunction& u, const GridFunction& v, const KernelFamily& fam, const Rect& domain) {
  return energy(u, v, fam, u.grid().mask(domain));
}

double weak_form(const GridFunction& u, const GridFunction& v, const KernelFamily& fam,
                 const std::vector<char>& domain) {
  return form(u, v, fam, domain, true, "weak_form");
}

double weak_form(const GridFunction& u, const GridFunction& v, const KernelFamily& fam, const Rect& domain) {
  return weak_form(u, v, fam, u.grid().mask(domain));
}

double apply_operator(const GridFunction& u, const KernelFamily& fam, std::size_t node) {
  const Grid& g = u.grid();
  require_family_matches(g, fam, "apply_operator");
  if (node >= g.size()) throw std::out_of_range("apply_operator: node out of range");
  if (g.on_boundary(node)) throw std::invalid_argument("apply_operator: boundary node has no symmetric pairing");
  const double p = fam.anisotropy().p();
  const long N = static_cast<long>(g.nodes_per_axis());
  Probe pr;
  pr.reset(g, node);
  const double ux = u[node];
  double acc = 0.0;
  for (int k = 0; k < g.dim(); ++k) {
    const double d = g.spacing(k);
    const long i = g.axis_index(node, k);
    const long s = static_cast<long>(g.stride(k));
    const long reach = u.rule().has_far_field() ? N : std::min(i, N - 1 - i);
    for (long m = 1; m <= reach; ++m) {
      const double w = cell_weight(k, m, d, fam.anisotropy());
      double pair = 0.0;
      for (int side : {1, -1}) {
        const long j = i + side * m;
        if (j < 0 || j >= N) continue;
        const std::size_t y = static_cast<std::size_t>(static_cast<long>(node) + side * m * s);
        pair += pr.coef(fam, k, g.coord(k, j)) * jp(u[y] - ux, p);
      }
      acc += w * pair;
    }
    if (u.rule().has_far_field()) {
      const double jg = jp(u.rule().far_value() - ux, p);
      if (jg != 0.0) {
        acc += jg * (cell_tail(k, N - i, d, fam.anisotropy()) * pr.coef(fam, k, g.coord(k, N)) +
                     cell_tail(k, i + 1, d, fam.anisotropy()) * pr.coef(fam, k, g.coord(k, -1)));
      }
    }
  }
  return acc;
}

double pairing_with_node(const GridFunction& u, const KernelFamily& fam, std::size_t node) {
  const Grid& g = u.grid();
  require_family_matches(g, fam, "pairing_with_node");
  const double p = fam.anisotropy().p();
  const long N = static_cast<long>(g.nodes_per_axis());
  Probe pr;
  pr.reset(g, node);
  double acc = 0.0;
  for (int k = 0; k < g.dim(); ++k) {
    const double d = g.spacing(k);
    for_line(g, node, k, [&](long j, std::size_t y, long m) {
      acc += cell_weight(k, m, d, fam.anisotropy()) * pr.coef(fam, k, g.coord(k, j)) * jp(u[y] - u[node], p);
    });
    if (u.rule().has_far_field()) {
      const long i = g.axis_index(node, k);
      const double jg = jp(u.rule().far_value() - u[node], p);
      acc += jg * (cell_tail(k, N - i, d, fam.anisotropy()) * pr.coef(fam, k, g.coord(k, N)) +
                   cell_tail(k, i + 1, d, fam.anisotropy()) * pr.coef(fam, k, g.coord(k, -1)));
    }
  }
  return -2.0 * g.cell_volume() * acc;
}

double tail_term(const GridFunction& u, const KernelFamily& fam, std::size_t node, const Rect& hole) {
  const Grid& g = u.grid();
  require_family_matches(g, fam, "tail_term");
  const Point x = g.point(node);
  if (!hole.contains(x)) throw std::invalid_argument("tail_term: node lies outside the hole");
  const Anisotropy& a = fam.anisotropy();
  const double p = a.p();
  const long N = static_cast<long>(g.nodes_per_axis());
  const double inf = std::numeric_limits<double>::infinity();
  auto neg = [&](double v) { return v < 0.0 ? std::pow(-v, p - 1.0) : 0.0; };
  Probe pr;
  pr.reset(g, node);
  double acc = 0.0;
  for (int k = 0; k < g.dim(); ++k) {
    const double d = g.spacing(k);
    const long i = g.axis_index(node, k);
    const long s = static_cast<long>(g.stride(k));
    for (int side : {1, -1}) {
      // Distance from x to the hole face on this side.
      const double gap = side > 0 ? hole.upper(k) - x[k] : x[k] - hole.lower(k);
      const long last = side > 0 ? N - 1 - i : i;  // farthest grid offset
      for (long m = 1; m <= last; ++m) {
        const double hi = (static_cast<double>(m) + 0.5) * d;
        if (hi <= gap) continue;
        const double lo = std::max((static_cast<double>(m) - 0.5) * d, gap);
        const std::size_t y = static_cast<std::size_t>(static_cast<long>(node) + side * m * s);
        const double val = neg(u[y]);
        if (val == 0.0) continue;
        acc += val * pr.coef(fam, k, g.coord(k, i + side * m)) * axis_mass(k, lo, hi, a);
      }
      if (u.rule().has_far_field()) {
        const double val = neg(u.rule().far_value());
        if (val == 0.0) continue;
        const long M = last + 1;
        const double lo = std::max((static_cast<double>(M) - 0.5) * d, gap);
        acc += val * pr.coef(fam, k, g.coord(k, i + side * M)) * axis_mass(k, lo, inf, a);
      }
    }
  }
  return acc;
}

}  // namespace aniso
