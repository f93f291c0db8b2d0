#include "aniso/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>

namespace aniso {

namespace {

double tol_for(double scale) { return kGeomSlack * std::max(1.0, std::abs(scale)); }

bool meets(const Interval& iv, double lo, double hi) { return iv.lo < hi && iv.hi > lo; }

void sort_dedupe(std::vector<Interval>& v) {
  std::sort(v.begin(), v.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  std::vector<Interval> out;
  for (const auto& iv : v) {
    if (!out.empty() && std::abs(out.back().lo - iv.lo) <= tol_for(iv.lo) &&
        std::abs(out.back().hi - iv.hi) <= tol_for(iv.hi))
      continue;
    out.push_back(iv);
  }
  v.swap(out);
}

// Children of one parent: N left-aligned pieces plus an optional trailing piece.
std::vector<Interval> children_of(const Interval& parent, double child_len, long n_pieces,
                                  bool trailing) {
  std::vector<Interval> kids;
  for (long i = 0; i < n_pieces; ++i) {
    const double lo = parent.lo + static_cast<double>(i) * child_len;
    kids.push_back({lo, lo + child_len});
  }
  if (trailing) kids.push_back({parent.hi - child_len, parent.hi});
  return kids;
}

void link_predecessors(LineGeneration& g, const LineGeneration& prev) {
  g.predecessor.assign(g.intervals.size(), -1);
  const auto& P = prev.intervals;
  for (std::size_t i = 0; i < g.intervals.size(); ++i) {
    const Interval& iv = g.intervals[i];
    const double t = tol_for(iv.hi);
    // Parents are sorted by lo and share one length, so scan from the first
    // parent whose hi can reach iv.hi.
    const double plen = P.empty() ? 0.0 : P.front().length();
    auto it = std::lower_bound(P.begin(), P.end(), iv.hi - plen - t,
                               [](const Interval& p, double x) { return p.lo < x; });
    for (std::size_t j = static_cast<std::size_t>(it - P.begin()); j < P.size(); ++j) {
      if (P[j].lo > iv.lo + t) break;
      if (P[j].hi >= iv.hi - t) {
        g.predecessor[i] = static_cast<int>(j);
        break;
      }
    }
  }
}

}  // namespace

std::vector<LineGeneration> dyadic_line(double a, int kmin, int kmax, double range_lo,
                                        double range_hi, double base) {
  if (kmin > kmax) throw std::invalid_argument("dyadic_line: empty generation range");
  if (!(a >= 1.0)) throw std::invalid_argument("dyadic_line: exponent must be >= 1");
  if (!(range_hi > range_lo)) throw std::invalid_argument("dyadic_line: empty range");
  if (!(base > 0.0)) throw std::invalid_argument("dyadic_line: base length must be positive");

  const double ratio = std::pow(2.0, a);
  const long n_pieces = static_cast<long>(std::floor(ratio + 1e-12));
  const bool integer_ratio = std::abs(ratio - std::round(ratio)) <= 1e-12 * ratio;

  const int lo_gen = std::min(kmin, 0);
  const int hi_gen = std::max(kmax, 0);
  std::map<int, LineGeneration> gens;

  // Generation 0 and the negative generations: translates [P z, P z + L).
  auto translates = [&](int k, double period, double len) {
    LineGeneration g;
    g.k = k;
    const long z0 = static_cast<long>(std::floor((range_lo - len) / period)) - 1;
    const long z1 = static_cast<long>(std::ceil(range_hi / period)) + 1;
    for (long z = z0; z <= z1; ++z) {
      Interval iv{period * static_cast<double>(z), period * static_cast<double>(z) + len};
      if (meets(iv, range_lo, range_hi)) g.intervals.push_back(iv);
    }
    return g;
  };
  gens[0] = translates(0, base, base);
  {
    double period = base;
    double len = base;
    for (int j = 1; j <= -lo_gen; ++j) {
      const double next_len = base * std::pow(2.0, j * a);
      const long K = static_cast<long>(std::floor((next_len - len) / period + 1e-12));
      period = static_cast<double>(K + 1) * period;
      len = next_len;
      gens[-j] = translates(-j, period, len);
    }
  }

  for (int k = 0; k < hi_gen; ++k) {
    const LineGeneration& parent = gens[k];
    const double child_len = base * std::pow(2.0, -(k + 1) * a);
    LineGeneration g;
    g.k = k + 1;
    const auto& P = parent.intervals;
    for (std::size_t i = 0; i < P.size(); ++i) {
      auto kids = children_of(P[i], child_len, n_pieces, !integer_ratio);
      std::size_t keep = kids.size();
      if (i + 1 < P.size() && P[i + 1].lo < P[i].hi - tol_for(P[i].hi)) {
        const double b_lo = P[i + 1].lo;
        for (std::size_t c = 0; c < kids.size(); ++c) {
          if (kids[c].hi >= b_lo - tol_for(b_lo)) {
            keep = c + 1;
            break;
          }
        }
      }
      for (std::size_t c = 0; c < keep; ++c)
        if (meets(kids[c], range_lo, range_hi)) g.intervals.push_back(kids[c]);
    }
    sort_dedupe(g.intervals);
    gens[k + 1] = std::move(g);
  }

  std::vector<LineGeneration> out;
  for (int k = kmin; k <= kmax; ++k) {
    LineGeneration g = gens.at(k);
    sort_dedupe(g.intervals);
    if (k > kmin) link_predecessors(g, out.back());
    else g.predecessor.assign(g.intervals.size(), -1);
    out.push_back(std::move(g));
  }
  return out;
}

bool BoxRect::contains_point(const Point& x) const {
  for (std::size_t j = 0; j < lo.size(); ++j)
    if (!(x[j] >= lo[j] && x[j] < hi[j])) return false;
  return true;
}

const Generation& DyadicTree::generation(int k) const {
  for (const auto& g : generations)
    if (g.k == k) return g;
  throw std::out_of_range("dyadic tree: generation not present");
}

std::size_t DyadicTree::size() const {
  std::size_t s = 0;
  for (const auto& g : generations) s += g.rects.size();
  return s;
}

DyadicTree build_dyadic_tree(const Anisotropy& a, const Rect& box, int kmin, int kmax,
                             double base) {
  const int n = a.dim();
  if (box.dim() != n) throw std::invalid_argument("dyadic tree: box dimension mismatch");
  DyadicTree tree;
  tree.base = base;
  for (int j = 0; j < n; ++j) {
    tree.box_lo.push_back(box.lower(j));
    tree.box_hi.push_back(box.upper(j));
  }
  std::vector<std::vector<LineGeneration>> lines;
  for (int j = 0; j < n; ++j)
    lines.push_back(dyadic_line(a.axis_exponent(j), kmin, kmax, tree.box_lo[j], tree.box_hi[j], base));

  for (int gi = 0; gi <= kmax - kmin; ++gi) {
    Generation g;
    g.k = kmin + gi;
    std::vector<std::size_t> counts(n), prev_counts(n);
    std::size_t total = 1;
    for (int j = 0; j < n; ++j) {
      counts[j] = lines[j][gi].intervals.size();
      total *= counts[j];
      if (gi > 0) prev_counts[j] = lines[j][gi - 1].intervals.size();
    }
    g.rects.reserve(total);
    g.predecessor.reserve(total);
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
      // Row-major multi-index, last axis fastest.
      std::size_t rem = flat;
      for (int j = n - 1; j >= 0; --j) {
        idx[j] = rem % counts[j];
        rem /= counts[j];
      }
      BoxRect r;
      long pred = gi > 0 ? 0 : -1;
      for (int j = 0; j < n; ++j) {
        const Interval& iv = lines[j][gi].intervals[idx[j]];
        r.lo.push_back(iv.lo);
        r.hi.push_back(iv.hi);
        if (pred >= 0) {
          const int pj = lines[j][gi].predecessor[idx[j]];
          pred = pj < 0 ? -1 : pred * static_cast<long>(prev_counts[j]) + pj;
        }
      }
      g.rects.push_back(std::move(r));
      g.predecessor.push_back(pred);
    }
    tree.generations.push_back(std::move(g));
  }
  return tree;
}

std::vector<BoxRect> dyadic_generation(int k, const Anisotropy& a, const Rect& box, double base) {
  return build_dyadic_tree(a, box, k, k, base).generations.front().rects;
}

namespace {

std::string describe(const BoxRect& r) {
  std::string s = "[";
  for (std::size_t j = 0; j < r.lo.size(); ++j) {
    if (j) s += " x ";
    s += fmt::format("[{:.12g}, {:.12g})", r.lo[j], r.hi[j]);
  }
  return s + "]";
}

std::string describe(const Point& x) {
  std::string s = "(";
  for (std::size_t j = 0; j < x.size(); ++j) s += (j ? ", " : "") + fmt::format("{:.12g}", x[j]);
  return s + ")";
}

bool rect_within(const BoxRect& inner, const BoxRect& outer) {
  for (std::size_t j = 0; j < inner.lo.size(); ++j) {
    if (inner.lo[j] < outer.lo[j] - tol_for(outer.lo[j])) return false;
    if (inner.hi[j] > outer.hi[j] + tol_for(outer.hi[j])) return false;
  }
  return true;
}

bool strictly_within(const BoxRect& inner, const BoxRect& outer) {
  if (!rect_within(inner, outer)) return false;
  return !rect_within(outer, inner);
}

// Spatial hash for one generation with bucket size equal to the largest side.
class GenerationIndex {
 public:
  GenerationIndex(const Generation& g, const std::vector<double>& origin) : origin_(origin) {
    const std::size_t n = origin.size();
    side_.assign(n, 0.0);
    for (const auto& r : g.rects)
      for (std::size_t j = 0; j < n; ++j) side_[j] = std::max(side_[j], r.hi[j] - r.lo[j]);
    for (std::size_t i = 0; i < g.rects.size(); ++i) {
      const auto& r = g.rects[i];
      std::vector<long> b0(n), b1(n);
      for (std::size_t j = 0; j < n; ++j) {
        b0[j] = bucket(r.lo[j], j);
        b1[j] = bucket(r.hi[j], j);
      }
      std::vector<long> b = b0;
      while (true) {
        buckets_[key(b)].push_back(i);
        std::size_t j = 0;
        for (; j < n; ++j) {
          if (++b[j] <= b1[j]) break;
          b[j] = b0[j];
        }
        if (j == n) break;
      }
    }
  }

  template <class F>
  void for_each_candidate(const Point& x, F&& f) const {
    std::vector<long> b(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) b[j] = bucket(x[j], j);
    auto it = buckets_.find(key(b));
    if (it == buckets_.end()) return;
    for (std::size_t i : it->second) f(i);
  }

 private:
  long bucket(double x, std::size_t j) const {
    return static_cast<long>(std::floor((x - origin_[j]) / side_[j]));
  }
  static std::size_t key(const std::vector<long>& b) {
    std::size_t h = 1469598103934665603ull;
    for (long v : b) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }

  std::vector<double> origin_;
  std::vector<double> side_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> buckets_;
};

// Largest antichain of the containment order on `rects`, via Dilworth:
// |S| minus a maximum matching in the strict-containment bipartite graph.
std::size_t max_antichain(const std::vector<const BoxRect*>& rects) {
  const std::size_t m = rects.size();
  std::vector<std::vector<std::size_t>> adj(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && strictly_within(*rects[i], *rects[j])) adj[i].push_back(j);
  std::vector<long> match_right(m, -1);
  std::size_t matching = 0;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<char> seen(m, 0);
    std::function<bool(std::size_t)> augment = [&](std::size_t u) {
      for (std::size_t v : adj[u]) {
        if (seen[v]) continue;
        seen[v] = 1;
        if (match_right[v] < 0 || augment(static_cast<std::size_t>(match_right[v]))) {
          match_right[v] = static_cast<long>(u);
          return true;
        }
      }
      return false;
    };
    if (augment(i)) ++matching;
  }
  return m - matching;
}

}  // namespace

DyadicReport dyadic_check(const DyadicTree& tree, const Anisotropy& a, std::size_t max_witnesses) {
  DyadicReport rep;
  const std::size_t n = tree.box_lo.size();
  if (static_cast<int>(n) != a.dim()) throw std::invalid_argument("dyadic_check: dimension mismatch");
  const std::size_t cap = std::size_t{1} << n;
  auto witness = [&](std::string s) {
    if (rep.witnesses.size() < max_witnesses) rep.witnesses.push_back(std::move(s));
  };

  // (ii) interior of every rectangle is M_{2^{-k}} of its midpoint.
  for (const auto& g : tree.generations) {
    const double r_expected = std::pow(2.0, -g.k);
    for (const auto& r : g.rects) {
      for (std::size_t j = 0; j < n; ++j) {
        const double hw = 0.5 * (r.hi[j] - r.lo[j]);
        const double rj = std::pow(hw, 1.0 / a.axis_exponent(static_cast<int>(j)));
        if (std::abs(rj - r_expected) > 1e-10 * r_expected) {
          rep.radius = false;
          witness(fmt::format("(ii) gen {}: {} has metric radius {:.12g} on axis {}, expected {:.12g}",
                              g.k, describe(r), rj, j, r_expected));
          break;
        }
      }
    }
  }

  // (iii) predecessor containment.
  for (std::size_t gi = 1; gi < tree.generations.size(); ++gi) {
    const auto& g = tree.generations[gi];
    const auto& prev = tree.generations[gi - 1];
    for (std::size_t i = 0; i < g.rects.size(); ++i) {
      const long p = g.predecessor[i];
      if (p >= 0 && static_cast<std::size_t>(p) < prev.rects.size() &&
          rect_within(g.rects[i], prev.rects[p]))
        continue;
      bool found = false;
      for (const auto& q : prev.rects)
        if (rect_within(g.rects[i], q)) {
          found = true;
          break;
        }
      if (!found) {
        rep.nested = false;
        witness(fmt::format("(iii) gen {}: {} lies in no generation-{} rectangle", g.k,
                            describe(g.rects[i]), prev.k));
      }
    }
  }

  // Arrangement cells of all faces inside the bounding box.
  std::vector<std::vector<double>> cuts(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto& c = cuts[j];
    c.push_back(tree.box_lo[j]);
    c.push_back(tree.box_hi[j]);
    for (const auto& g : tree.generations)
      for (const auto& r : g.rects)
        for (double v : {r.lo[j], r.hi[j]})
          if (v > tree.box_lo[j] && v < tree.box_hi[j]) c.push_back(v);
    std::sort(c.begin(), c.end());
    std::vector<double> u;
    for (double v : c)
      if (u.empty() || v - u.back() > tol_for(v)) u.push_back(v);
    c.swap(u);
  }

  std::vector<GenerationIndex> index;
  for (const auto& g : tree.generations) index.emplace_back(g, tree.box_lo);

  std::vector<std::size_t> cell(n, 0);
  std::vector<std::size_t> ncells(n);
  for (std::size_t j = 0; j < n; ++j) ncells[j] = cuts[j].size() - 1;
  Point x(n);
  std::vector<const BoxRect*> members;
  while (true) {
    for (std::size_t j = 0; j < n; ++j) x[j] = 0.5 * (cuts[j][cell[j]] + cuts[j][cell[j] + 1]);
    ++rep.cells_checked;
    members.clear();
    for (std::size_t gi = 0; gi < tree.generations.size(); ++gi) {
      const auto& g = tree.generations[gi];
      std::size_t count = 0;
      index[gi].for_each_candidate(x, [&](std::size_t i) {
        if (g.rects[i].contains_point(x)) {
          ++count;
          members.push_back(&g.rects[i]);
        }
      });
      if (count == 0) {
        rep.covers = false;
        witness(fmt::format("(i) gen {}: point {} is not covered", g.k, describe(x)));
      }
      if (count > cap) {
        rep.bounded_overlap = false;
        witness(fmt::format("(iv) gen {}: point {} lies in {} rectangles", g.k, describe(x), count));
      }
    }
    if (members.size() > cap) {
      const std::size_t w = max_antichain(members);
      if (w > cap) {
        rep.chain = false;
        witness(fmt::format("(v) point {}: {} pairwise-intersecting rectangles without containment",
                            describe(x), w));
      }
    }
    std::size_t j = 0;
    for (; j < n; ++j) {
      if (++cell[j] < ncells[j]) break;
      cell[j] = 0;
    }
    if (j == n) break;
  }
  return rep;
}

void write_dyadic_tree(std::ostream& os, const DyadicTree& tree) {
  for (const auto& g : tree.generations) {
    for (const auto& r : g.rects) {
      std::string line = fmt::format("gen {}:", g.k);
      for (std::size_t j = 0; j < r.lo.size(); ++j)
        line += fmt::format(" {:.17g} {:.17g}", r.lo[j], r.hi[j]);
      os << line << '\n';
    }
  }
}

DyadicTree read_dyadic_tree(std::istream& is, const std::vector<double>& box_lo,
                            const std::vector<double>& box_hi) {
  DyadicTree tree;
  tree.box_lo = box_lo;
  tree.box_hi = box_hi;
  const std::size_t n = box_lo.size();
  std::map<int, Generation> gens;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    int k = 0;
    char colon = 0;
    if (!(ls >> tag >> k >> colon) || tag != "gen" || colon != ':')
      throw std::runtime_error(fmt::format("dyadic tree line {}: expected 'gen k:'", lineno));
    BoxRect r;
    for (std::size_t j = 0; j < n; ++j) {
      double lo = 0, hi = 0;
      if (!(ls >> lo >> hi))
        throw std::runtime_error(fmt::format("dyadic tree line {}: expected {} coordinates", lineno, 2 * n));
      r.lo.push_back(lo);
      r.hi.push_back(hi);
    }
    auto& g = gens[k];
    g.k = k;
    g.rects.push_back(std::move(r));
  }
  if (gens.empty()) throw std::runtime_error("dyadic tree: no rectangles");
  for (auto& [k, g] : gens) {
    g.predecessor.assign(g.rects.size(), -1);
    if (!tree.generations.empty()) {
      const auto& prev = tree.generations.back();
      for (std::size_t i = 0; i < g.rects.size(); ++i) {
        long best = -1;
        for (std::size_t q = 0; q < prev.rects.size(); ++q) {
          if (!rect_within(g.rects[i], prev.rects[q])) continue;
          if (best < 0 || prev.rects[q].lo < prev.rects[best].lo) best = static_cast<long>(q);
        }
        g.predecessor[i] = best;
      }
    }
    tree.generations.push_back(std::move(g));
  }
  return tree;
}

}  // namespace aniso
