#include "aniso/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "aniso/dyadic.hpp"
#include "aniso/parallel.hpp"

namespace aniso {

MaximalVariant parse_maximal_variant(const std::string& name) {
  if (name == "hl") return MaximalVariant::HL;
  if (name == "sharp") return MaximalVariant::Sharp;
  if (name == "dyadic") return MaximalVariant::Dyadic;
  throw std::invalid_argument("unknown maximal variant '" + name + "' (hl, sharp, dyadic)");
}

std::string to_string(MaximalVariant v) {
  switch (v) {
    case MaximalVariant::HL: return "hl";
    case MaximalVariant::Sharp: return "sharp";
    case MaximalVariant::Dyadic: return "dyadic";
  }
  return "?";
}

namespace {

constexpr double kIndexSlack = 1e-9;

// Summed-area table over the node lattice; index ranges are half-open.
class SummedArea {
 public:
  SummedArea(const Grid& g, const std::vector<double>& a) : n_(g.dim()), N_(static_cast<long>(g.nodes_per_axis())) {
    stride_.assign(n_, 1);
    for (int k = n_ - 2; k >= 0; --k) stride_[k] = stride_[k + 1] * (N_ + 1);
    s_.assign(static_cast<std::size_t>(stride_[0] * (N_ + 1)), 0.0);
    for (std::size_t f = 0; f < g.size(); ++f) {
      long idx = 0;
      for (int k = 0; k < n_; ++k) idx += (g.axis_index(f, k) + 1) * stride_[k];
      s_[static_cast<std::size_t>(idx)] = a[f];
    }
    for (int k = 0; k < n_; ++k)
      for (std::size_t i = 0; i < s_.size(); ++i) {
        const long ik = (static_cast<long>(i) / stride_[k]) % (N_ + 1);
        if (ik > 0) s_[i] += s_[i - static_cast<std::size_t>(stride_[k])];
      }
  }

  double sum(const std::vector<long>& lo, const std::vector<long>& hi) const {
    for (int k = 0; k < n_; ++k)
      if (hi[k] <= lo[k]) return 0.0;
    double acc = 0.0;
    for (unsigned mask = 0; mask < (1u << n_); ++mask) {
      long idx = 0;
      int lows = 0;
      for (int k = 0; k < n_; ++k) {
        if (mask & (1u << k)) idx += hi[k] * stride_[k];
        else {
          idx += lo[k] * stride_[k];
          ++lows;
        }
      }
      acc += (lows % 2 ? -1.0 : 1.0) * s_[static_cast<std::size_t>(idx)];
    }
    return acc;
  }

 private:
  int n_;
  long N_;
  std::vector<long> stride_;
  std::vector<double> s_;
};

// Half-open lattice index range of the nodes with lo <= coordinate < hi.
std::pair<long, long> lattice_range(const Grid& g, int k, double lo, double hi) {
  const double H = g.half_extent(k), d = g.spacing(k);
  return {static_cast<long>(std::ceil((lo + H) / d - kIndexSlack)),
          static_cast<long>(std::ceil((hi + H) / d - kIndexSlack))};
}

// Visits every flat index of the clipped box [lo, hi).
template <class F>
void for_box(const Grid& g, const std::vector<long>& lo, const std::vector<long>& hi, F&& fn) {
  const int n = g.dim();
  for (int k = 0; k < n; ++k)
    if (hi[k] <= lo[k]) return;
  std::vector<long> i = lo;
  while (true) {
    std::size_t f = 0;
    for (int k = 0; k < n; ++k) f += static_cast<std::size_t>(i[k]) * g.stride(k);
    fn(f);
    int k = n - 1;
    while (k >= 0 && ++i[k] == hi[k]) {
      i[k] = lo[k];
      --k;
    }
    if (k < 0) return;
  }
}

// Value of u on the lattice nodes beyond the grid.
double virtual_value(const GridFunction& u) { return u.rule().far_value(); }

void require_radii(const std::vector<double>& radii, const char* what) {
  if (radii.empty()) throw std::invalid_argument(std::string(what) + ": empty radius set");
  for (double r : radii)
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument(std::string(what) + ": radii must be positive");
}

// Running max of width c along one axis of an array with extents `ext`;
// output position x covers input positions x..x+c-1 and has extent N.
std::vector<double> sliding_max(const std::vector<double>& in, std::vector<long>& ext, int axis, long c, long N) {
  const int n = static_cast<int>(ext.size());
  std::vector<long> in_stride(n, 1), out_ext = ext;
  out_ext[axis] = N;
  for (int k = n - 2; k >= 0; --k) in_stride[k] = in_stride[k + 1] * ext[k + 1];
  std::vector<long> out_stride(n, 1);
  for (int k = n - 2; k >= 0; --k) out_stride[k] = out_stride[k + 1] * out_ext[k + 1];
  long total_out = 1;
  for (long e : out_ext) total_out *= e;
  std::vector<double> out(static_cast<std::size_t>(total_out));
  const long lines = total_out / N;
  std::deque<long> dq;
  for (long line = 0; line < lines; ++line) {
    // Decompose `line` over the non-axis dimensions of out_ext.
    long rem = line, in_base = 0, out_base = 0;
    for (int k = n - 1; k >= 0; --k) {
      if (k == axis) continue;
      const long ik = rem % out_ext[k];
      rem /= out_ext[k];
      in_base += ik * in_stride[k];
      out_base += ik * out_stride[k];
    }
    dq.clear();
    const long E = ext[axis];
    auto val = [&](long t) { return in[static_cast<std::size_t>(in_base + t * in_stride[axis])]; };
    long next = 0;
    for (long x = 0; x < N; ++x) {
      const long last = std::min(x + c - 1, E - 1);
      for (; next <= last; ++next) {
        while (!dq.empty() && val(dq.back()) <= val(next)) dq.pop_back();
        dq.push_back(next);
      }
      while (dq.front() < x) dq.pop_front();
      out[static_cast<std::size_t>(out_base + x * out_stride[axis])] = val(dq.front());
    }
  }
  ext = out_ext;
  return out;
}

// Uncentred HL sup for a fixed window node count per axis.
void hl_window(const Grid& g, const SummedArea& sat, double far, const std::vector<long>& c,
               std::vector<double>& best) {
  const int n = g.dim();
  const long N = static_cast<long>(g.nodes_per_axis());
  std::vector<long> ext(n);
  long total = 1;
  double count = 1.0;
  for (int k = 0; k < n; ++k) {
    ext[k] = N + c[k] - 1;
    total *= ext[k];
    count *= static_cast<double>(c[k]);
  }
  std::vector<double> A(static_cast<std::size_t>(total));
  std::vector<long> lo(n), hi(n);
  for (long t = 0; t < total; ++t) {
    long rem = t;
    double inside = 1.0;
    for (int k = n - 1; k >= 0; --k) {
      const long tk = rem % ext[k] - c[k] + 1;  // window start
      rem /= ext[k];
      lo[k] = std::max(tk, 0L);
      hi[k] = std::min(tk + c[k], N);
      inside *= static_cast<double>(hi[k] - lo[k]);
    }
    A[static_cast<std::size_t>(t)] = (sat.sum(lo, hi) + (count - inside) * far) / count;
  }
  for (int k = 0; k < n; ++k) A = sliding_max(A, ext, k, c[k], N);
  for (std::size_t f = 0; f < best.size(); ++f) best[f] = std::max(best[f], A[f]);
}

std::vector<double> hl(const GridFunction& u, const std::vector<double>& radii) {
  const Grid& g = u.grid();
  const int n = g.dim();
  std::vector<double> absu(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) absu[i] = std::abs(u[i]);
  const SummedArea sat(g, absu);
  std::vector<double> best(u.size(), 0.0);
  for (double r : radii) {
    std::vector<std::vector<long>> counts(n);
    for (int k = 0; k < n; ++k) {
      const double c = 2.0 * std::pow(r, g.anisotropy().axis_exponent(k)) / g.spacing(k);
      const long cf = static_cast<long>(std::floor(c + kIndexSlack));
      const long cc = static_cast<long>(std::ceil(c - kIndexSlack));
      if (cf >= 1) counts[k].push_back(cf);
      if (cc != cf && cc >= 1) counts[k].push_back(cc);
    }
    std::vector<std::size_t> pick(n, 0);
    while (true) {
      std::vector<long> c(n);
      for (int k = 0; k < n; ++k) c[k] = counts[k][pick[k]];
      hl_window(g, sat, std::abs(virtual_value(u)), c, best);
      int k = n - 1;
      while (k >= 0 && ++pick[k] == counts[k].size()) {
        pick[k] = 0;
        --k;
      }
      if (k < 0) break;
    }
  }
  return best;
}

std::vector<double> sharp(const GridFunction& u, const std::vector<double>& radii) {
  const Grid& g = u.grid();
  const int n = g.dim();
  const long N = static_cast<long>(g.nodes_per_axis());
  const SummedArea sat(g, u.values());
  const double far = virtual_value(u);
  std::vector<std::vector<long>> half;
  for (double r : radii) {
    std::vector<long> h(n);
    for (int k = 0; k < n; ++k)
      h[k] = std::max(0L, static_cast<long>(std::ceil(std::pow(r, g.anisotropy().axis_exponent(k)) / g.spacing(k) -
                                                      kIndexSlack)) - 1);
    half.push_back(std::move(h));
  }
  std::vector<double> best(u.size(), 0.0);
  parallel::for_chunks(u.size(), [&](std::size_t b, std::size_t e) {
    std::vector<long> lo(n), hi(n);
    for (std::size_t f = b; f < e; ++f) {
      for (const auto& h : half) {
        double count = 1.0, inside = 1.0;
        for (int k = 0; k < n; ++k) {
          const long i = g.axis_index(f, k);
          lo[k] = std::max(i - h[k], 0L);
          hi[k] = std::min(i + h[k] + 1, N);
          count *= static_cast<double>(2 * h[k] + 1);
          inside *= static_cast<double>(hi[k] - lo[k]);
        }
        const double mean = (sat.sum(lo, hi) + (count - inside) * far) / count;
        double dev = (count - inside) * std::abs(far - mean);
        for_box(g, lo, hi, [&](std::size_t y) { dev += std::abs(u[y] - mean); });
        best[f] = std::max(best[f], dev / count);
      }
    }
  });
  return best;
}

std::vector<int> generations_of(const std::vector<double>& radii) {
  std::vector<int> ks;
  for (double r : radii) {
    const double k = -std::log2(r);
    if (std::abs(k - std::round(k)) < 1e-9) ks.push_back(static_cast<int>(std::round(k)));
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

struct RectNodes {
  std::vector<long> lo, hi;  // clipped lattice ranges
  double count = 0.0;        // full lattice count including virtual nodes
  double inside = 0.0;       // nodes on the grid
};

RectNodes rect_nodes(const Grid& g, const BoxRect& R) {
  const int n = g.dim();
  const long N = static_cast<long>(g.nodes_per_axis());
  RectNodes out{std::vector<long>(n), std::vector<long>(n), 1.0, 1.0};
  for (int k = 0; k < n; ++k) {
    const auto [i0, i1] = lattice_range(g, k, R.lo[k], R.hi[k]);
    out.count *= static_cast<double>(std::max(i1 - i0, 0L));
    out.lo[k] = std::clamp(i0, 0L, N);
    out.hi[k] = std::clamp(i1, 0L, N);
    out.inside *= static_cast<double>(out.hi[k] - out.lo[k]);
  }
  return out;
}

DyadicTree tree_for(const Grid& g, const std::vector<int>& ks) {
  return build_dyadic_tree(g.anisotropy(), g.box(), ks.front(), ks.back());
}

std::vector<double> dyadic(const GridFunction& u, const std::vector<double>& radii) {
  const Grid& g = u.grid();
  const auto ks = generations_of(radii);
  if (ks.empty()) throw std::invalid_argument("maximal: dyadic variant needs radii of the form 2^{-k}");
  const DyadicTree tree = tree_for(g, ks);
  std::vector<double> absu(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) absu[i] = std::abs(u[i]);
  const SummedArea sat(g, absu);
  const double far = std::abs(virtual_value(u));
  std::vector<double> best(u.size(), 0.0);
  for (int k : ks)
    for (const BoxRect& R : tree.generation(k).rects) {
      const RectNodes rn = rect_nodes(g, R);
      if (rn.count <= 0.0) continue;
      const double avg = (sat.sum(rn.lo, rn.hi) + (rn.count - rn.inside) * far) / rn.count;
      for_box(g, rn.lo, rn.hi, [&](std::size_t f) { best[f] = std::max(best[f], avg); });
    }
  return best;
}

}  // namespace

std::vector<double> dyadic_radii(const Grid& g) {
  const Anisotropy& a = g.anisotropy();
  int kmin = -static_cast<int>(std::ceil(std::log2(g.box_radius()))) - 1;
  double finest = 0.0;
  for (int k = 0; k < g.dim(); ++k)
    finest = std::max(finest, std::pow(0.5 * g.spacing(k), 1.0 / a.axis_exponent(k)));
  const int kmax = static_cast<int>(std::floor(-std::log2(finest) + 1e-12));
  std::vector<double> r;
  for (int k = kmin; k <= kmax; ++k) r.push_back(std::ldexp(1.0, -k));
  return r;
}

GridFunction maximal(const GridFunction& u, MaximalVariant variant, const std::vector<double>& radii) {
  u.check_finite();
  require_radii(radii, "maximal");
  std::vector<double> out;
  switch (variant) {
    case MaximalVariant::HL: out = hl(u, radii); break;
    case MaximalVariant::Sharp: out = sharp(u, radii); break;
    case MaximalVariant::Dyadic: out = dyadic(u, radii); break;
  }
  return GridFunction(u.grid(), std::move(out), ExteriorRule::zero());
}

MaximalResult maximal_all(const GridFunction& u, const std::vector<double>& radii) {
  return {u, maximal(u, MaximalVariant::HL, radii), maximal(u, MaximalVariant::Sharp, radii),
          maximal(u, MaximalVariant::Dyadic, radii), radii};
}

MaximalResult maximal_all(const GridFunction& u) { return maximal_all(u, dyadic_radii(u.grid())); }

GoodLambda good_lambda(const MaximalResult& m, double lambda, double gamma) {
  if (virtual_value(m.u) != 0.0) throw std::invalid_argument("good_lambda: u must vanish outside the grid");
  if (!(lambda > 0.0)) throw std::invalid_argument("good_lambda: lambda must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("good_lambda: gamma must be positive");
  GoodLambda out{lambda, gamma, 0.0, 0.0};
  const double dv = m.u.grid().cell_volume();
  for (std::size_t i = 0; i < m.u.size(); ++i) {
    if (m.Md[i] > 2.0 * lambda && m.Msharp[i] <= gamma * lambda) out.lhs += dv;
    if (m.Md[i] > lambda) out.rhs += dv;
  }
  return out;
}

GoodLambda good_lambda(const GridFunction& u, double lambda, double gamma) {
  return good_lambda(maximal_all(u), lambda, gamma);
}

void write_good_lambda_csv(std::ostream& os, const std::vector<GoodLambda>& rows) {
  os << "lambda,gamma,lhs,rhs,ratio\n";
  for (const auto& r : rows)
    os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.lambda, r.gamma, r.lhs, r.rhs, r.ratio());
}

double weak_type_constant(const GridFunction& u, const GridFunction& Mu) {
  require_same_grid(u, Mu, "weak_type_constant");
  const double l1 = lp_norm(u, 1.0);
  if (l1 == 0.0) return 0.0;
  std::vector<double> v = Mu.values();
  std::sort(v.begin(), v.end(), std::greater<>());
  const double dv = u.grid().cell_volume();
  double best = 0.0;
  // As t increases to a value of Mu, t |{Mu > t}| tends to value * #(Mu >= value).
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i + 1 < v.size() && v[i + 1] == v[i]) continue;
    best = std::max(best, v[i] * static_cast<double>(i + 1) * dv);
  }
  return best / l1;
}

double lp_norm(const GridFunction& u, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p must be positive");
  double acc = 0.0;
  for (double v : u.values()) acc += std::pow(std::abs(v), p);
  return std::pow(acc * u.grid().cell_volume(), 1.0 / p);
}

PredecessorBound predecessor_bound(const MaximalResult& m) {
  const Grid& g = m.u.grid();
  const auto ks = generations_of(m.radii);
  if (ks.empty()) throw std::invalid_argument("predecessor_bound: no dyadic radii");
  const DyadicTree tree = tree_for(g, ks);
  const SummedArea sat(g, m.u.values());
  const double far = virtual_value(m.u);
  const double doubling = std::pow(2.0, g.dim() / g.anisotropy().s0());
  PredecessorBound out;
  for (std::size_t gi = 1; gi < tree.generations.size(); ++gi) {
    const Generation& G = tree.generations[gi];
    const Generation& P = tree.generations[gi - 1];
    for (std::size_t q = 0; q < G.rects.size(); ++q) {
      if (G.predecessor[q] < 0) continue;
      const RectNodes rq = rect_nodes(g, G.rects[q]);
      const RectNodes rp = rect_nodes(g, P.rects[static_cast<std::size_t>(G.predecessor[q])]);
      if (rq.count <= 0.0 || rp.count <= 0.0) continue;
      if (rq.inside <= 0.0) continue;
      const double mean = (sat.sum(rp.lo, rp.hi) + (rp.count - rp.inside) * far) / rp.count;
      double dev = (rq.count - rq.inside) * std::abs(far - mean);
      double msharp = std::numeric_limits<double>::infinity();
      for_box(g, rq.lo, rq.hi, [&](std::size_t f) {
        dev += std::abs(m.u[f] - mean);
        msharp = std::min(msharp, m.Msharp[f]);
      });
      dev /= rq.count;
      ++out.rects;
      const double ratio = dev == 0.0 ? 0.0 : (msharp > 0.0 ? dev / (doubling * msharp)
                                                             : std::numeric_limits<double>::infinity());
      out.worst_ratio = std::max(out.worst_ratio, ratio);
    }
  }
  return out;
}

}  // namespace aniso
