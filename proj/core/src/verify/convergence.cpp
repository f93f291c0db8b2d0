#include "aniso/verify/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

#include "aniso/nonlocal.hpp"

namespace aniso {

namespace {

constexpr double kNear = 1e-4;
constexpr double kFar = 400.0;

double weight(int k) { return 1.0 + 0.25 * k; }

template <class F>
double gauss_panels(F&& f, double a, double b, int panels) {
  double s = 0.0;
  const double w = (b - a) / panels;
  for (int i = 0; i < panels; ++i)
    s += boost::math::quadrature::gauss<double, 30>::integrate(f, a + i * w, a + (i + 1) * w);
  return s;
}

}  // namespace

std::vector<std::string> smooth_catalog() { return {"sine", "gauss", "atan"}; }

SmoothFunction smooth_function(const std::string& name, int dim) {
  if (dim < 1) throw std::invalid_argument("smooth_function: dimension must be >= 1");
  SmoothFunction u;
  u.name = name;
  u.dim = dim;
  auto phase = [dim](const Point& x, double shift) {
    double t = shift;
    for (int k = 0; k < dim; ++k) t += weight(k) * x[k];
    return t;
  };
  if (name == "sine") {
    u.value = [phase](const Point& x) { return std::sin(phase(x, 0.0)); };
    u.d1 = [phase](const Point& x, int k) { return weight(k) * std::cos(phase(x, 0.0)); };
    u.d2 = [phase](const Point& x, int k) { return -weight(k) * weight(k) * std::sin(phase(x, 0.0)); };
    u.period = [](int k) { return 2.0 * std::numbers::pi / weight(k); };
    u.limits = [](const Point&, int) { return std::pair<double, double>{0.0, 0.0}; };
  } else if (name == "gauss") {
    auto val = [dim](const Point& x) {
      double r2 = 0.0;
      for (int k = 0; k < dim; ++k) r2 += (x[k] - 0.1) * (x[k] - 0.1);
      return std::exp(-r2 / 2.0);
    };
    u.value = val;
    u.d1 = [val](const Point& x, int k) { return -(x[k] - 0.1) * val(x); };
    u.d2 = [val](const Point& x, int k) { return ((x[k] - 0.1) * (x[k] - 0.1) - 1.0) * val(x); };
    u.period = [](int) { return 0.0; };
    u.limits = [](const Point&, int) { return std::pair<double, double>{0.0, 0.0}; };
  } else if (name == "atan") {
    u.value = [phase](const Point& x) { return std::atan(phase(x, 0.2)); };
    u.d1 = [phase](const Point& x, int k) {
      const double t = phase(x, 0.2);
      return weight(k) / (1.0 + t * t);
    };
    u.d2 = [phase](const Point& x, int k) {
      const double t = phase(x, 0.2);
      return -2.0 * weight(k) * weight(k) * t / ((1.0 + t * t) * (1.0 + t * t));
    };
    u.period = [](int) { return 0.0; };
    u.limits = [](const Point&, int) {
      return std::pair<double, double>{std::numbers::pi / 2.0, -std::numbers::pi / 2.0};
    };
  } else {
    throw std::invalid_argument("unknown smooth function '" + name + "' (expected sine, gauss or atan)");
  }
  return u;
}

double orthotropic_laplacian(const SmoothFunction& u, const Point& x, double p) {
  double s = 0.0;
  for (int k = 0; k < u.dim; ++k) s += (p - 1.0) * std::pow(std::abs(u.d1(x, k)), p - 2.0) * u.d2(x, k);
  return s;
}

double fractional_orthotropic(const SmoothFunction& u, const Point& x, double p, double s) {
  if (!(p > 1.0) || !(s > 0.0 && s < 1.0)) throw std::invalid_argument("fractional_orthotropic: need p > 1, s in (0,1)");
  if (static_cast<int>(x.size()) != u.dim) throw std::invalid_argument("fractional_orthotropic: wrong point dimension");
  const double u0 = u.value(x), sp = s * p;
  double total = 0.0;
  for (int k = 0; k < u.dim; ++k) {
    auto pair_sum = [&](double h) {
      Point y = x, z = x;
      y[k] += h;
      z[k] -= h;
      return jp(u.value(y) - u0, p) + jp(u.value(z) - u0, p);
    };
    // |h| < eta: pair_sum(h) = (p-1)|u'|^{p-2} u'' h^p + O(h^{p+2})
    const double a = u.d1(x, k), b = u.d2(x, k);
    const double near = (p - 1.0) * std::pow(std::abs(a), p - 2.0) * b * std::pow(kNear, p - sp) / (p - sp);
    const double mid = gauss_panels([&](double t) { const double h = std::exp(t); return pair_sum(h) * std::exp(-sp * t); },
                                    std::log(kNear), 0.0, 40);
    const double outer = gauss_panels([&](double h) { return pair_sum(h) * std::pow(h, -1.0 - sp); }, 1.0, kFar,
                                      static_cast<int>(2.0 * kFar));
    double tail;
    const double period = u.period(k);
    if (period > 0.0) {
      // periodic pair sum: mean part exactly, oscillating part by one
      // integration by parts, which leaves O(H^{-2-sp})
      using GL = boost::math::quadrature::gauss<double, 30>;
      const double mean = GL::integrate(pair_sum, kFar, kFar + period) / period;
      const double gbar =
          GL::integrate([&](double h) { return (kFar + period - h) * (pair_sum(h) - mean); }, kFar, kFar + period) /
          period;
      tail = mean * std::pow(kFar, -sp) / sp + gbar * std::pow(kFar, -1.0 - sp);
    } else {
      const auto [plus, minus] = u.limits(x, k);
      tail = (jp(plus - u0, p) + jp(minus - u0, p)) * std::pow(kFar, -sp) / sp;
    }
    total += s * (1.0 - s) * (near + mid + outer + tail);
  }
  return total;
}

InequalityReport convergence_to_local(const SmoothFunction& u, const Point& x, double p,
                                      const std::vector<double>& s_list) {
  if (s_list.size() < 2) throw std::invalid_argument("convergence_to_local: need at least two orders");
  double scale = 0.0;
  for (int k = 0; k < u.dim; ++k) {
    const double d = u.d1(x, k);
    if (std::abs(d) < 1e-12)
      throw std::invalid_argument(fmt::format("convergence_to_local: partial {} of {} vanishes at the point", k, u.name));
    scale += (p - 1.0) * std::pow(std::abs(d), p - 2.0) * std::abs(u.d2(x, k));
  }
  const double A = orthotropic_laplacian(u, x, p);
  const bool degenerate = std::abs(A) <= 1e-12 * std::max(scale, 1e-300) || scale == 0.0;

  InequalityReport r;
  r.name = "convergence-" + u.name;
  r.samples = s_list.size();
  std::vector<double> track;
  for (std::size_t j = 0; j < s_list.size(); ++j) {
    const double L = fractional_orthotropic(u, x, p, s_list[j]);
    track.push_back(degenerate ? std::abs(L) : L / A);
    r.values.emplace_back(fmt::format("s[{}]", j), s_list[j]);
    r.values.emplace_back(fmt::format("L[{}]", j), L);
    if (!degenerate) r.values.emplace_back(fmt::format("ratio[{}]", j), L / A);
  }
  r.values.emplace_back("A_loc", A);
  r.values.emplace_back("degenerate", degenerate ? 1.0 : 0.0);
  bool ok = true;
  double worst = -INFINITY;
  if (degenerate) {
    for (std::size_t j = 1; j < track.size(); ++j) {
      ok = ok && track[j] < track[j - 1];
      worst = std::max(worst, track[j] / track[j - 1]);
    }
  } else {
    for (std::size_t j = 2; j < track.size(); ++j) {
      const double d1 = std::abs(track[j] - track[j - 1]), d0 = std::abs(track[j - 1] - track[j - 2]);
      ok = ok && d1 < d0;
      worst = std::max(worst, d1 / d0);
    }
    r.values.emplace_back("limit_estimate", track.back());
  }
  r.worst_margin = worst;  // largest contraction factor; < 1 when converging
  r.passed = ok;
  r.violations = ok ? 0 : 1;
  r.constants = {{"p", p}, {"eta", kNear}, {"H", kFar}};
  for (int k = 0; k < u.dim; ++k) r.witness.emplace_back(fmt::format("x[{}]", k), x[k]);
  return r;
}

InequalityReport convergence_suite(double p, const std::vector<SmoothFunction>& functions,
                                   const std::vector<Point>& points, const std::vector<double>& s_list,
                                   double rel_tol) {
  InequalityReport r;
  r.name = "convergence-suite";
  double lo = INFINITY, hi = -INFINITY, sum = 0.0;
  bool ok = true;
  std::size_t count = 0;
  for (const auto& f : functions)
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto one = convergence_to_local(f, points[i], p, s_list);
      if (one.value("degenerate") != 0.0) throw std::invalid_argument("convergence_suite: degenerate test point");
      const double lim = one.value("limit_estimate");
      r.values.emplace_back(fmt::format("{}[{}]", f.name, i), lim);
      r.values.emplace_back(fmt::format("{}[{}].contraction", f.name, i), one.worst_margin);
      ok = ok && one.passed;
      lo = std::min(lo, lim), hi = std::max(hi, lim), sum += lim, ++count;
    }
  if (count == 0) throw std::invalid_argument("convergence_suite: no functions or points");
  const double spread = (hi - lo) / std::abs(sum / static_cast<double>(count));
  r.samples = count;
  r.worst_margin = spread;
  r.values.emplace_back("spread", spread);
  r.values.emplace_back("mean_limit", sum / static_cast<double>(count));
  r.passed = ok && spread <= rel_tol;
  r.violations = r.passed ? 0 : 1;
  r.constants = {{"p", p}, {"rel_tol", rel_tol}, {"s_last", s_list.back()}};
  return r;
}

}  // namespace aniso
