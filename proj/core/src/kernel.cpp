#include "aniso/kernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace aniso {

namespace {

void require_axis(int k, const Anisotropy& a) {
  if (k < 0 || k >= a.dim()) throw std::invalid_argument("kernel: axis out of range");
}

}  // namespace

double axes_tail_slab(double r, int k, const Anisotropy& a) {
  require_axis(k, a);
  if (!(r > 0.0)) throw std::invalid_argument("axes_tail_slab: r must be positive");
  return 2.0 * (1.0 - a.order(k)) / a.p() * std::pow(r, -a.s_max() * a.p());
}

double axes_tail_rect_bound(double rho, const Anisotropy& a) {
  double t = 0.0;
  for (int k = 0; k < a.dim(); ++k) t += axes_tail_slab(rho, k, a);
  return t;
}

double axis_mass(int k, double lo, double hi, const Anisotropy& a) {
  require_axis(k, a);
  if (!(lo > 0.0) || hi < lo) throw std::invalid_argument("axis_mass: need 0 < lo <= hi");
  const double e = a.order(k) * a.p();
  const double upper = std::isinf(hi) ? 0.0 : std::pow(hi, -e);
  return (1.0 - a.order(k)) / a.p() * (std::pow(lo, -e) - upper);
}

double cell_weight(int k, long m, double delta, const Anisotropy& a) {
  if (m == 0) throw std::invalid_argument("cell_weight: m = 0 is the principal-value cell");
  if (!(delta > 0.0)) throw std::invalid_argument("cell_weight: delta must be positive");
  const double am = static_cast<double>(std::labs(m));
  return axis_mass(k, (am - 0.5) * delta, (am + 0.5) * delta, a);
}

double cell_tail(int k, long M, double delta, const Anisotropy& a) {
  if (M < 1) throw std::invalid_argument("cell_tail: M must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("cell_tail: delta must be positive");
  return axis_mass(k, (static_cast<double>(M) - 0.5) * delta,
                   std::numeric_limits<double>::infinity(), a);
}

Coefficient coefficient_from_catalog(const std::string& name) {
  if (name == "unit") return {"unit", [](const Point&, const Point&) { return 1.0; }, 1.0, 1.0};
  if (name == "sine")
    return {"sine", [](const Point& x, const Point& y) { return 1.0 + 0.5 * std::sin(x[0] + y[0]); },
            0.5, 1.5};
  throw std::invalid_argument("unknown coefficient '" + name + "' (known: unit, sine)");
}

std::vector<std::string> coefficient_catalog() { return {"unit", "sine"}; }

KernelFamily KernelFamily::axes(Anisotropy a) {
  return KernelFamily(std::move(a), KernelVariant::Axes, coefficient_from_catalog("unit"));
}

KernelFamily KernelFamily::with_coefficient(Anisotropy a, Coefficient c) {
  if (!c.fn) throw std::invalid_argument("kernel: coefficient function missing");
  if (!(c.lower > 0.0) || c.upper < c.lower)
    throw std::invalid_argument("kernel: coefficient bounds must satisfy 0 < lower <= upper");
  return KernelFamily(std::move(a), KernelVariant::Coefficient, std::move(c));
}

double KernelFamily::comparability_constant() const {
  return std::max(coef_.upper, 1.0 / coef_.lower);
}

double KernelFamily::tail_constant() const { return coef_.upper * 2.0 / a_.p(); }

double KernelFamily::density(int k, double h) const {
  const double s = a_.order(k);
  return s * (1.0 - s) * std::pow(std::abs(h), -1.0 - s * a_.p());
}

TailEstimate family_tail_slab(const KernelFamily& fam, const Point& x0, double r, int k) {
  const Anisotropy& a = fam.anisotropy();
  if (!fam.has_coefficient()) return {axes_tail_slab(r, k, a), 0.0};
  require_axis(k, a);
  if (!(r > 0.0)) throw std::invalid_argument("family_tail_slab: r must be positive");
  const double s = a.order(k);
  const double e = s * a.p();
  const double rho = std::pow(r, a.axis_exponent(k));
  Point plus = x0, minus = x0;
  auto integrand = [&](double h) {
    plus[k] = x0[k] + h;
    minus[k] = x0[k] - h;
    return (fam.coefficient(x0, plus) + fam.coefficient(x0, minus)) * s * (1.0 - s) *
           std::pow(h, -1.0 - e);
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double width = 0.5;
  const double far = rho + 1000.0;
  TailEstimate out;
  for (double lo = rho; lo < far; lo += width) {
    double err = 0.0;
    out.value += GK::integrate(integrand, lo, std::min(lo + width, far), 6, 1e-13, &err);
    out.error += err;
  }
  const double rest = 2.0 * axis_mass(k, far, std::numeric_limits<double>::infinity(), a);
  out.value += 0.5 * (fam.coefficient_lower() + fam.coefficient_upper()) * rest;
  out.error += 0.5 * (fam.coefficient_upper() - fam.coefficient_lower()) * rest;
  return out;
}

}  // namespace aniso
