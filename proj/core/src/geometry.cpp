#include "aniso/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace aniso {

namespace {

void require_dim(const Point& x, const Anisotropy& a, const char* what) {
  if (static_cast<int>(x.size()) != a.dim())
    throw std::invalid_argument(std::string(what) + ": point dimension mismatch");
}

bool inside_open(double offset, double hw) {
  return std::abs(offset) < hw - kGeomSlack * std::max(1.0, hw);
}

}  // namespace

double metric_d(const Point& x, const Point& y, const Anisotropy& a) {
  require_dim(x, a, "metric_d");
  require_dim(y, a, "metric_d");
  double d = 0.0;
  for (int k = 0; k < a.dim(); ++k) {
    const double diff = std::abs(x[k] - y[k]);
    if (!std::isfinite(diff)) throw std::invalid_argument("metric_d: non-finite coordinate");
    if (diff > 0.0) d = std::max(d, std::pow(diff, a.order(k) / a.s_max()));
  }
  return d;
}

Rect::Rect(Point center, double r, const Anisotropy& a) : center_(std::move(center)), r_(r) {
  require_dim(center_, a, "rect");
  if (!(r > 0.0) || !std::isfinite(r))
    throw std::invalid_argument("rect: radius must be positive and finite");
  half_widths_.resize(center_.size());
  for (int k = 0; k < a.dim(); ++k) half_widths_[k] = std::pow(r, a.axis_exponent(k));
}

bool Rect::contains(const Point& y) const {
  for (std::size_t k = 0; k < center_.size(); ++k)
    if (!inside_open(y[k] - center_[k], half_widths_[k])) return false;
  return true;
}

double Rect::volume() const {
  double v = 1.0;
  for (double h : half_widths_) v *= 2.0 * h;
  return v;
}

Rect rect(const Point& center, double r, const Anisotropy& a) { return Rect(center, r, a); }

double rect_volume(const Rect& m) { return m.volume(); }

double rect_volume(double r, const Anisotropy& a) {
  if (!(r > 0.0)) throw std::invalid_argument("rect_volume: radius must be positive");
  return std::pow(2.0, a.dim()) * std::pow(r, a.dim() * a.s_max() / a.s_bar());
}

double doubling_ratio(const Anisotropy& a) {
  return std::pow(2.0, a.dim() * a.s_max() / a.s_bar());
}

double doubling_bound(const Anisotropy& a) { return std::pow(2.0, a.dim() / a.s0()); }

Slab::Slab(Point center, double r, int axis, const Anisotropy& a)
    : center_(std::move(center)), r_(r), axis_(axis) {
  require_dim(center_, a, "slab");
  if (!(r > 0.0)) throw std::invalid_argument("slab: radius must be positive");
  if (axis < 0 || axis >= a.dim()) throw std::invalid_argument("slab: axis out of range");
  half_width_ = std::pow(r, a.axis_exponent(axis));
}

bool Slab::contains(const Point& y) const {
  return inside_open(y[axis_] - center_[axis_], half_width_);
}

ScalingMap::ScalingMap(double lambda, const Anisotropy& a) : lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("scaling_map: lambda must be positive");
  factors_.resize(static_cast<std::size_t>(a.dim()));
  for (int k = 0; k < a.dim(); ++k) factors_[k] = std::pow(lambda, a.axis_exponent(k));
}

Point ScalingMap::operator()(const Point& x) const {
  if (x.size() != factors_.size()) throw std::invalid_argument("scaling_map: dimension mismatch");
  Point y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = factors_[k] * x[k];
  return y;
}

ScalingMap ScalingMap::inverse() const {
  std::vector<double> inv(factors_.size());
  for (std::size_t k = 0; k < inv.size(); ++k) inv[k] = 1.0 / factors_[k];
  return ScalingMap(1.0 / lambda_, std::move(inv));
}

ScalingMap scaling_map(double lambda, const Anisotropy& a) { return ScalingMap(lambda, a); }

}  // namespace aniso
