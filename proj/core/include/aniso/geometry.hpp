#pragma once

#include <vector>

#include "aniso/anisotropy.hpp"

namespace aniso {

// Relative slack used for open-set membership and containment tests.
inline constexpr double kGeomSlack = 1e-12;

double metric_d(const Point& x, const Point& y, const Anisotropy& a);

/// Anisotropic rectangle M_r(center) = {y : d(center, y) < r}.
class Rect {
 public:
  Rect(Point center, double r, const Anisotropy& a);

  const Point& center() const { return center_; }
  double radius() const { return r_; }
  const std::vector<double>& half_widths() const { return half_widths_; }
  double half_width(int k) const { return half_widths_[static_cast<std::size_t>(k)]; }
  int dim() const { return static_cast<int>(center_.size()); }

  double lower(int k) const { return center_[k] - half_widths_[k]; }
  double upper(int k) const { return center_[k] + half_widths_[k]; }

  // Open membership; points within slack of the boundary count as outside.
  bool contains(const Point& y) const;
  double volume() const;

 private:
  Point center_;
  double r_;
  std::vector<double> half_widths_;
};

Rect rect(const Point& center, double r, const Anisotropy& a);
double rect_volume(const Rect& m);
/// 2^n r^{n s_max / s_bar}, without building a Rect.
double rect_volume(double r, const Anisotropy& a);
/// |M_{2r}| / |M_r| = 2^{n s_max / s_bar}.
double doubling_ratio(const Anisotropy& a);
/// 2^{n / s0}.
double doubling_bound(const Anisotropy& a);

/// {y : |x_k - y_k| < r^{s_max/s_k}}, axis k zero-based.
class Slab {
 public:
  Slab(Point center, double r, int axis, const Anisotropy& a);
  bool contains(const Point& y) const;
  int axis() const { return axis_; }
  double half_width() const { return half_width_; }

 private:
  Point center_;
  double r_;
  int axis_;
  double half_width_;
};

/// Psi_lambda: coordinate k scaled by lambda^{s_max/s_k}.
class ScalingMap {
 public:
  ScalingMap(double lambda, const Anisotropy& a);
  Point operator()(const Point& x) const;
  ScalingMap inverse() const;
  double lambda() const { return lambda_; }
  double factor(int k) const { return factors_[static_cast<std::size_t>(k)]; }

 private:
  ScalingMap(double lambda, std::vector<double> factors) : lambda_(lambda), factors_(std::move(factors)) {}
  double lambda_;
  std::vector<double> factors_;
};

ScalingMap scaling_map(double lambda, const Anisotropy& a);

}  // namespace aniso
