#pragma once

#include <span>
#include <vector>

namespace aniso {

using Point = std::vector<double>;

/// Parameter pack shared by every kernel, rectangle and grid: dimension,
/// integrability exponent p, per-axis orders s_k, the lower bound s0 and
/// the ellipticity constant.
///
/// Derived quantities (s_max, harmonic mean) are fixed at construction.
class Anisotropy {
 public:
  /// `s0 <= 0` selects min_k s_k.
  Anisotropy(double p, std::vector<double> orders, double s0 = 0.0,
             double ellipticity = 1.0);

  int dim() const { return static_cast<int>(orders_.size()); }
  double p() const { return p_; }
  std::span<const double> orders() const { return orders_; }
  double order(int k) const { return orders_[static_cast<std::size_t>(k)]; }
  double s_max() const { return s_max_; }
  double s_bar() const { return s_bar_; }
  double s0() const { return s0_; }
  double ellipticity() const { return ellipticity_; }

  /// s_max / s_k: the power mapping metric radius to half-width on axis k.
  double axis_exponent(int k) const { return s_max_ / order(k); }

  /// True when p < n / s_bar, i.e. the Sobolev exponent is finite.
  bool has_sobolev_exponent() const;
  /// np / (n - p s_bar); throws std::domain_error when p >= n / s_bar.
  double sobolev_exponent() const;
  /// n / (n - p s_bar), the Moser gain per rung.
  double moser_gain() const;

  /// sum_k s_max / s_k = n s_max / s_bar, the volume growth exponent.
  double volume_exponent() const;

  Anisotropy with_p(double p) const;
  Anisotropy with_orders(std::vector<double> orders) const;

  bool operator==(const Anisotropy&) const = default;

 private:
  double p_;
  std::vector<double> orders_;
  double s_max_ = 0.0;
  double s_bar_ = 0.0;
  double s0_ = 0.0;
  double ellipticity_ = 1.0;
};

}  // namespace aniso
