#include "aniso/anisotropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace aniso {

Anisotropy::Anisotropy(double p, std::vector<double> orders, double s0,
                       double ellipticity)
    : p_(p), orders_(std::move(orders)), ellipticity_(ellipticity) {
  if (orders_.empty()) throw std::invalid_argument("anisotropy: dimension must be >= 1");
  if (!(p_ > 1.0) || !std::isfinite(p_))
    throw std::invalid_argument("anisotropy: p must be > 1, got " + std::to_string(p_));
  for (double s : orders_) {
    if (!(s > 0.0 && s < 1.0))
      throw std::invalid_argument("anisotropy: orders must lie in (0,1), got " +
                                  std::to_string(s));
  }
  s_max_ = *std::max_element(orders_.begin(), orders_.end());
  const double s_min = *std::min_element(orders_.begin(), orders_.end());
  double inv_sum = 0.0;
  for (double s : orders_) inv_sum += 1.0 / s;
  s_bar_ = static_cast<double>(orders_.size()) / inv_sum;
  s0_ = s0 > 0.0 ? s0 : s_min;
  if (s0_ > s_min * (1.0 + 1e-15))
    throw std::invalid_argument("anisotropy: s0 exceeds min_k s_k");
  if (!(ellipticity_ >= 1.0))
    throw std::invalid_argument("anisotropy: ellipticity constant must be >= 1");
}

bool Anisotropy::has_sobolev_exponent() const {
  return p_ * s_bar_ < static_cast<double>(dim());
}

double Anisotropy::sobolev_exponent() const {
  if (!has_sobolev_exponent())
    throw std::domain_error("anisotropy: p >= n / s_bar, Sobolev exponent undefined");
  const double n = dim();
  return n * p_ / (n - p_ * s_bar_);
}

double Anisotropy::moser_gain() const {
  if (!has_sobolev_exponent())
    throw std::domain_error("anisotropy: p >= n / s_bar, Moser gain undefined");
  const double n = dim();
  return n / (n - p_ * s_bar_);
}

double Anisotropy::volume_exponent() const {
  double e = 0.0;
  for (int k = 0; k < dim(); ++k) e += axis_exponent(k);
  return e;
}

Anisotropy Anisotropy::with_p(double p) const {
  return Anisotropy(p, orders_, s0_, ellipticity_);
}

Anisotropy Anisotropy::with_orders(std::vector<double> orders) const {
  const double s_min = *std::min_element(orders.begin(), orders.end());
  return Anisotropy(p_, std::move(orders), std::min(s0_, s_min), ellipticity_);
}

}  // namespace aniso
