#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "aniso/anisotropy.hpp"

namespace aniso {

/// mu_axes(x0, R^n \ E_r^k(x0)) = (2(1-s_k)/p) r^{-s_max p}.
double axes_tail_slab(double r, int k, const Anisotropy& a);

/// Sum of the slab tails; bounds the tail outside M_rho.
double axes_tail_rect_bound(double rho, const Anisotropy& a);

/// int_lo^hi s_k(1-s_k) h^{-1-s_k p} dh for 0 < lo <= hi (hi may be +inf).
double axis_mass(int k, double lo, double hi, const Anisotropy& a);

/// Exact integral of the axis-k density over the cell [(|m|-1/2)delta, (|m|+1/2)delta].
double cell_weight(int k, long m, double delta, const Anisotropy& a);

/// One-sided sum of cell_weight over m >= M, i.e. the mass beyond (M-1/2)delta.
double cell_tail(int k, long M, double delta, const Anisotropy& a);

/// Symmetric coefficient with two-sided bounds lower <= c <= upper.
struct Coefficient {
  std::string name;
  std::function<double(const Point&, const Point&)> fn;
  double lower = 1.0;
  double upper = 1.0;
};

/// Catalog entries: "unit" (c = 1), "sine" (c = 1 + sin(x_1 + y_1)/2).
Coefficient coefficient_from_catalog(const std::string& name);
std::vector<std::string> coefficient_catalog();

enum class KernelVariant { Axes, Coefficient };

class KernelFamily {
 public:
  static KernelFamily axes(Anisotropy a);
  static KernelFamily with_coefficient(Anisotropy a, Coefficient c);

  const Anisotropy& anisotropy() const { return a_; }
  KernelVariant variant() const { return variant_; }
  const std::string& coefficient_name() const { return coef_.name; }
  bool has_coefficient() const { return variant_ == KernelVariant::Coefficient; }

  /// c(x, y); identically 1 for the axes family.
  double coefficient(const Point& x, const Point& y) const {
    return has_coefficient() ? coef_.fn(x, y) : 1.0;
  }
  double coefficient_lower() const { return coef_.lower; }
  double coefficient_upper() const { return coef_.upper; }

  /// Two-sided energy comparability constant against mu_axes.
  double comparability_constant() const;
  /// Constant in the slab tail bound: tail <= Lambda (1-s_k) r^{-p s_max}.
  double tail_constant() const;

  /// Axis density s_k(1-s_k)|h|^{-1-s_k p} of mu_axes.
  double density(int k, double h) const;

 private:
  KernelFamily(Anisotropy a, KernelVariant v, Coefficient c)
      : a_(std::move(a)), variant_(v), coef_(std::move(c)) {}
  Anisotropy a_;
  KernelVariant variant_;
  Coefficient coef_;
};

struct TailEstimate {
  double value = 0.0;
  double error = 0.0;  // bound on |value - exact|
};

/// Tail of the family along axis k outside the slab of radius r around x0.
/// Closed form for the axes family. For coefficients: Gauss-Kronrod panels
/// of width 1/2 out to 1000 beyond the slab, then the mid-range coefficient
/// times the remaining mass, whose error is bounded by the coefficient range.
TailEstimate family_tail_slab(const KernelFamily& fam, const Point& x0, double r, int k);

struct AdmissibilityReport {
  std::size_t samples = 0;
  bool tail_ok = true;
  bool comparable = true;
  bool symmetric = true;
  double worst_tail_ratio = 0.0;           // tail / ((1-s_k) r^{-p s_max}), against tail_constant
  double worst_comparability = 0.0;        // max of E_fam/E_axes and E_axes/E_fam
  double worst_symmetry_error = 0.0;       // relative
  std::vector<std::string> witnesses;
  bool ok() const { return tail_ok && comparable && symmetric; }
};

/// Samples (x0, r, k) for the tail bound and random grid functions on
/// rectangles M_rho(x0), rho in (0,3), for energy comparability and symmetry.
AdmissibilityReport admissibility_report(const KernelFamily& fam, int samples,
                                         std::uint64_t seed = 1);

}  // namespace aniso
