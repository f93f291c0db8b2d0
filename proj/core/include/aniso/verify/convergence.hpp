#pragma once

#include <functional>
#include <string>
#include <vector>

#include "aniso/anisotropy.hpp"
#include "aniso/verify/report.hpp"

namespace aniso {

/// A bounded C^2 function with analytic first and second partials and its
/// behaviour along each axis at infinity: either limits (h -> +inf and
/// h -> -inf) or a period.
struct SmoothFunction {
  std::string name;
  int dim = 1;
  std::function<double(const Point&)> value;
  std::function<double(const Point&, int)> d1;
  std::function<double(const Point&, int)> d2;
  std::function<double(int)> period;                       // 0 when the axis has limits
  std::function<std::pair<double, double>(const Point&, int)> limits;  // (at +inf, at -inf)
};

/// "sine": sin(sum_k w_k x_k) with w_k = 1 + k/4 (sin x in 1-D);
/// "gauss": exp(-|x - c|^2 / 2) with c_k = 0.1;
/// "atan": atan(sum_k w_k x_k + 0.2).
SmoothFunction smooth_function(const std::string& name, int dim);
std::vector<std::string> smooth_catalog();

/// A^p_loc u(x) = sum_k (p-1) |d_k u|^{p-2} d_kk u.
double orthotropic_laplacian(const SmoothFunction& u, const Point& x, double p);

/// sum_k s(1-s) int_R J_p(u(x + h e_k) - u(x)) |h|^{-1-sp} dh by quadrature:
/// exact even Taylor term on |h| < eta, Gauss-Legendre panels (log-spaced up
/// to 1, uniform up to H) and the far field from the limits or the period
/// mean beyond H.
double fractional_orthotropic(const SmoothFunction& u, const Point& x, double p, double s);

/// Ratio L_s u(x) / A^p_loc u(x) along s_list. Passes when the successive
/// differences decrease (Cauchy-decreasing). When A^p_loc u(x) vanishes the
/// report tracks |L_s u(x)| instead and passes when it decreases.
/// Throws std::invalid_argument if a partial of u vanishes at x.
InequalityReport convergence_to_local(const SmoothFunction& u, const Point& x, double p,
                                      const std::vector<double>& s_list);

/// Runs convergence_to_local for every function and point and checks that
/// the ratios at the last s agree within rel_tol: (max - min) / |mean|.
InequalityReport convergence_suite(double p, const std::vector<SmoothFunction>& functions,
                                   const std::vector<Point>& points, const std::vector<double>& s_list,
                                   double rel_tol = 0.02);

}  // namespace aniso
