#pragma once

#include "aniso/grid.hpp"
#include "aniso/kernel.hpp"

namespace aniso {

/// Product of per-axis piecewise-linear profiles: 1 on |t| <= r^{a_k},
/// 0 on |t| >= (lambda r)^{a_k}. Lipschitz along axis k with constant
/// ((lambda^{a_k} - 1) r^{a_k})^{-1}, i.e. c = 1.
struct CutOff {
  Point x0;
  double r = 1.0;
  double lambda = 2.0;
  GridFunction values;
};

double cutoff_value(const Point& x0, double r, double lambda, const Anisotropy& a, const Point& y);

CutOff make_cutoff(const Point& x0, double r, double lambda, const Grid& grid);

struct CutoffBound {
  double lhs = 0.0;       // sup over nodes of the discrete integral of |tau(y)-tau(x)|^p
  double rhs = 0.0;       // C * sum_k (lambda^{a_k}-1)^{-p s_k} * r^{-p s_max}
  double constant = 0.0;  // the C used
  double geometric = 0.0; // rhs / C
  bool holds() const { return lhs <= rhs; }
};

/// Calibrated constant: 4 Lambda_c / p with Lambda_c the coefficient upper bound.
double cutoff_constant(const KernelFamily& fam);

CutoffBound cutoff_energy_bound(const CutOff& tau, const KernelFamily& fam);

/// Same supremum with |u(x)|^p |tau(y)-tau(x)|^p weighting (the quadratic
/// corollary), returned as (lhs, rhs) where rhs uses sup |u|^p.
CutoffBound cutoff_weighted_bound(const CutOff& tau, const GridFunction& u, const KernelFamily& fam);

}  // namespace aniso
