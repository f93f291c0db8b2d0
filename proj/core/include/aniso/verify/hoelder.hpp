#pragma once

#include <functional>

#include "aniso/grid.hpp"
#include "aniso/kernel.hpp"
#include "aniso/solver.hpp"
#include "aniso/verify/report.hpp"

namespace aniso {

struct HoelderOptions {
  Point center;         // empty means the origin
  double base = 2.0;    // radii base^{-k}
  int skip_finest = 2;  // scales dropped from the fit window
};

/// osc_k = max - min of u over the nodes of M_{base^{-k}}(center) for every
/// resolvable k (the rectangle lies in the grid box and each half-width
/// exceeds the spacing). Fits log osc_k = log C - alpha k log(base) by least
/// squares over all but the `skip_finest` finest scales (at least two).
/// worst_margin = alpha; +inf when u is constant on the coarsest rectangle.
/// Throws std::invalid_argument with fewer than 3 resolvable scales.
InequalityReport hoelder_decay(const GridFunction& u, const DirichletProblem& prob, const HoelderOptions& opts = {});

/// Dirichlet problem whose discrete solution is the sampled `exact`: g is
/// `exact` on every node (tabulated exterior) and f at domain nodes is the
/// discrete operator of the sample, so E(u, phi_i) = (f, phi_i) holds exactly.
DirichletProblem manufactured_problem(const KernelFamily& fam, const Grid& grid,
                                      const std::function<double(const Point&)>& exact);

}  // namespace aniso
