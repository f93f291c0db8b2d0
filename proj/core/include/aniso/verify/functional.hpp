#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aniso/grid.hpp"
#include "aniso/kernel.hpp"
#include "aniso/verify/report.hpp"

namespace aniso {

enum class FunctionalInequality { Sobolev, SobolevLocal, Poincare };

FunctionalInequality parse_functional(const std::string& name);
std::string to_string(FunctionalInequality w);

struct FunctionalOptions {
  Point x0;             // empty means the origin
  double r = 0.5;       // radius of M_r (local Sobolev, Poincare)
  double lambda = 2.0;  // enlargement for the local Sobolev inequality
};

/// Both sides with the constant C stripped from the right side.
struct FunctionalSides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Sobolev:       ||u||^p_{L^{p*}}               vs E(u,u) with zero exterior.
/// SobolevLocal:  ||u||^p_{L^{p*}(M_r)}          vs E_{M_{lambda r}}(u,u)
///                + sum_k (lambda^{a_k}-1)^{-s_k p} r^{-p s_max} ||u||^p_{L^p(M_{lambda r})}.
/// Poincare:      ||u - (u)_{M_r}||^p_{L^p(M_r)} vs r^{p s_max} E_{M_r}(u,u).
/// Throws std::domain_error for the Sobolev forms when p >= n / s_bar, and
/// std::invalid_argument when the rectangles leave the grid box.
FunctionalSides functional_sides(FunctionalInequality which, const GridFunction& u, const KernelFamily& fam,
                                 const FunctionalOptions& opts = {});

/// Compactly supported test functions: smooth bump products, tensor hats and
/// cut-offs, placed in box-relative coordinates so the same seed gives the
/// "same" family on every anisotropy.
std::vector<GridFunction> functional_test_family(const Grid& grid, std::size_t count, std::uint64_t seed = 1);

/// Max over the family of lhs / rhs, i.e. the empirical constant. Functions
/// with both sides zero are skipped; rhs = 0 < lhs gives +inf.
InequalityReport estimate_functional_constant(FunctionalInequality which, const KernelFamily& fam,
                                              const std::vector<GridFunction>& family,
                                              const FunctionalOptions& opts = {});

struct FunctionalSweep {
  double p = 2.0;
  double s0 = 0.4;
  std::vector<std::vector<double>> orders;  // one order vector per sweep point
  std::size_t nodes_per_axis = 33;
  double box_radius = 2.0;
  std::size_t family_size = 24;
  std::uint64_t seed = 1;
  double robustness = 10.0;
};

/// Empirical constant for every order vector (axes kernel). Passes when every
/// constant is finite and positive and max/min < robustness. values hold
/// "C[i]" per sweep point and "spread" = max/min.
InequalityReport functional_sweep(FunctionalInequality which, const FunctionalSweep& sweep,
                                  const FunctionalOptions& opts = {});

/// sum_i |u_i|^q dV over the nodes selected by mask (all nodes if empty).
double discrete_lq_power(const GridFunction& u, double q, const std::vector<char>& mask = {});

}  // namespace aniso
