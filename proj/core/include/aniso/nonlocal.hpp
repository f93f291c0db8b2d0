#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "aniso/grid.hpp"
#include "aniso/kernel.hpp"

namespace aniso {

/// J_p(t) = |t|^{p-2} t.
inline double jp(double t, double p) {
  if (t == 0.0) return 0.0;
  if (p == 2.0) return t;
  return std::copysign(std::pow(std::abs(t), p - 1.0), t);
}

/// Per-axis cell weights and one-sided far-field tails for one grid.
struct AxisWeights {
  AxisWeights(const Grid& g, const Anisotropy& a);
  std::vector<std::vector<double>> w;     // w[k][m], m = 1..N-1 (w[k][0] unused)
  std::vector<std::vector<double>> tail;  // tail[k][M], M = 1..N, mass beyond (M-1/2) delta
};

/// Local form: double sum over node pairs on common axis lines with both
/// nodes in the domain. Counts every ordered pair, so energy(u,u) is the
/// discrete E_D(u,u).
double energy(const GridFunction& u, const GridFunction& v, const KernelFamily& fam, const Rect& domain);
double energy(const GridFunction& u, const GridFunction& v, const KernelFamily& fam,
              const std::vector<char>& domain);

/// The global form E^mu(u,v) for v vanishing outside the domain: local pairs
/// plus both orderings of every pair with one node outside, including the
/// closed-form far field for Zero/Constant rules.
double weak_form(const GridFunction& u, const GridFunction& v, const KernelFamily& fam, const Rect& domain);
double weak_form(const GridFunction& u, const GridFunction& v, const KernelFamily& fam,
                 const std::vector<char>& domain);

/// sum_k sum_{m>=1} w_k(m) [J_p(u(x+m e_k)-u(x)) + J_p(u(x-m e_k)-u(x))] plus
/// the far-field tail. Tabulated exteriors are truncated symmetrically at the
/// nearer box face so that odd data cancel exactly.
/// weak_form(u, indicator of x) = -2 * cell_volume * apply_operator(u, x)
/// for Zero/Constant rules.
double apply_operator(const GridFunction& u, const KernelFamily& fam, std::size_t node);

/// weak_form(u, indicator of node) computed directly: -2 dV times the full
/// one-sided line sum (every grid node plus far field).
double pairing_with_node(const GridFunction& u, const KernelFamily& fam, std::size_t node);

/// int_{R^n \ hole} u^-(z)^{p-1} mu(x, dz) with u piecewise constant on the
/// node cells, cells cut exactly at the hole faces, and the closed-form far
/// field for Zero/Constant rules.
double tail_term(const GridFunction& u, const KernelFamily& fam, std::size_t node, const Rect& hole);

void require_family_matches(const Grid& g, const KernelFamily& fam, const char* what);

}  // namespace aniso
