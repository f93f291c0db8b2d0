#pragma once

// Independent reference computations used only by tests. Nothing here calls
// the library routine it is meant to check.

#include <cstdint>
#include <random>
#include <vector>

#include "aniso/anisotropy.hpp"
#include "aniso/grid.hpp"
#include "aniso/kernel.hpp"

namespace aniso::oracle {

// Smallest r with y in the closed rectangle of radius r around x, by bisection
// on the half-width test |x_k - y_k| <= r^{s_max/s_k}.
double metric_by_bisection(const Point& x, const Point& y, const Anisotropy& a);

// Adaptive quadrature of s(1-s)|h|^{-1-sp} over |h| > rho (both sides).
double slab_tail_quadrature(double rho, double s, double p);

// Adaptive quadrature of s(1-s)h^{-1-sp} over [lo, hi].
double density_quadrature(double lo, double hi, double s, double p);

// Mass of the axis-k density on [lo, hi], hi = +inf allowed, from the antiderivative.
double mass(double lo, double hi, double s, double p);

// Brute-force double loop over all ordered node pairs (x, y) that differ in
// exactly one coordinate. `global` adds pairs with one node outside the
// domain twice and the far field of Zero/Constant rules.
double brute_energy(const GridFunction& u, const GridFunction& v, const KernelFamily& fam,
                    const std::vector<char>& domain, bool global);

// Brute-force operator at node x: symmetric pairs for Tabulated rules, every
// node plus far field otherwise.
double brute_operator(const GridFunction& u, const KernelFamily& fam, std::size_t node);

// Tail term by adaptive quadrature over the exact piecewise-constant profile.
double tail_quadrature(const GridFunction& u, const KernelFamily& fam, std::size_t node,
                       const std::vector<double>& hole_lo, const std::vector<double>& hole_hi);

// Direct dense solve of the p = 2 Dirichlet problem E(u, phi_i) = (f, phi_i)
// at domain nodes with u = g elsewhere, assembled from the pair sums. Returns
// the full-grid vector.
std::vector<double> linear_dirichlet_solve(const KernelFamily& fam, const GridFunction& f, const GridFunction& g,
                                           const std::vector<char>& domain);

struct Rng {
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  double log_uniform(double lo, double hi);
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
  std::mt19937_64 gen;
};

Anisotropy random_anisotropy(Rng& rng, int n, double s_lo = 0.1, double s_hi = 0.99,
                             double p_lo = 1.1, double p_hi = 4.0);

}  // namespace aniso::oracle
