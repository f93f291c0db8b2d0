#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "aniso/grid.hpp"

namespace aniso {

enum class MaximalVariant {
  HL,      // sup of |u| averages over rectangles M_rho containing the node
  Sharp,   // sup of mean oscillation over M_rho centred at the node
  Dyadic   // sup of |u| averages over dyadic tree rectangles containing the node
};

MaximalVariant parse_maximal_variant(const std::string& name);
std::string to_string(MaximalVariant v);

/// Radii 2^{-k} from the first one whose rectangle covers the whole box down
/// to the last one still holding a node per axis.
std::vector<double> dyadic_radii(const Grid& g);

/// Discrete maximal function over the given radii. Averages are node averages
/// over the lattice extended past the grid, where u takes the exterior
/// rule's far value (zero for Zero and Tabulated rules). Dyadic uses the tree
/// generations k with 2^{-k} in `radii`.
GridFunction maximal(const GridFunction& u, MaximalVariant variant, const std::vector<double>& radii);

struct MaximalResult {
  GridFunction u;
  GridFunction Mu;
  GridFunction Msharp;
  GridFunction Md;
  std::vector<double> radii;
};

MaximalResult maximal_all(const GridFunction& u);
MaximalResult maximal_all(const GridFunction& u, const std::vector<double>& radii);

struct GoodLambda {
  double lambda = 0.0;
  double gamma = 0.0;
  double lhs = 0.0;  // |{Md > 2 lambda, Msharp <= gamma lambda}|
  double rhs = 0.0;  // |{Md > lambda}|
  double ratio() const { return rhs > 0.0 ? lhs / rhs : 0.0; }
};

/// Requires u to vanish outside the grid so that the level sets are finite.
GoodLambda good_lambda(const MaximalResult& m, double lambda, double gamma);
GoodLambda good_lambda(const GridFunction& u, double lambda, double gamma);

void write_good_lambda_csv(std::ostream& os, const std::vector<GoodLambda>& rows);

/// sup_t t |{Mu > t}| / ||u||_1 over the distinct values of Mu.
double weak_type_constant(const GridFunction& u, const GridFunction& Mu);

/// Grid L^p norm (node values times cell volume).
double lp_norm(const GridFunction& u, double p);

struct PredecessorBound {
  std::size_t rects = 0;
  double worst_ratio = 0.0;  // max over Q of avg_Q |u - (u)_{Q'}| / (2^{n/s0} min_{Q} Msharp)
};

/// Checks avg_Q |u - (u)_{Q'}| against 2^{n/s0} Msharp at the nodes of Q for
/// every tree rectangle Q with predecessor Q' in the generations of `radii`.
PredecessorBound predecessor_bound(const MaximalResult& m);

}  // namespace aniso
