#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "aniso/grid.hpp"
#include "aniso/kernel.hpp"

namespace aniso {

enum class SolverMethod {
  GaussSeidel,  // nonlinear Gauss-Seidel, node by node; the reference method
  Newton,       // damped Newton with CG inner solves and Armijo backtracking
  Hybrid        // a few Gauss-Seidel sweeps, then Newton
};

SolverMethod parse_solver_method(const std::string& name);
std::string to_string(SolverMethod m);

/// Lu = f in `domain`, u = g outside. g carries the values on grid nodes
/// outside the domain and the exterior rule beyond the box; its values inside
/// the domain are ignored.
struct DirichletProblem {
  KernelFamily family;
  GridFunction f;
  GridFunction g;
  Rect domain;
  double q;  // f in L^{q/(p s_bar)}, q > n
  double tol = 1e-8;
  int max_iter = 500;
  SolverMethod method = SolverMethod::Hybrid;
  int warmup_sweeps = 4;

  void validate() const;
};

/// Convenience constructor: domain M_1(0), q = 2n.
DirichletProblem make_problem(KernelFamily fam, GridFunction f, GridFunction g);

struct SolverLogEntry {
  int iteration = 0;
  double objective = 0.0;
  double residual = 0.0;
};

struct SolveResult {
  GridFunction u;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  std::vector<SolverLogEntry> log;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, SolveResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const SolveResult& partial() const { return partial_; }

 private:
  SolveResult partial_;
};

/// Minimises J(v) = (1/p) E(v,v) - sum_i f_i v_i dV over domain nodes with the
/// exterior fixed. Throws ConvergenceError (carrying the last iterate) when
/// the normalised residual stays above tol after max_iter iterations.
SolveResult solve(const DirichletProblem& prob);

/// J(v) with v's domain values and g elsewhere.
double objective(const GridFunction& v, const DirichletProblem& prob);

/// Residuals E(u, phi_i) - (f, phi_i) at every domain node (in domain order).
std::vector<double> residuals(const GridFunction& u, const DirichletProblem& prob);

/// max_i |E(u, phi_i) - (f, phi_i)| / (1 + ||f||_inf).
double normalized_residual(const GridFunction& u, const DirichletProblem& prob);

/// u with the domain values of `inside` and the exterior of prob.g.
GridFunction with_exterior(const GridFunction& inside, const DirichletProblem& prob);

struct SupersolutionReport {
  double worst_margin = 0.0;   // min_i (E(u,phi_i) - (f,phi_i)) / (1 + ||f||_inf)
  std::size_t worst_node = 0;
  std::size_t nodes = 0;
  bool holds = true;           // worst_margin >= -tol
};

SupersolutionReport check_supersolution(const GridFunction& u, const DirichletProblem& prob);

void write_solver_log_csv(std::ostream& os, const std::vector<SolverLogEntry>& log);

}  // namespace aniso
