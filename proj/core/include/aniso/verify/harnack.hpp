#pragma once

#include "aniso/grid.hpp"
#include "aniso/kernel.hpp"
#include "aniso/solver.hpp"
#include "aniso/verify/report.hpp"

namespace aniso {

/// Calibrated constant for the first term of the logarithmic estimate:
/// 2^{p+2} times the cut-off constant.
double log_lemma_constant(const KernelFamily& fam);

struct LogLemmaOptions {
  Point x0;             // empty means the origin
  double r = 0.5;
  double lambda = 1.5;
  double eps = 0.0;     // must be positive
  double constant = 0;  // <= 0 selects log_lemma_constant
};

/// LHS: discrete energy of log u over M_r x M_r. RHS: the three-term bound
/// (cut-off sum, f term with exponent (q - p s_bar)/q, tail supremum over
/// M_{(lambda+1)r/2}). u must be >= eps at every node of M_{lambda r}.
/// worst_margin = (rhs - lhs) / rhs.
InequalityReport check_log_lemma(const GridFunction& u, const DirichletProblem& prob, const LogLemmaOptions& opts);

struct WeakHarnackOptions {
  double p0 = 0.5;
  double bmo_radius = 0.5;
  int moser_rungs = 4;
};

/// Terms of the weak Harnack bound on M_1(0): inf over M_{1/4}, the
/// p0-average over M_{1/2}, the tail supremum over M_{15/16} and the f norm
/// over M_{15/16}. worst_margin = C_emp = (inf + tail + f) / average, and
/// values also carry the raw inf / average, the BMO quantities of log u and
/// the negative-moment ratios along the Moser ladder (only when p < n/s_bar
/// and u > 0 on M_{1/2}).
InequalityReport weak_harnack(const GridFunction& u, const DirichletProblem& prob, const WeakHarnackOptions& opts = {});

/// (avg_{M_r} |log u - (log u)_{M_r}|^p)^{1/p} and the sup over centred
/// sub-rectangles M_{2^{-j}}(x) inside M_r of avg |log u - mean|. Throws
/// std::domain_error if u <= 0 at a node of M_r.
struct BmoEstimate {
  double mean_oscillation_p = 0.0;
  double sup_mean_oscillation = 0.0;
};
BmoEstimate bmo_log(const GridFunction& u, double r);

/// ||f||_{L^{q/(p s_bar)}(M)} over the nodes of M.
double data_norm(const GridFunction& f, double q, const Rect& m);

}  // namespace aniso
