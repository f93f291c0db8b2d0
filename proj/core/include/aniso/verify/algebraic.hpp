#pragma once

#include <cstdint>
#include <string>

#include "aniso/verify/report.hpp"

namespace aniso {

enum class Lemma { A1, A2, A3, A4min, A4max, L34 };

Lemma parse_lemma(const std::string& name);
std::string to_string(Lemma l);

struct Lemma34Constants {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// c1 = 2^{1-p} p^p / (t-p+1)^{p-1} and
/// c2 = (t + 2^{1-p}(p-1)) (p/(t-p+1))^p + 2^{2(p-1)^2}. Requires p > 1, t > p-1.
Lemma34Constants lemma34_constants(double p, double t);

/// One sample of the algebraic inequalities. Unused fields are ignored.
struct AlgebraicSample {
  double p = 2.0;
  double t = 3.0;
  double a = 1.0;
  double b = 1.0;
  double tau1 = 1.0;
  double tau2 = 1.0;
};

struct AlgebraicSides {
  double lhs = 0.0;    // the side claimed to be smaller
  double rhs = 0.0;
  double scale = 0.0;  // magnitude used for the relative slack
};

/// Evaluates both sides, arranged so that the inequality reads lhs <= rhs.
AlgebraicSides evaluate(Lemma l, const AlgebraicSample& s);

/// Draws `samples` random tuples (a, b log-uniform in (1e-3, 1e3), tau in
/// [0,1], p in (1,5], t in (p-1+1e-2, 10]; every fourth pair has b within a
/// small relative distance of a) and counts violations beyond
/// `slack` * scale.
InequalityReport check_algebraic(Lemma l, std::size_t samples, std::uint64_t seed = 1,
                                 double slack = 1e-12);

/// b^e - a^e without cancellation when b is close to a.
double powdiff(double a, double b, double e);

}  // namespace aniso
