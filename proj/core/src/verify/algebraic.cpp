#include "aniso/verify/algebraic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace aniso {

Lemma parse_lemma(const std::string& name) {
  if (name == "A1") return Lemma::A1;
  if (name == "A2") return Lemma::A2;
  if (name == "A3") return Lemma::A3;
  if (name == "A4min") return Lemma::A4min;
  if (name == "A4max") return Lemma::A4max;
  if (name == "L34") return Lemma::L34;
  throw std::invalid_argument("unknown lemma '" + name + "' (expected A1, A2, A3, A4min, A4max or L34)");
}

std::string to_string(Lemma l) {
  switch (l) {
    case Lemma::A1: return "A1";
    case Lemma::A2: return "A2";
    case Lemma::A3: return "A3";
    case Lemma::A4min: return "A4min";
    case Lemma::A4max: return "A4max";
    case Lemma::L34: return "L34";
  }
  return "?";
}

Lemma34Constants lemma34_constants(double p, double t) {
  if (!(p > 1.0) || !(t > p - 1.0)) throw std::invalid_argument("lemma34_constants: need p > 1 and t > p - 1");
  const double shift = t - p + 1.0;
  Lemma34Constants c;
  c.c1 = std::pow(2.0, 1.0 - p) * std::pow(p, p) / std::pow(shift, p - 1.0);
  c.c2 = (t + std::pow(2.0, 1.0 - p) * (p - 1.0)) * std::pow(p / shift, p) +
         std::pow(2.0, 2.0 * (p - 1.0) * (p - 1.0));
  return c;
}

double powdiff(double a, double b, double e) {
  if (a == b) return 0.0;
  return std::pow(a, e) * std::expm1(e * std::log1p((b - a) / a));
}

AlgebraicSides evaluate(Lemma l, const AlgebraicSample& s) {
  const double p = s.p, t = s.t, a = s.a, b = s.b, t1 = s.tau1, t2 = s.tau2;
  const double e = (p - 1.0 - t) / p;
  const double ae = std::pow(a, e), be = std::pow(b, e);
  const double dab = std::abs(b - a);
  AlgebraicSides out;
  switch (l) {
    case Lemma::A1: {
      // (b-a)|b-a|^{p-2}(a^{-t}-b^{-t}) >= t (p/(t-p+1))^p |a^e-b^e|^p
      out.rhs = std::pow(dab, p - 1.0) * std::abs(powdiff(a, b, -t));
      out.lhs = t * std::pow(p / (t - p + 1.0), p) * std::pow(std::abs(powdiff(a, b, e)), p);
      out.scale = std::max(out.lhs, out.rhs);
      break;
    }
    case Lemma::A2: {
      out.lhs = std::pow(dab, p - 1.0) * std::min(std::pow(a, -t), std::pow(b, -t));
      out.rhs = std::pow(p / (t - p + 1.0), p - 1.0) * std::pow(std::abs(powdiff(a, b, e)), p - 1.0) *
                std::min(ae, be);
      out.scale = std::max(out.lhs, out.rhs);
      break;
    }
    case Lemma::A3: {
      out.lhs = std::abs(std::pow(t1, p) - std::pow(t2, p));
      out.rhs = p * std::abs(t1 - t2) * std::max(std::pow(t1, p - 1.0), std::pow(t2, p - 1.0));
      out.scale = std::max(out.lhs, out.rhs);
      break;
    }
    case Lemma::A4min: {
      // min(t1^p, t2^p)|a^e-b^e|^p >= 2^{1-p}|t1 a^e - t2 b^e|^p - |t1-t2|^p max(a^{pe}, b^{pe})
      const double big = std::min(std::pow(t1, p), std::pow(t2, p)) * std::pow(std::abs(powdiff(a, b, e)), p);
      const double x = std::pow(2.0, 1.0 - p) * std::pow(std::abs(t1 * ae - t2 * be), p);
      const double y = std::pow(std::abs(t1 - t2), p) * std::max(std::pow(ae, p), std::pow(be, p));
      out.lhs = x - y;
      out.rhs = big;
      out.scale = std::max({big, x, y});
      break;
    }
    case Lemma::A4max: {
      const double big = std::max(std::pow(t1, p), std::pow(t2, p)) * std::pow(std::abs(powdiff(a, b, e)), p);
      const double x = std::pow(2.0, p - 1.0) * std::pow(std::abs(t1 * ae - t2 * be), p);
      const double y = std::pow(2.0, p - 1.0) * std::pow(std::abs(t1 - t2), p) *
                       std::max(std::pow(ae, p), std::pow(be, p));
      out.lhs = big;
      out.rhs = x + y;
      out.scale = std::max({big, x, y});
      break;
    }
    case Lemma::L34: {
      // |b-a|^{p-2}(b-a)(t1^p a^{-t} - t2^p b^{-t})
      //   >= c1 |t1 a^e - t2 b^e|^p - c2 |t1-t2|^p (a^{pe} + b^{pe})
      const auto c = lemma34_constants(p, t);
      const double u = std::pow(t1, p) * std::pow(a, -t), v = std::pow(t2, p) * std::pow(b, -t);
      const double lead = std::copysign(std::pow(dab, p - 1.0), b - a);
      const double left = lead * (u - v);
      const double x = c.c1 * std::pow(std::abs(t1 * ae - t2 * be), p);
      const double y = c.c2 * std::pow(std::abs(t1 - t2), p) * (std::pow(ae, p) + std::pow(be, p));
      out.lhs = x - y;
      out.rhs = left;
      out.scale = std::max({std::abs(lead) * std::max(u, v), x, y});
      break;
    }
  }
  return out;
}

InequalityReport check_algebraic(Lemma l, std::size_t samples, std::uint64_t seed, double slack) {
  if (samples == 0) throw std::invalid_argument("check_algebraic: samples must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) { return std::exp(std::log(lo) + unit(rng) * std::log(hi / lo)); };

  InequalityReport r;
  r.name = to_string(l);
  r.samples = samples;
  AlgebraicSample worst;
  for (std::size_t i = 0; i < samples; ++i) {
    AlgebraicSample s;
    s.p = 1.0 + (1.0 - unit(rng)) * 4.0;  // (1, 5]
    const double tlo = s.p - 1.0 + 1e-2;
    s.t = tlo + (1.0 - unit(rng)) * (10.0 - tlo);
    s.a = log_uniform(1e-3, 1e3);
    if (i % 4 == 3) {
      const double rel = log_uniform(1e-8, 1e-1) * (unit(rng) < 0.5 ? -1.0 : 1.0);
      s.b = std::clamp(s.a * (1.0 + rel), 1e-3, 1e3);
    } else {
      s.b = log_uniform(1e-3, 1e3);
    }
    s.tau1 = unit(rng);
    s.tau2 = unit(rng);
    const auto sides = evaluate(l, s);
    const double margin = sides.scale > 0.0 ? (sides.rhs - sides.lhs) / sides.scale : 0.0;
    if (sides.rhs - sides.lhs < -slack * sides.scale) ++r.violations;
    if (margin < r.worst_margin) {
      r.worst_margin = margin;
      worst = s;
    }
  }
  r.passed = r.violations == 0;
  r.witness = {{"p", worst.p}, {"t", worst.t}, {"a", worst.a}, {"b", worst.b}, {"tau1", worst.tau1}, {"tau2", worst.tau2}};
  r.constants = {{"slack", slack}, {"seed", static_cast<double>(seed)}};
  if (l == Lemma::L34) {
    const auto c = lemma34_constants(worst.p, worst.t);
    r.constants.emplace_back("c1", c.c1);
    r.constants.emplace_back("c2", c.c2);
  }
  return r;
}

}  // namespace aniso
