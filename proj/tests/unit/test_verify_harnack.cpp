#include <gtest/gtest.h>

#include <cmath>

#include "aniso/cutoff.hpp"
#include "aniso/nonlocal.hpp"
#include "aniso/verify/harnack.hpp"

using namespace aniso;

namespace {

bool in_rect(const Point& x, double r, const Anisotropy& a) {
  for (int k = 0; k < a.dim(); ++k)
    if (std::abs(x[k]) >= std::pow(r, a.axis_exponent(k)) * (1.0 - 1e-12)) return false;
  return true;
}

DirichletProblem torsion(const Anisotropy& a, std::size_t N, double shift = 0.0) {
  const Grid g(a, N, 1.0);
  auto f = GridFunction::sample(g, [](const Point&) { return 1.0; });
  GridFunction gg(g, std::vector<double>(g.size(), shift), ExteriorRule::constant(shift));
  return make_problem(KernelFamily::axes(a), f, gg);
}

}  // namespace

TEST(VerifyHarnack, ConstantOneHasUnitConstant) {
  const Anisotropy a(2.0, {0.5, 0.7});
  const Grid g(a, 33, 1.0);
  const auto fam = KernelFamily::axes(a);
  GridFunction one(g, std::vector<double>(g.size(), 1.0), ExteriorRule::constant(1.0));
  auto prob = make_problem(fam, GridFunction(g), one);
  const auto r = weak_harnack(one, prob);
  EXPECT_DOUBLE_EQ(r.value("inf"), 1.0);
  EXPECT_NEAR(r.value("average"), 1.0, 1e-15);
  EXPECT_EQ(r.value("tail"), 0.0);
  EXPECT_EQ(r.value("f_term"), 0.0);
  EXPECT_NEAR(r.worst_margin, 1.0, 1e-15);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.value("bmo_p"), 0.0);
  // Moser ratio for u = 1: |M_in|^{1/gamma} / (G r_in^{-s_max p} |M_out|) from node counts
  const double gamma = a.moser_gain(), dv = g.cell_volume();
  double theta = 0.5;
  for (int j = 0; j < 4; ++j) {
    const double ro = 0.25 + std::ldexp(1.0, -(j + 2)), ri = 0.25 + std::ldexp(1.0, -(j + 3));
    double ci = 0, co = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      ci += in_rect(g.point(i), ri, a);
      co += in_rect(g.point(i), ro, a);
    }
    double geo = 0.0;
    for (int k = 0; k < 2; ++k) geo += std::pow(std::pow(ro / ri, a.axis_exponent(k)) - 1.0, -2.0 * a.order(k));
    const double expect = std::pow(ci * dv, 1.0 / gamma) / (geo * std::pow(ri, -2.0 * a.s_max()) * co * dv);
    EXPECT_NEAR(r.value("moser[" + std::to_string(j) + "]"), expect, 1e-12 * expect);
    EXPECT_NEAR(r.value("t[" + std::to_string(j) + "]"), theta + 1.0, 1e-12);
    theta *= gamma;
  }
}

TEST(VerifyHarnack, TorsionPipeline) {
  const Anisotropy a(2.0, {0.5, 0.5});
  auto prob = torsion(a, 33);
  const auto res = solve(prob);
  const Grid& g = res.u.grid();
  const auto r = weak_harnack(res.u, prob);
  EXPECT_TRUE(r.passed);
  EXPECT_GT(r.worst_margin, 0.0);
  double inf = INFINITY, avg = 0.0, cnt = 0.0, fsum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point x = g.point(i);
    if (in_rect(x, 0.25, a)) inf = std::min(inf, res.u[i]);
    if (in_rect(x, 0.5, a)) avg += std::sqrt(res.u[i]), cnt += 1.0;
    if (in_rect(x, 15.0 / 16.0, a)) fsum += g.cell_volume();
  }
  avg = std::pow(avg / cnt, 2.0);
  const double e = prob.q / (2.0 * 0.5);
  EXPECT_DOUBLE_EQ(r.value("inf"), inf);
  EXPECT_NEAR(r.value("average"), avg, 1e-14 * avg);
  EXPECT_NEAR(r.value("f_term"), std::pow(fsum, 1.0 / e), 1e-14);
  EXPECT_EQ(r.value("tail"), 0.0);  // zero exterior and u >= 0
  EXPECT_NEAR(r.worst_margin, (inf + r.value("f_term")) / avg, 1e-13);
  EXPECT_NEAR(r.value("raw_ratio"), inf / avg, 1e-13);
  EXPECT_GT(r.value("bmo_p"), 0.0);
  for (int j = 0; j < 4; ++j) EXPECT_GT(r.value("moser[" + std::to_string(j) + "]"), 0.0);
  EXPECT_NEAR(r.value("delta"), 2.0 * 0.5 / 1.0 * (prob.q - 2.0) / prob.q, 1e-15);
}

TEST(VerifyHarnack, RobustAlongOrderSweep) {
  for (double p : {1.5, 2.0, 3.0}) {
    double lo = INFINITY, hi = 0.0, rlo = INFINITY, rhi = 0.0;
    for (double s : {0.4, 0.7, 0.9, 0.99}) {
      const Anisotropy a(p, {s, s}, 0.4);
      auto prob = torsion(a, 33);
      const auto r = weak_harnack(solve(prob).u, prob);
      ASSERT_TRUE(r.passed);
      lo = std::min(lo, r.worst_margin);
      hi = std::max(hi, r.worst_margin);
      rlo = std::min(rlo, r.value("raw_ratio"));
      rhi = std::max(rhi, r.value("raw_ratio"));
    }
    EXPECT_GT(rlo, 0.0);
    EXPECT_LT(rhi / rlo, 10.0) << "p = " << p;
    if (p >= 2.0) EXPECT_LT(hi / lo, 10.0) << "p = " << p;
  }
}

TEST(VerifyHarnack, Rejections) {
  const Anisotropy a(2.0, {0.5, 0.5});
  auto prob = torsion(a, 17);
  GridFunction u(prob.f.grid(), std::vector<double>(prob.f.size(), 1.0));
  u[prob.f.grid().center_node()] = -1.0;
  EXPECT_THROW(weak_harnack(u, prob), std::invalid_argument);
  u[prob.f.grid().center_node()] = 1.0;
  EXPECT_THROW(weak_harnack(u, prob, {1.0, 0.5, 4}), std::invalid_argument);
  EXPECT_THROW(weak_harnack(u, prob, {0.0, 0.5, 4}), std::invalid_argument);
  LogLemmaOptions lo;
  lo.eps = 0.0;
  EXPECT_THROW(check_log_lemma(u, prob, lo), std::invalid_argument);
  lo.eps = 2.0;
  EXPECT_THROW(check_log_lemma(u, prob, lo), std::invalid_argument);
  lo.eps = 0.5;
  lo.lambda = 1.0;
  EXPECT_THROW(check_log_lemma(u, prob, lo), std::invalid_argument);
}

TEST(VerifyHarnack, LogLemmaConstantFunction) {
  const Anisotropy a(1.7, {0.5, 0.8});
  const Grid g(a, 25, 1.0);
  GridFunction c(g, std::vector<double>(g.size(), 0.3), ExteriorRule::constant(0.3));
  auto prob = make_problem(KernelFamily::axes(a), GridFunction(g), c);
  LogLemmaOptions lo;
  lo.eps = 0.3;
  const auto r = check_log_lemma(c, prob, lo);
  EXPECT_EQ(r.value("lhs"), 0.0);
  EXPECT_EQ(r.value("f_term"), 0.0);
  EXPECT_EQ(r.value("tail_term"), 0.0);
  EXPECT_GT(r.value("rhs"), 0.0);
  EXPECT_TRUE(r.passed);
  EXPECT_DOUBLE_EQ(r.value("C"), log_lemma_constant(prob.family));
}

TEST(VerifyHarnack, LogLemmaOnSolvedSupersolutions) {
  const Anisotropy a(2.0, {0.5, 0.5});
  // shifted torsion: u = torsion - 0.05, negative near the boundary, so the tail term is active
  auto prob = torsion(a, 33, -0.05);
  const auto u = solve(prob).u;
  ASSERT_TRUE(check_supersolution(u, prob).holds);
  double mn = INFINITY;
  for (std::size_t i : u.grid().nodes_in(Rect(Point{0.0, 0.0}, 0.75, a))) mn = std::min(mn, u[i]);
  ASSERT_GT(mn, 0.0);
  LogLemmaOptions lo;
  lo.eps = mn / 2.0;
  const auto r1 = check_log_lemma(u, prob, lo);
  EXPECT_TRUE(r1.passed);
  EXPECT_GT(r1.value("lhs"), 0.0);
  EXPECT_GT(r1.value("tail_term"), 0.0);
  EXPECT_GT(r1.value("f_term"), 0.0);
  lo.eps = mn;
  const auto r2 = check_log_lemma(u, prob, lo);
  EXPECT_TRUE(r2.passed);
  EXPECT_EQ(r2.value("lhs"), r1.value("lhs"));
  EXPECT_NEAR(r2.value("f_term"), r1.value("f_term") / 2.0, 1e-14 * r1.value("f_term"));
  EXPECT_NEAR(r2.value("tail_term"), r1.value("tail_term") / 2.0, 1e-14 * r1.value("tail_term"));
  EXPECT_EQ(r2.value("cutoff_term"), r1.value("cutoff_term"));
  // the tail supremum matches the library tail integral at the worst node
  double sup = 0.0;
  const Rect hole(Point{0.0, 0.0}, 0.75, a);
  for (std::size_t i : u.grid().nodes_in(Rect(Point{0.0, 0.0}, 0.625, a)))
    sup = std::max(sup, tail_term(u, prob.family, i, hole));
  EXPECT_EQ(r1.value("tail_sup"), sup);
}

TEST(VerifyHarnack, LogLemmaOnBarrier) {
  // a harmonic-type barrier: f = 0 with positive, tilted exterior data
  for (double p : {1.8, 3.0}) {
    const Anisotropy a(p, {0.6, 0.9});
    const Grid g(a, 25, 1.0);
    auto data = GridFunction::sample(g, [](const Point& x) { return 1.0 + 0.8 * x[0]; }, ExteriorRule::tabulated());
    auto prob = make_problem(KernelFamily::axes(a), GridFunction(g), data);
    const auto u = solve(prob).u;
    LogLemmaOptions lo;
    lo.eps = 0.15;
    const auto r = check_log_lemma(u, prob, lo);
    EXPECT_TRUE(r.passed) << "p = " << p;
    EXPECT_GT(r.value("lhs"), 0.0);
  }
}

TEST(VerifyHarnack, BmoOfExponentialProfile) {
  const Anisotropy a(3.0, {0.5, 0.5});
  const Grid g(a, 33, 1.0);
  const auto u = GridFunction::sample(g, [](const Point& x) { return std::exp(2.0 * x[0]); });
  const auto b = bmo_log(u, 0.5);
  double s = 0.0, n = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (in_rect(g.point(i), 0.5, a)) s += std::pow(std::abs(2.0 * g.point(i)[0]), 3.0), n += 1.0;
  EXPECT_NEAR(b.mean_oscillation_p, std::cbrt(s / n), 1e-12);
  EXPECT_GT(b.sup_mean_oscillation, 0.0);
  EXPECT_LE(b.sup_mean_oscillation, b.mean_oscillation_p);
  auto bad = u;
  bad[g.center_node()] = 0.0;
  EXPECT_THROW(bmo_log(bad, 0.5), std::domain_error);
}
