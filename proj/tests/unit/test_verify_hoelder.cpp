#include <gtest/gtest.h>

#include <cmath>

#include "aniso/nonlocal.hpp"
#include "aniso/verify/hoelder.hpp"

using namespace aniso;

namespace {

double smooth(const Point& x) { return std::sin(1.3 * x[0] + 0.4) + 0.5 * std::cos(2.0 * x[1]) + x[0] * x[1]; }

}  // namespace

TEST(VerifyHoelder, ConstantGivesInfiniteExponent) {
  const Anisotropy a(2.0, {0.5, 0.5});
  const Grid g(a, 33, 1.0);
  GridFunction c(g, std::vector<double>(g.size(), 2.0), ExteriorRule::constant(2.0));
  auto prob = make_problem(KernelFamily::axes(a), GridFunction(g), c);
  const auto r = hoelder_decay(c, prob);
  EXPECT_TRUE(std::isinf(r.worst_margin));
  EXPECT_GT(r.worst_margin, 0.0);
  EXPECT_TRUE(r.passed);
  for (int k = 0; k < static_cast<int>(r.samples); ++k) EXPECT_EQ(r.value("osc[" + std::to_string(k) + "]"), 0.0);
}

TEST(VerifyHoelder, PowerProfileRecoversExponent) {
  // u = |x_1|^{0.6} about the origin: osc over M_rho is rho^{0.6} exactly on nodes
  // when the rectangle's node extent is a power of two times the spacing.
  const Anisotropy a(2.0, {0.5, 0.5});
  const Grid g(a, 129, 1.0);
  const auto u = GridFunction::sample(g, [](const Point& x) { return std::pow(std::abs(x[0]), 0.6); });
  auto prob = make_problem(KernelFamily::axes(a), GridFunction(g), GridFunction(g));
  const auto r = hoelder_decay(u, prob);
  // node maxima sit one spacing inside each rectangle: osc_k = (2^{-k} - 1/64)^{0.6}
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int w = static_cast<int>(r.value("fit_points"));
  for (int k = 0; k < w; ++k) {
    const double x = k * std::log(2.0), y = 0.6 * std::log(std::ldexp(1.0, -k) - 1.0 / 64.0);
    EXPECT_NEAR(r.value("osc[" + std::to_string(k) + "]"), std::exp(y), 1e-12);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  EXPECT_NEAR(r.worst_margin, -(w * sxy - sx * sy) / (w * sxx - sx * sx), 1e-12);
  EXPECT_NEAR(r.worst_margin, 0.6, 0.05);
  EXPECT_EQ(r.value("scales"), 6.0);
  EXPECT_EQ(w, 4);
}

TEST(VerifyHoelder, ManufacturedSmoothSolution) {
  for (double p : {1.5, 2.0, 3.0}) {
    const Anisotropy a(p, {0.6, 0.9});
    const Grid g(a, 33, 1.0);
    const auto fam = KernelFamily::axes(a);
    auto prob = manufactured_problem(fam, g, smooth);
    // the sampled function solves the discrete problem
    EXPECT_LT(normalized_residual(prob.g, prob), 1e-12);
    const auto res = solve(prob);
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(res.u[i] - smooth(g.point(i))));
    EXPECT_LT(err, 1e-4) << "p = " << p;
    const auto r = hoelder_decay(res.u, prob);
    EXPECT_GE(r.worst_margin, 0.9) << "p = " << p;
  }
}

TEST(VerifyHoelder, TorsionSolutionsDecay) {
  for (double s : {0.4, 0.7, 0.95}) {
    const Anisotropy a(2.0, {s, s}, 0.4);
    const Grid g(a, 33, 1.0);
    auto f = GridFunction::sample(g, [](const Point&) { return 1.0; });
    auto prob = make_problem(KernelFamily::axes(a), f, GridFunction(g));
    const auto r = hoelder_decay(solve(prob).u, prob);
    EXPECT_GT(r.worst_margin, 0.0);
    EXPECT_TRUE(std::isfinite(r.worst_margin));
    EXPECT_GT(r.value("C_fit"), 0.0);
  }
}

TEST(VerifyHoelder, OffCentreAndRejections) {
  const Anisotropy a(2.0, {0.5, 0.5});
  const Grid g(a, 33, 1.0);
  const auto u = GridFunction::sample(g, smooth);
  auto prob = make_problem(KernelFamily::axes(a), GridFunction(g), GridFunction(g));
  HoelderOptions o;
  o.center = {0.25, -0.25};
  const auto r = hoelder_decay(u, prob, o);
  EXPECT_EQ(r.value("rho[0]"), 0.5);  // M_1 around an off-centre point leaves the box
  EXPECT_EQ(r.value("center[0]"), 0.25);
  const Grid coarse(a, 9, 1.0);
  auto pc = make_problem(KernelFamily::axes(a), GridFunction(coarse), GridFunction(coarse));
  EXPECT_THROW(hoelder_decay(GridFunction(coarse), pc), std::invalid_argument);
  o.base = 1.0;
  EXPECT_THROW(hoelder_decay(u, prob, o), std::invalid_argument);
  EXPECT_THROW(hoelder_decay(u, pc), std::invalid_argument);
}

TEST(VerifyHoelder, BaseFourUsesFewerScales) {
  const Anisotropy a(2.0, {0.5, 0.5});
  const Grid g(a, 65, 1.0);
  const auto u = GridFunction::sample(g, smooth);
  auto prob = make_problem(KernelFamily::axes(a), GridFunction(g), GridFunction(g));
  HoelderOptions o;
  o.base = 4.0;
  const auto r4 = hoelder_decay(u, prob, o);
  const auto r2 = hoelder_decay(u, prob);
  EXPECT_EQ(r4.value("scales"), 3.0);
  EXPECT_EQ(r2.value("scales"), 5.0);
  EXPECT_NEAR(r4.worst_margin, r2.worst_margin, 0.3);
}
