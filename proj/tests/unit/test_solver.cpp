#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "aniso/nonlocal.hpp"
#include "aniso/solver.hpp"
#include "oracles.hpp"

using namespace aniso;

namespace {

DirichletProblem problem(const Anisotropy& a, std::size_t N, double box = 2.0,
                         SolverMethod method = SolverMethod::Hybrid) {
  Grid g(a, N, box);
  auto P = make_problem(KernelFamily::axes(a), GridFunction(g), GridFunction(g));
  P.method = method;
  P.max_iter = 2000;
  return P;
}

double sup_diff(const GridFunction& u, const std::vector<double>& v) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i] - v[i]));
  return m;
}

}  // namespace

TEST(Solver, ZeroDataGivesZero) {
  auto P = problem(Anisotropy(2.0, {0.5, 0.7}), 9);
  const auto r = solve(P);
  EXPECT_TRUE(r.converged);
  for (double v : r.u.values()) EXPECT_EQ(v, 0.0);
}

TEST(Solver, Validation) {
  auto P = problem(Anisotropy(2.0, {0.5, 0.7}), 9);
  P.q = 2.0;
  EXPECT_THROW(solve(P), std::invalid_argument);
  P.q = 3.0;
  P.tol = 0.0;
  EXPECT_THROW(solve(P), std::invalid_argument);
  P.tol = 1e-8;
  P.max_iter = 0;
  EXPECT_THROW(solve(P), std::invalid_argument);
  EXPECT_THROW(parse_solver_method("jacobi"), std::invalid_argument);
  EXPECT_EQ(parse_solver_method(to_string(SolverMethod::Newton)), SolverMethod::Newton);
}

TEST(Solver, LinearOracleMatchesBruteForceAssembly) {
  // The dense oracle and the brute-force pair energy agree on random input.
  oracle::Rng rng(7);
  Anisotropy a(2.0, {0.4, 0.8});
  Grid g(a, 9, 2.0);
  const auto fam = KernelFamily::with_coefficient(a, coefficient_from_catalog("sine"));
  const Rect dom(Point{0.0, 0.0}, 1.0, a);
  const auto mask = g.mask(dom);
  GridFunction f(g), gd(g, ExteriorRule::constant(0.3));
  for (std::size_t i = 0; i < g.size(); ++i) {
    f[i] = rng.uniform(-1, 1);
    gd[i] = mask[i] ? 0.0 : rng.uniform(-1, 1);
  }
  GridFunction u(g, oracle::linear_dirichlet_solve(fam, f, gd, mask), gd.rule());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!mask[i]) continue;
    GridFunction phi(g, ExteriorRule::zero());
    phi[i] = 1.0;
    EXPECT_NEAR(oracle::brute_energy(u, phi, fam, mask, true), f[i] * g.cell_volume(), 1e-11);
  }
}

TEST(Solver, LinearCaseMatchesDirectSolve) {
  oracle::Rng rng(3);
  for (auto method : {SolverMethod::Newton, SolverMethod::Hybrid, SolverMethod::GaussSeidel}) {
    Anisotropy a(2.0, {0.6, 0.6});
    auto P = problem(a, 13, 2.0, method);
    P.tol = 1e-13;
    P.max_iter = 20000;
    const auto mask = P.f.grid().mask(P.domain);
    for (std::size_t i = 0; i < P.f.size(); ++i) {
      P.f[i] = rng.uniform(-2, 2);
      P.g[i] = mask[i] ? 0.0 : rng.uniform(0, 1);
    }
    P.g.set_rule(ExteriorRule::constant(0.5));
    const auto r = solve(P);
    const auto ref = oracle::linear_dirichlet_solve(P.family, P.f, P.g, mask);
    EXPECT_LT(sup_diff(r.u, ref), 1e-8) << to_string(method);
  }
}

TEST(Solver, ResidualMatchesNodePairing) {
  oracle::Rng rng(11);
  Anisotropy a(1.5, {0.3, 0.9});
  auto P = problem(a, 11);
  GridFunction u(P.f.grid(), ExteriorRule::constant(0.2));
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = rng.uniform(-1, 1);
    P.f[i] = rng.uniform(-1, 1);
  }
  P.g = u;
  const auto R = residuals(u, P);
  const auto nodes = u.grid().nodes_in(P.domain);
  ASSERT_EQ(R.size(), nodes.size());
  for (std::size_t li = 0; li < nodes.size(); ++li) {
    const double ref = pairing_with_node(u, P.family, nodes[li]) - P.f[nodes[li]] * u.grid().cell_volume();
    EXPECT_NEAR(R[li], ref, 1e-12 * (1 + std::abs(ref)));
  }
}

TEST(Solver, ObjectiveMatchesWeakForm) {
  oracle::Rng rng(5);
  Anisotropy a(3.0, {0.5, 0.8});
  auto P = problem(a, 9);
  GridFunction v(P.f.grid(), ExteriorRule::constant(-0.4));
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = rng.uniform(-1, 1);
    P.f[i] = rng.uniform(-1, 1);
  }
  P.g = v;
  const auto mask = v.grid().mask(P.domain);
  double lin = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (mask[i]) lin += P.f[i] * v[i] * v.grid().cell_volume();
  EXPECT_NEAR(objective(v, P), weak_form(v, v, P.family, mask) / 3.0 - lin, 1e-12);
}

TEST(Solver, NonlinearMethodsAgree) {
  oracle::Rng rng(21);
  for (double p : {1.3, 1.8, 2.5, 4.0}) {
    Anisotropy a(p, {0.45, 0.85});
    auto Pn = problem(a, 11, 2.0, SolverMethod::Hybrid);
    for (std::size_t i = 0; i < Pn.f.size(); ++i) Pn.f[i] = rng.uniform(-1, 1);
    Pn.tol = 1e-10;
    auto Pg = Pn;
    Pg.method = SolverMethod::GaussSeidel;
    Pg.max_iter = 100000;
    const auto rn = solve(Pn);
    const auto rg = solve(Pg);
    EXPECT_LT(sup_diff(rn.u, rg.u.values()), 1e-5) << "p=" << p;
    EXPECT_LE(normalized_residual(rn.u, Pn), 1e-10);
  }
}

TEST(Solver, CoefficientFamilyConverges) {
  Anisotropy a(1.7, {0.35, 0.75});
  auto P = problem(a, 13);
  P.family = KernelFamily::with_coefficient(a, coefficient_from_catalog("sine"));
  for (std::size_t i = 0; i < P.f.size(); ++i) P.f[i] = 1.0;
  const auto r = solve(P);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.residual, P.tol);
  EXPECT_GT(r.u[P.f.grid().center_node()], 0.0);
}

TEST(Solver, EnergyDescent) {
  oracle::Rng rng(2);
  for (auto method : {SolverMethod::GaussSeidel, SolverMethod::Hybrid}) {
    Anisotropy a(2.6, {0.5, 0.9});
    auto P = problem(a, 11, 2.0, method);
    P.max_iter = 100000;
    for (std::size_t i = 0; i < P.f.size(); ++i) P.f[i] = rng.uniform(-1, 1);
    const auto r = solve(P);
    for (std::size_t i = 1; i < r.log.size(); ++i)
      EXPECT_LE(r.log[i].objective, r.log[i - 1].objective + 1e-15 * std::abs(r.log[i - 1].objective))
          << to_string(method) << " iteration " << i;
  }
}

TEST(Solver, MaximumPrinciple) {
  oracle::Rng rng(9);
  for (int trial = 0; trial < 6; ++trial) {
    const auto a = oracle::random_anisotropy(rng, 2, 0.2, 0.95, 1.2, 4.0);
    auto P = problem(a, 11);
    const auto mask = P.f.grid().mask(P.domain);
    for (std::size_t i = 0; i < P.g.size(); ++i) P.g[i] = mask[i] ? 0.0 : rng.uniform(0, 1);
    P.g.set_rule(ExteriorRule::constant(rng.uniform(0, 1)));
    const auto r = solve(P);
    for (double v : r.u.values()) {
      EXPECT_GE(v, -1e-9);
      EXPECT_LE(v, 1 + 1e-9);
    }
  }
}

TEST(Solver, Comparison) {
  oracle::Rng rng(13);
  for (int trial = 0; trial < 4; ++trial) {
    const auto a = oracle::random_anisotropy(rng, 2, 0.2, 0.95, 1.3, 3.5);
    auto P1 = problem(a, 11);
    const auto mask = P1.f.grid().mask(P1.domain);
    for (std::size_t i = 0; i < P1.g.size(); ++i) {
      P1.f[i] = rng.uniform(-1, 1);
      P1.g[i] = mask[i] ? 0.0 : rng.uniform(-1, 1);
    }
    auto P2 = P1;
    for (std::size_t i = 0; i < P2.g.size(); ++i) {
      P2.f[i] += rng.uniform(0, 0.5);
      if (!mask[i]) P2.g[i] += rng.uniform(0, 0.5);
    }
    const auto u1 = solve(P1).u;
    const auto u2 = solve(P2).u;
    for (std::size_t i = 0; i < u1.size(); ++i) EXPECT_LE(u1[i], u2[i] + 1e-9);
  }
}

TEST(Solver, ScalingCovariance) {
  // Solving on the pulled-back grid with f scaled by lambda^{s_max p} gives
  // the same nodal values, and the local energy scales by
  // lambda^{-(n - s_bar p) s_max / s_bar}.
  oracle::Rng rng(4);
  for (double lambda : {2.0, 3.5}) {
    Anisotropy a(1.8, {0.4, 0.75});
    auto P1 = problem(a, 13);
    for (std::size_t i = 0; i < P1.f.size(); ++i) P1.f[i] = rng.uniform(-1, 1);
    P1.tol = 1e-11;
    Grid g2(a, 13, 2.0 / lambda);
    const double fs = std::pow(lambda, a.s_max() * a.p());
    std::vector<double> f2 = P1.f.values();
    for (auto& v : f2) v *= fs;
    DirichletProblem P2{P1.family, GridFunction(g2, f2), GridFunction(g2), Rect(Point{0.0, 0.0}, 1.0 / lambda, a),
                        P1.q, 1e-11 * fs};
    const auto u1 = solve(P1).u;
    const auto u2 = solve(P2).u;
    for (std::size_t i = 0; i < u1.size(); ++i) EXPECT_NEAR(u1[i], u2[i], 1e-8);
    const double e1 = energy(u1, u1, P1.family, P1.domain);
    const double e2 = energy(u2, u2, P2.family, P2.domain);
    const double n = a.dim();
    EXPECT_NEAR(e2 / e1, std::pow(lambda, -(n - a.s_bar() * a.p()) * a.s_max() / a.s_bar()), 1e-6);
  }
}

TEST(Solver, SupersolutionChecks) {
  oracle::Rng rng(17);
  Anisotropy a(2.2, {0.5, 0.65});
  auto P = problem(a, 11);
  for (std::size_t i = 0; i < P.f.size(); ++i) P.f[i] = rng.uniform(-1, 1);
  const auto u = solve(P).u;
  EXPECT_TRUE(check_supersolution(u, P).holds);

  auto Q = P;
  for (auto& v : Q.f.values()) v -= 1.0;
  const auto rep = check_supersolution(u, Q);
  EXPECT_GT(rep.worst_margin, 0.0);

  auto Z = problem(a, 11);
  const auto mask = Z.f.grid().mask(Z.domain);
  for (std::size_t i = 0; i < Z.g.size(); ++i) Z.g[i] = mask[i] ? 0.0 : rng.uniform(0, 1);
  const auto uz = solve(Z).u;
  auto shifted = uz;
  for (auto& v : shifted.values()) v += 0.7;
  auto Zs = Z;
  for (auto& v : Zs.g.values()) v += 0.7;
  Zs.g.set_rule(ExteriorRule::constant(0.7));
  EXPECT_TRUE(check_supersolution(shifted, Zs).holds);

  auto bump = uz;
  bump[uz.grid().center_node()] -= 0.5;
  EXPECT_FALSE(check_supersolution(bump, Z).holds);
}

TEST(Solver, NonConvergenceCarriesPartialResult) {
  Anisotropy a(2.0, {0.5, 0.9});
  auto P = problem(a, 15, 2.0, SolverMethod::GaussSeidel);
  for (auto& v : P.f.values()) v = 1.0;
  P.max_iter = 2;
  try {
    solve(P);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_FALSE(e.partial().converged);
    EXPECT_EQ(e.partial().iterations, 2);
    EXPECT_EQ(e.partial().log.size(), 3u);
    EXPECT_GT(e.partial().residual, P.tol);
  }
}

TEST(Solver, LogCsv) {
  std::ostringstream os;
  write_solver_log_csv(os, {{0, 1.5, 0.25}, {1, 1.0, 0.125}});
  EXPECT_EQ(os.str(), "iteration,J,residual\n0,1.5,0.25\n1,1,0.125\n");
}
