#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lexopt/oracle.hpp"

namespace lexopt::oracle {
namespace {

TEST(GridMaxOnBudget, SymmetricCase) {
  const auto g = grid_max_on_budget({0.5, 0.5, 1, 1, 2}, {});
  EXPECT_NEAR(g.L_C, 1, 2e-4);
  EXPECT_NEAR(g.R_B, 1, 2e-4);
}

TEST(GridMaxOnBudget, QuadraticLinearCase) {
  const auto g = grid_max_on_budget({2, 1, 1, 1, 6}, {});
  EXPECT_NEAR(g.L_C, 4, 6e-4);
  EXPECT_NEAR(g.R_B, 2, 6e-4);
}

TEST(GridMaxOnBudget, NeverExceedsClosedForm) {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> ex(0.1, 3), pr(0.1, 10), bud(0.1, 100);
  for (int i = 0; i < 300; ++i) {
    const CobbDouglasProblem prob{ex(rng), ex(rng), pr(rng), pr(rng), bud(rng)};
    EXPECT_LE(grid_max_on_budget(prob, {}).utility,
              solve_closed_form(prob).U_star + 1e-9 * std::max(1.0, solve_closed_form(prob).U_star));
  }
}

TEST(GridMaxOnBudget, ErrorShrinksWithResolution) {
  // Nested grids (n - 1 -> 2(n - 1) intervals): the argmax stays within one
  // step of the optimum, and the step halves.
  std::mt19937_64 rng(109);
  std::uniform_real_distribution<double> ex(0.1, 3), pr(0.1, 10), bud(0.1, 100);
  for (int i = 0; i < 20; ++i) {
    const CobbDouglasProblem prob{ex(rng), ex(rng), pr(rng), pr(rng), bud(rng)};
    const auto s = solve_closed_form(prob);
    GridSpec coarse{1001, GridDomain::BudgetLine, std::nullopt};
    GridSpec fine{2001, GridDomain::BudgetLine, std::nullopt};
    const auto a = grid_max_on_budget(prob, coarse);
    const auto b = grid_max_on_budget(prob, fine);
    EXPECT_NEAR(b.step, a.step / 2, 1e-12 * a.step);
    EXPECT_LE(std::abs(a.L_C - s.L_C_star), a.step);
    EXPECT_LE(std::abs(b.L_C - s.L_C_star), b.step);
  }
}

TEST(GridMaxInRegion, OptimumLiesOnTheBudgetLine) {
  const CobbDouglasProblem prob{0.7, 1.3, 2, 0.5, 10};
  GridSpec spec{400, GridDomain::Region, std::nullopt};
  const auto g = grid_max_in_region(prob, spec);
  const auto s = solve_closed_form(prob);
  EXPECT_LE(g.utility, s.U_star);
  // The best lattice point sits within a cell of the line.
  EXPECT_GT(prob.p1 * g.L_C + prob.p2 * g.R_B, prob.P_C * (1 - 0.02));
}

TEST(GridSpec, Validation) {
  EXPECT_THROW(grid_max_on_budget({1, 1, 1, 1, 1}, GridSpec{99, GridDomain::BudgetLine, std::nullopt}),
               InvalidParameter);
  GridSpec bad;
  bad.clamp_epsilon = 0.0;
  EXPECT_THROW(grid_max_on_budget({1, 1, 1, 1, 1}, bad), InvalidParameter);
}

TEST(LeibnizDeterminant, KnownMatrices) {
  EXPECT_EQ(leibniz_determinant({{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}), 1);
  EXPECT_EQ(leibniz_determinant({{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}}), -1);
  EXPECT_EQ(leibniz_determinant({{{2, 0, 1}, {1, 3, 2}, {1, 1, 1}}}), 0);
  EXPECT_EQ(leibniz_determinant({{{2, 0, 1}, {1, 3, 2}, {1, 1, 2}}}), 6);
}

TEST(FiniteDiffGradient, Examples) {
  const CobbDouglasProblem prob{0.5, 0.5, 1, 1, 1};
  auto u = [&](const std::array<double, 2>& x) { return utility(prob, x[0], x[1]); };
  auto g = finite_diff_gradient<2>(u, {1, 1}, 1e-6);
  EXPECT_NEAR(g[0], 0.5, 1e-5);
  EXPECT_NEAR(g[1], 0.5, 1e-5);

  g = finite_diff_gradient<2>([](const std::array<double, 2>&) { return 3.0; }, {1, 1}, 1e-6);
  EXPECT_EQ(g[0], 0);
  EXPECT_EQ(g[1], 0);

  g = finite_diff_gradient<2>(
      [](const std::array<double, 2>& x) { return 2.5 * x[0] - 4.0 * x[1]; }, {3, 7}, 1e-3);
  EXPECT_NEAR(g[0], 2.5, 1e-9);
  EXPECT_NEAR(g[1], -4.0, 1e-9);
}

TEST(FiniteDiffGradient, DomainErrors) {
  auto f = [](const std::array<double, 2>& x) { return x[0] + x[1]; };
  EXPECT_THROW(finite_diff_gradient<2>(f, {1e-7, 1}, 1e-6, Box<2>::positive_orthant()),
               DomainError);
  EXPECT_THROW(finite_diff_gradient<2>(f, {1, 1}, 0.0), InvalidParameter);
  EXPECT_NO_THROW(finite_diff_gradient<2>(f, {1e-5, 1}, 1e-6, Box<2>::positive_orthant()));
}

}  // namespace
}  // namespace lexopt::oracle
