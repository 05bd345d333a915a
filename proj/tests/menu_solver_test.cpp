#include "tprice/menu_solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_scenarios.hpp"
#include "tprice/errors.hpp"
#include "tprice/verifier.hpp"

namespace tprice {
namespace {

using testing::log_budget_menu;

// Roots of 2.2 i log(1+s) = 1.1 s, frozen from an independent bracketing
// root finder (Brent, xtol 1e-14).
constexpr double kRoot1 = 2.51286241725234;
constexpr double kRoot2 = 9.346651929052214;
constexpr double kRoot3 = 17.509802854698314;

TEST(FeasibleInterval, MatchesRootOracle) {
  const auto sc = log_budget_menu(2.2, 1.0, 3);
  const auto a1 = feasible_interval(sc, 0);
  EXPECT_EQ(a1.lo, 0.0);
  EXPECT_NEAR(a1.hi, 2.513, 1e-3);
  EXPECT_NEAR(a1.hi, kRoot1, 1e-9);
  EXPECT_NEAR(feasible_interval(sc, 1).hi, kRoot2, 1e-9);
  EXPECT_NEAR(feasible_interval(sc, 2).hi, kRoot3, 1e-9);
}

TEST(FeasibleInterval, IsNestedAcrossTypes) {
  const auto sc = log_budget_menu(2.2, 1.0, 5);
  double prev = 0.0;
  for (std::size_t i = 0; i < sc.types(); ++i) {
    const double a = feasible_interval(sc, i).hi;
    EXPECT_GE(a, prev);
    // Grid oracle: f_i >= 0 just inside, < 0 just outside.
    EXPECT_GE(sc.net(i, a * (1 - 1e-6)), 0.0);
    EXPECT_LT(sc.net(i, a * (1 + 1e-6)), 0.0);
    prev = a;
  }
}

TEST(FeasibleInterval, DegenerateWhenNetIsNeverPositive) {
  MenuScenario sc;
  sc.budgets = {ScalarFunction::logarithmic(0.5)};
  sc.cost = ScalarFunction::linear(1.0);
  sc.profit = ScalarFunction::linear(0.1);
  const auto a = feasible_interval(sc, 0);
  EXPECT_EQ(a.lo, 0.0);
  EXPECT_EQ(a.hi, 0.0);
  EXPECT_THROW(maximize_net(sc, 0), NoInteriorMaximizerError);
}

TEST(FeasibleInterval, UnboundedSetAsksForLargerBracket) {
  MenuScenario sc;
  sc.budgets = {ScalarFunction::linear(2.0)};
  sc.cost = ScalarFunction::linear(1.0);
  sc.profit = ScalarFunction::linear(0.1);
  sc.s_search_max = 1e4;
  EXPECT_THROW(feasible_interval(sc, 0), UnboundedFeasibleSetError);
}

TEST(MaximizeNet, ReproducesClosedForm) {
  const auto sc = log_budget_menu(2.2, 1.0, 3);
  EXPECT_NEAR(maximize_net(sc, 0), 1.0, 1e-6);
  EXPECT_NEAR(maximize_net(sc, 1), 3.0, 1e-6);
  EXPECT_NEAR(maximize_net(sc, 2), 5.0, 1e-6);
  EXPECT_LT(maximize_net(sc, 0), maximize_net(sc, 1));
  EXPECT_THROW(maximize_net(sc, 3), std::out_of_range);
}

TEST(MaximizeNet, PowerBudgetClosedForm) {
  // P_i = 2 i sqrt(s), C + B = 1.1 s  =>  s_i = (i / 1.1)^2.
  MenuScenario sc;
  for (int i = 1; i <= 3; ++i) sc.budgets.push_back(ScalarFunction::power(2.0 * i, 0.5));
  sc.cost = ScalarFunction::linear(1.0);
  sc.profit = ScalarFunction::linear(0.1);
  for (int i = 1; i <= 3; ++i) {
    EXPECT_NEAR(maximize_net(sc, i - 1), std::pow(i / 1.1, 2), 1e-6);
  }
}

TEST(MaximizeNet, TabulatedBudget) {
  std::vector<double> x, y;
  for (int k = 0; k <= 20000; ++k) {
    x.push_back(k * 0.001);
    y.push_back(2.2 * std::log1p(x.back()));
  }
  MenuScenario sc;
  sc.budgets = {ScalarFunction::tabulated(x, y)};
  sc.cost = ScalarFunction::linear(1.0);
  sc.profit = ScalarFunction::linear(0.1);
  EXPECT_NEAR(maximize_net(sc, 0), 1.0, 1e-2);
}

TEST(SolveMenu, LogBudgetExample) {
  const auto menu = solve_menu(log_budget_menu(2.2, 1.0, 3));
  ASSERT_EQ(menu.entries.size(), 3u);
  const double s[] = {1, 3, 5}, p[] = {1.1, 3.3, 5.5};
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(menu.entries[k].quality, s[k], 1e-6);
    EXPECT_NEAR(menu.entries[k].price, p[k], 1e-6);
    EXPECT_GE(menu.entries[k].net, 0.0);
  }
}

TEST(SolveMenu, SingleType) {
  const auto menu = solve_menu(log_budget_menu(2.2, 1.0, 1));
  ASSERT_EQ(menu.entries.size(), 1u);
  EXPECT_NEAR(menu.entries[0].quality, 1.0, 1e-6);
  EXPECT_NEAR(menu.entries[0].price, 1.1, 1e-6);
  EXPECT_NEAR(menu.entries[0].net, 2.2 * std::log(2.0) - 1.1, 1e-6);
}

TEST(SolveMenu, ZeroTargetProfitPricesAtCost) {
  auto sc = log_budget_menu(2.2, 1.0, 3);
  sc.profit = ScalarFunction::linear(0.0);
  const auto menu = solve_menu(sc);
  for (std::size_t k = 0; k < 3; ++k) {
    // f_i' = 2.2 i / (1+s) - 1  =>  s_i = 2.2 i - 1
    EXPECT_NEAR(menu.entries[k].quality, 2.2 * (k + 1) - 1, 1e-6);
    EXPECT_DOUBLE_EQ(menu.entries[k].price, sc.cost(menu.entries[k].quality));
  }
}

TEST(SolveMenu, IdenticalBudgetsAreRejected) {
  MenuScenario sc;
  sc.budgets = {ScalarFunction::logarithmic(2.2), ScalarFunction::logarithmic(2.2)};
  sc.cost = ScalarFunction::linear(1.0);
  sc.profit = ScalarFunction::linear(0.1);
  EXPECT_THROW(solve_menu(sc), CertificationError);
}

TEST(SolveMenu, FailingTypePropagates) {
  MenuScenario sc;
  sc.budgets = {ScalarFunction::logarithmic(0.5), ScalarFunction::logarithmic(3.0)};
  sc.cost = ScalarFunction::linear(1.0);
  sc.profit = ScalarFunction::linear(0.1);
  EXPECT_THROW(solve_menu(sc), NoInteriorMaximizerError);
}

class MenuProperty : public ::testing::Test {
 protected:
  std::mt19937_64 rng{2024};
  MenuScenario random_scenario(std::size_t L) {
    std::uniform_real_distribution<double> dc(0.3, 3.0), ratio(1.15, 4.0);
    const double d_c = dc(rng);
    return log_budget_menu(1.1 * d_c * ratio(rng), d_c, L);
  }
};

TEST_F(MenuProperty, StationarityMonotonicityAndGridOptimality) {
  for (int trial = 0; trial < 20; ++trial) {
    const auto sc = random_scenario(1 + trial % 5);
    const auto menu = solve_menu(sc);
    for (std::size_t i = 0; i < sc.types(); ++i) {
      const double s = menu.entries[i].quality;
      const double slope0 = sc.net_slope(i, 0.0);
      EXPECT_LT(std::abs(sc.net_slope(i, s)), 1e-7 * std::max(1.0, std::abs(slope0)));
      if (i > 0) {
        EXPECT_GT(s, menu.entries[i - 1].quality);
        EXPECT_GT(menu.entries[i].price, menu.entries[i - 1].price);
      }
      const double a = feasible_interval(sc, i).hi;
      const double best = sc.net(i, s);
      for (int g = 0; g <= 10000; ++g) {
        const double t = a * g / 10000.0;
        ASSERT_GE(best, sc.net(i, t) - 1e-6);
      }
      // Incentive compatibility by construction.
      for (std::size_t j = 0; j < sc.types(); ++j) {
        EXPECT_GE(best, sc.net(i, menu.entries[j].quality) - 1e-12);
      }
    }
  }
}

TEST_F(MenuProperty, ClosedFormAgreement) {
  int checked = 0;
  while (checked < 50) {
    std::uniform_real_distribution<double> dc(0.2, 5.0), db(0.2, 20.0);
    const double d_c = dc(rng), d_b = db(rng);
    if (!(d_b > 1.1 * d_c)) continue;
    const auto menu = solve_menu(log_budget_menu(d_b, d_c, 3));
    for (int i = 1; i <= 3; ++i) {
      EXPECT_NEAR(menu.entries[i - 1].quality, 10 * d_b / (11 * d_c) * i - 1, 1e-6);
    }
    ++checked;
  }
}

}  // namespace
}  // namespace tprice
