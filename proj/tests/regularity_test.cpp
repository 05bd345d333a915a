#include "tprice/regularity.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace tprice {
namespace {

std::vector<ScalarFunction> log_budgets(double d_b, std::size_t L) {
  std::vector<ScalarFunction> out;
  for (std::size_t i = 1; i <= L; ++i) {
    out.push_back(ScalarFunction::logarithmic(d_b * static_cast<double>(i)));
  }
  return out;
}

const ScalarFunction kCost = ScalarFunction::linear(1.0);
const ScalarFunction kProfit = ScalarFunction::linear(0.1);

TEST(RegularityThm1, LogBudgetExamplePasses) {
  const auto P = log_budgets(2.2, 3);
  const auto r = check_regularity_thm1(P, kCost, kProfit, {0.0, 100.0}, 512);
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.id << " " << c.detail;
  EXPECT_TRUE(r.passed());
  // Grid oracle: the witnesses satisfy the inequalities they certify.
  const auto* x = r.find("a3.x");
  ASSERT_NE(x, nullptr);
  const double xs = x->witness.at(0);
  EXPECT_GE(P[0](xs), 1.1 * xs);
  const double ys = r.find("a3.y")->witness.at(0);
  EXPECT_LT(P[2](ys), 1.1 * ys);
}

TEST(RegularityThm1, SmallBudgetHasNoEntryWitness) {
  // 0.5 log(1+s) < 1.1 s for every s > 0.
  const std::vector<ScalarFunction> P = {ScalarFunction::logarithmic(0.5)};
  const auto r = check_regularity_thm1(P, kCost, kProfit, {0.0, 100.0}, 512);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.passed("a3"));
  EXPECT_FALSE(r.find("a3.x")->passed);
  EXPECT_TRUE(r.find("a3.x")->witness.empty());
  EXPECT_TRUE(r.passed("a1"));
  EXPECT_TRUE(r.passed("a2"));
}

TEST(RegularityThm1, BoundaryBudgetSlopeFailsA3) {
  // D_b = 1.0 <= 11/10 D_c.
  const auto r =
      check_regularity_thm1(log_budgets(1.0, 3), kCost, kProfit, {0.0, 100.0});
  EXPECT_FALSE(r.passed("a3"));
  EXPECT_EQ(r.first_failure()->id, "a3.x");
}

TEST(RegularityThm1, WitnessBelowFirstGridPointIsFound) {
  // Surplus 1.11 log(1+s) - 1.1 s is positive only for s < ~0.018, below the
  // first grid point 100/16.
  const std::vector<ScalarFunction> P = {ScalarFunction::logarithmic(1.11)};
  const auto r = check_regularity_thm1(P, kCost, kProfit, {0.0, 100.0}, 16);
  ASSERT_TRUE(r.find("a3.x")->passed);
  const double x = r.find("a3.x")->witness.at(0);
  EXPECT_GE(1.11 * std::log1p(x), 1.1 * x);
}

TEST(RegularityThm1, LinearCostIsConvex) {
  const std::vector<ScalarFunction> P = {ScalarFunction::logarithmic(3.0)};
  for (std::size_t n : {16u, 100u, 512u}) {
    const auto r = check_regularity_thm1(P, kCost, kProfit, {0.0, 50.0}, n);
    EXPECT_TRUE(r.find("a1.cost.convex")->passed);
    EXPECT_TRUE(r.find("a1.cost.increasing")->passed);
  }
}

TEST(RegularityThm1, DetectsShapeAndCrossingViolations) {
  // Concave cost, convex budget, budgets that cross the wrong way.
  const std::vector<ScalarFunction> P = {ScalarFunction::power(1.0, 2.0),
                                         ScalarFunction::linear(0.5)};
  const auto r = check_regularity_thm1(P, ScalarFunction::logarithmic(1.0),
                                       kProfit, {0.0, 10.0}, 64);
  EXPECT_FALSE(r.find("a1.cost.convex")->passed);
  EXPECT_FALSE(r.find("a2.P1.concave")->passed);
  EXPECT_FALSE(r.find("a2.crossing.1-2")->passed);
  EXPECT_FALSE(r.find("a2.crossing.1-2")->witness.empty());
}

TEST(RegularityThm1, NonZeroOriginFails) {
  const std::vector<ScalarFunction> P = {ScalarFunction::logarithmic(3.0)};
  const auto shifted = ScalarFunction::tabulated({0.0, 100.0}, {0.5, 100.5});
  const auto r = check_regularity_thm1(P, shifted, kProfit, {0.0, 100.0});
  EXPECT_FALSE(r.find("a1.cost.zero")->passed);
}

TEST(RegularityThm1, ZeroProfitIsAllowed) {
  const auto r = check_regularity_thm1(log_budgets(2.2, 2), kCost,
                                       ScalarFunction::linear(0.0), {0.0, 100.0});
  EXPECT_TRUE(r.passed());
}

TEST(RegularityThm1Property, FailuresPersistUnderGridRefinement) {
  struct Case {
    std::vector<ScalarFunction> P;
    ScalarFunction C;
  };
  const std::vector<Case> cases = {
      {{ScalarFunction::logarithmic(0.5)}, kCost},
      {{ScalarFunction::power(1.0, 2.0), ScalarFunction::linear(0.5)}, kCost},
      {log_budgets(1.0, 2), kCost},
      {log_budgets(2.2, 2), ScalarFunction::logarithmic(1.0)},
  };
  for (const auto& c : cases) {
    for (std::size_t n = 16; n <= 1024; n *= 2) {
      const auto coarse = check_regularity_thm1(c.P, c.C, kProfit, {0.0, 20.0}, n);
      const auto fine =
          check_regularity_thm1(c.P, c.C, kProfit, {0.0, 20.0}, 2 * n);
      ASSERT_EQ(coarse.checks.size(), fine.checks.size());
      for (std::size_t i = 0; i < coarse.checks.size(); ++i) {
        if (!coarse.checks[i].passed) {
          EXPECT_FALSE(fine.checks[i].passed)
              << coarse.checks[i].id << " at grid " << n;
        }
      }
    }
  }
}

TEST(MarginalBudget, BilinearExamples) {
  const DomainBox box{1.0 / 3.0, 1.0, 1.0, 3.0};
  const auto pass = check_marginal_budget(TariffFunction::bilinear(4.0, box),
                                          kCost, box, 64);
  EXPECT_TRUE(pass.passed());
  EXPECT_NEAR(pass.checks[0].margin, 1.0 / 3.0, 1e-12);

  const auto edge = check_marginal_budget(TariffFunction::bilinear(3.0, box),
                                          kCost, box, 64);
  EXPECT_TRUE(edge.passed());
  EXPECT_NEAR(edge.checks[0].margin, 0.0, 1e-12);

  const auto fail = check_marginal_budget(TariffFunction::bilinear(1.0, box),
                                          kCost, box, 64);
  EXPECT_FALSE(fail.passed());
  EXPECT_NEAR(fail.checks[0].margin, 1.0 / 3.0 - 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(fail.checks[0].witness.at(0), 1.0 / 3.0);
}

TEST(MarginalBudget, RequiresMinimumGrid) {
  const DomainBox box{0.5, 1.0, 1.0, 2.0};
  EXPECT_THROW(check_marginal_budget(TariffFunction::bilinear(4.0, box), kCost,
                                     box, 8),
               std::invalid_argument);
}

}  // namespace
}  // namespace tprice
