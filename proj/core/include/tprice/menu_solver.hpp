#pragma once

#include <cstddef>
#include <vector>

#include "tprice/function_model.hpp"

namespace tprice {

/// L user types with budgets P_1 < ... < P_L (single crossing), a cost C and a
/// target profit B, all functions of quality.
struct MenuScenario {
  std::vector<ScalarFunction> budgets;
  ScalarFunction cost = ScalarFunction::linear(1.0);
  ScalarFunction profit = ScalarFunction::linear(0.0);
  /// Upper bracket for the root and boundedness searches.
  double s_search_max = 1e6;

  std::size_t types() const noexcept { return budgets.size(); }

  /// f_i(s) = P_i(s) - C(s) - B(s), `type` zero-based.
  double net(std::size_t type, double s) const;
  double net_slope(std::size_t type, double s) const;
};

struct MenuEntry {
  double quality = 0.0;
  double price = 0.0;
  /// P_k(s_k) - p_k, the saving of the intended type.
  double net = 0.0;
};

struct QualityPriceMenu {
  std::vector<MenuEntry> entries;
};

/// Feasible set {f_i >= 0} = [0, a_i] of a zero-based type. Returns [0, 0]
/// when f_i < 0 on all of (0, s_search_max]. Throws UnboundedFeasibleSetError
/// when f_i is still nonnegative at s_search_max.
Interval feasible_interval(const MenuScenario& scenario, std::size_t type);

/// Unique stationary point of the concave net value f_i on its feasible set,
/// found by bisection on the decreasing derivative.
/// Throws NoInteriorMaximizerError when f_i'(0+) <= 0 or the feasible set is
/// degenerate, BracketError when f_i' does not change sign on [0, a_i].
double maximize_net(const MenuScenario& scenario, std::size_t type);

/// Quality-price menu with s_i = argmax f_i and p_i = C(s_i) + B(s_i).
/// The menu is certified with verify_menu before it is returned; any failed
/// constraint (including quality ties) throws CertificationError.
QualityPriceMenu solve_menu(const MenuScenario& scenario);

}  // namespace tprice
