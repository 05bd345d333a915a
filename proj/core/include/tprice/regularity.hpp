#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tprice/function_model.hpp"

namespace tprice {

inline constexpr std::size_t kDefaultGridN = 512;

/// One numerically certified sub-condition. `margin` is signed: negative
/// means violated. `witness` holds the coordinates where the worst margin
/// was seen (empty when there is no meaningful point).
struct ConditionCheck {
  std::string id;
  bool passed = false;
  double margin = 0.0;
  std::vector<double> witness;
  std::string detail;
};

struct ConditionReport {
  std::vector<ConditionCheck> checks;

  bool passed() const noexcept;
  /// True when every check whose id starts with `prefix` passed.
  bool passed(std::string_view prefix) const noexcept;
  /// First failing check, or nullptr.
  const ConditionCheck* first_failure() const noexcept;
  const ConditionCheck* find(std::string_view id) const noexcept;
};

/// Grid certification of the menu-construction hypotheses (a1)-(a3):
///   a1.*  C and B increasing, convex, zero at the origin
///   a2.*  each budget increasing, concave, zero at the origin, and
///         consecutive budgets single crossing (P'_i < P'_{i+1})
///   a3.x  some x > 0 with P_1(x) >= C(x) + B(x)
///   a3.y  some y > 0 with P_L(y) <  C(y) + B(y)
/// Grid points are probe.lo + (probe.hi - probe.lo) * k / grid_n for
/// k = 1..grid_n; shape checks also use probe.lo. `y_search_max` bounds the
/// doubling search for the a3.y witness beyond the probe interval.
ConditionReport check_regularity_thm1(std::span<const ScalarFunction> budgets,
                                      const ScalarFunction& cost,
                                      const ScalarFunction& profit,
                                      Interval probe,
                                      std::size_t grid_n = kDefaultGridN,
                                      double y_search_max = 1e6);

/// inf over theta of F_s(theta, s) >= C'(s) at every s on a grid over the
/// quality range of `box`. Single check with id "marginal_budget"; witness is
/// (theta, s) of the worst margin.
ConditionReport check_marginal_budget(const TariffFunction& tariff,
                                      const ScalarFunction& cost,
                                      const DomainBox& box,
                                      std::size_t grid_n = kDefaultGridN);

/// `n` points evenly spaced over [lo, hi], endpoints included.
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

}  // namespace tprice
