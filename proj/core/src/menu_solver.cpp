#include "tprice/menu_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tprice/errors.hpp"
#include "tprice/verifier.hpp"

namespace tprice {
namespace {

constexpr int kMaxIterations = 4000;
constexpr int kMaxHalvings = 1100;

void require_type(const MenuScenario& sc, std::size_t type) {
  if (type >= sc.types()) {
    throw std::out_of_range("type index " + std::to_string(type + 1) +
                            " outside 1.." + std::to_string(sc.types()));
  }
}

std::string type_name(std::size_t type) {
  return "type " + std::to_string(type + 1);
}

}  // namespace

double MenuScenario::net(std::size_t type, double s) const {
  return budgets.at(type).value(s) - cost.value(s) - profit.value(s);
}

double MenuScenario::net_slope(std::size_t type, double s) const {
  return budgets.at(type).derivative(s) - cost.derivative(s) -
         profit.derivative(s);
}

Interval feasible_interval(const MenuScenario& sc, std::size_t type) {
  require_type(sc, type);
  if (!(sc.s_search_max > 0.0)) {
    throw std::invalid_argument("s_search_max must be positive");
  }
  const double top =
      std::min({sc.s_search_max, sc.budgets[type].domain().hi,
                sc.cost.domain().hi, sc.profit.domain().hi});

  // Doubling search for a point where f_i turns negative.
  double hi = std::min(1.0, top);
  while (sc.net(type, hi) > 0.0) {
    if (hi >= top) {
      throw UnboundedFeasibleSetError(
          type_name(type) + ": net value still positive at s_search_max=" +
          std::to_string(top) + "; raise the bracket");
    }
    hi = std::min(2.0 * hi, top);
  }

  // Halving search for a point with f_i > 0 below `hi`. f_i is concave with
  // f_i(0) = 0, so if none exists the feasible set is {0}.
  double lo = hi;
  bool found = false;
  for (int h = 0; h < kMaxHalvings; ++h) {
    lo *= 0.5;
    if (!(lo > 0.0)) break;
    if (sc.net(type, lo) > 0.0) {
      found = true;
      break;
    }
  }
  if (!found) return {0.0, 0.0};

  for (int it = 0; it < kMaxIterations; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    (sc.net(type, mid) >= 0.0 ? lo : hi) = mid;
  }
  return {0.0, lo};
}

double maximize_net(const MenuScenario& sc, std::size_t type) {
  const Interval feasible = feasible_interval(sc, type);
  const double a = feasible.hi;
  if (!(a > 0.0)) {
    throw NoInteriorMaximizerError(type_name(type) +
                                   ": feasible set is the single point {0}");
  }
  if (!(sc.net_slope(type, 0.0) > 0.0)) {
    throw NoInteriorMaximizerError(type_name(type) +
                                   ": net value does not increase at 0");
  }
  double lo = 0.0;
  double hi = a;
  if (!(sc.net_slope(type, hi) < 0.0)) {
    throw BracketError(type_name(type) +
                       ": net slope does not change sign on [0, a]");
  }
  const double tol = 1e-9 * std::max(1.0, a);
  for (int it = 0; it < kMaxIterations && hi - lo >= tol; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    (sc.net_slope(type, mid) > 0.0 ? lo : hi) = mid;
  }
  return lo + 0.5 * (hi - lo);
}

QualityPriceMenu solve_menu(const MenuScenario& sc) {
  if (sc.types() == 0) throw std::invalid_argument("menu needs at least one type");
  QualityPriceMenu menu;
  menu.entries.reserve(sc.types());
  for (std::size_t i = 0; i < sc.types(); ++i) {
    const double s = maximize_net(sc, i);
    const double p = sc.cost.value(s) + sc.profit.value(s);
    menu.entries.push_back({s, p, sc.budgets[i].value(s) - p});
  }
  const VerificationReport report = verify_menu(menu, sc);
  if (!report.passed) {
    throw CertificationError("menu failed certification: " +
                             describe(report.violations.front()));
  }
  return menu;
}

}  // namespace tprice
