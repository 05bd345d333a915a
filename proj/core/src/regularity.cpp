#include "tprice/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tprice {
namespace {

constexpr double kShapeSlack = 1e-9;       // second-difference sign tolerance
constexpr double kCrossingMargin = 1e-12;  // P'_{i+1} - P'_i must exceed this
constexpr double kZeroTolerance = 1e-12;   // |f(0)|
constexpr int kMaxHalvings = 200;

enum class Shape { kConvex, kConcave };
enum class Growth { kStrict, kWeak };

ConditionCheck check_zero(const std::string& id, const ScalarFunction& f) {
  ConditionCheck c{id, false, 0.0, {0.0}, ""};
  if (!f.domain().contains(0.0)) {
    c.margin = -std::numeric_limits<double>::infinity();
    c.detail = "0 is outside the function domain";
    return c;
  }
  const double v = f.value(0.0);
  c.margin = -std::abs(v);
  c.passed = std::abs(v) <= kZeroTolerance;
  if (!c.passed) c.detail = "f(0) != 0";
  return c;
}

ConditionCheck check_increasing(const std::string& id, const ScalarFunction& f,
                                const std::vector<double>& pts, Growth growth) {
  ConditionCheck c{id, true, std::numeric_limits<double>::infinity(), {}, ""};
  double prev = f.value(pts.front());
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const double cur = f.value(pts[k]);
    const double step = cur - prev;
    if (step < c.margin) {
      c.margin = step;
      c.witness = {pts[k - 1], pts[k]};
    }
    prev = cur;
  }
  c.passed = growth == Growth::kStrict ? c.margin > 0.0 : c.margin >= 0.0;
  if (!c.passed) c.detail = "not increasing between witness points";
  return c;
}

ConditionCheck check_shape(const std::string& id, const ScalarFunction& f,
                           const std::vector<double>& pts, Shape shape) {
  ConditionCheck c{id, true, std::numeric_limits<double>::infinity(), {}, ""};
  std::vector<double> v(pts.size());
  std::transform(pts.begin(), pts.end(), v.begin(),
                 [&](double t) { return f.value(t); });
  for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
    const double d2 = v[k - 1] - 2.0 * v[k] + v[k + 1];
    const double signed_d2 = shape == Shape::kConvex ? d2 : -d2;
    if (signed_d2 < c.margin) {
      c.margin = signed_d2;
      c.witness = {pts[k]};
    }
  }
  c.passed = c.margin >= -kShapeSlack;
  if (!c.passed) {
    c.detail = shape == Shape::kConvex ? "second difference negative"
                                       : "second difference positive";
  }
  return c;
}

}  // namespace

bool ConditionReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ConditionCheck& c) { return c.passed; });
}

bool ConditionReport::passed(std::string_view prefix) const noexcept {
  return std::all_of(checks.begin(), checks.end(),
                     [&](const ConditionCheck& c) {
                       return c.passed ||
                              std::string_view(c.id).substr(0, prefix.size()) !=
                                  prefix;
                     });
}

const ConditionCheck* ConditionReport::first_failure() const noexcept {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

const ConditionCheck* ConditionReport::find(std::string_view id) const noexcept {
  for (const auto& c : checks) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> g(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    g[k] = lo + step * static_cast<double>(k);
  }
  g.back() = hi;
  return g;
}

ConditionReport check_regularity_thm1(std::span<const ScalarFunction> budgets,
                                      const ScalarFunction& cost,
                                      const ScalarFunction& profit,
                                      Interval probe, std::size_t grid_n,
                                      double y_search_max) {
  if (grid_n < 16) throw std::invalid_argument("grid_n must be at least 16");
  if (budgets.empty()) throw std::invalid_argument("need at least one budget");
  if (!(probe.lo >= 0.0) || !(probe.hi > probe.lo) || !std::isfinite(probe.hi)) {
    throw std::invalid_argument("probe interval must be finite and positive");
  }

  // pts[0] = probe.lo, pts[k] = probe.lo + (hi - lo) k / grid_n.
  std::vector<double> pts(grid_n + 1);
  for (std::size_t k = 0; k <= grid_n; ++k) {
    pts[k] = probe.lo + probe.length() * static_cast<double>(k) /
                            static_cast<double>(grid_n);
  }
  const std::vector<double> open_pts(pts.begin() + 1, pts.end());

  ConditionReport r;
  auto& out = r.checks;

  out.push_back(check_zero("a1.cost.zero", cost));
  out.push_back(check_increasing("a1.cost.increasing", cost, pts, Growth::kStrict));
  out.push_back(check_shape("a1.cost.convex", cost, pts, Shape::kConvex));
  out.push_back(check_zero("a1.profit.zero", profit));
  // A zero target profit is allowed, so the profit only has to be
  // nondecreasing.
  out.push_back(check_increasing("a1.profit.increasing", profit, pts, Growth::kWeak));
  out.push_back(check_shape("a1.profit.convex", profit, pts, Shape::kConvex));

  const std::size_t L = budgets.size();
  for (std::size_t i = 0; i < L; ++i) {
    const std::string tag = "a2.P" + std::to_string(i + 1);
    out.push_back(check_zero(tag + ".zero", budgets[i]));
    out.push_back(check_increasing(tag + ".increasing", budgets[i], pts,
                                   Growth::kStrict));
    out.push_back(check_shape(tag + ".concave", budgets[i], pts, Shape::kConcave));
  }
  for (std::size_t i = 0; i + 1 < L; ++i) {
    ConditionCheck c{"a2.crossing." + std::to_string(i + 1) + "-" +
                         std::to_string(i + 2),
                     true, std::numeric_limits<double>::infinity(), {}, ""};
    for (double t : open_pts) {
      const double gap = budgets[i + 1].derivative(t) - budgets[i].derivative(t);
      if (gap < c.margin) {
        c.margin = gap;
        c.witness = {t};
      }
    }
    c.passed = c.margin >= kCrossingMargin;
    if (!c.passed) c.detail = "single crossing violated";
    out.push_back(std::move(c));
  }

  auto surplus = [&](const ScalarFunction& p, double t) {
    return p.value(t) - cost.value(t) - profit.value(t);
  };

  {
    ConditionCheck c{"a3.x", false, -std::numeric_limits<double>::infinity(), {}, ""};
    for (double t : open_pts) {
      const double v = surplus(budgets.front(), t);
      c.margin = std::max(c.margin, v);
      if (v >= 0.0) {
        c.passed = true;
        c.witness = {t};
        break;
      }
    }
    // The witness may sit below the first grid point.
    for (int h = 1; !c.passed && h <= kMaxHalvings; ++h) {
      const double t = std::ldexp(open_pts.front(), -h);
      if (!(t > probe.lo)) break;
      const double v = surplus(budgets.front(), t);
      c.margin = std::max(c.margin, v);
      if (v >= 0.0) {
        c.passed = true;
        c.witness = {t};
      }
    }
    if (!c.passed) c.detail = "no x_1 found with P_1(x_1) >= C(x_1) + B(x_1)";
    out.push_back(std::move(c));
  }
  {
    ConditionCheck c{"a3.y", false, -std::numeric_limits<double>::infinity(), {}, ""};
    auto probe_at = [&](double t) {
      const double v = -surplus(budgets.back(), t);
      c.margin = std::max(c.margin, v);
      if (v > 0.0) {
        c.passed = true;
        c.witness = {t};
      }
    };
    for (double t : open_pts) {
      probe_at(t);
      if (c.passed) break;
    }
    for (double t = probe.hi * 2; !c.passed && t <= y_search_max; t *= 2) {
      probe_at(t);
    }
    if (!c.passed) c.detail = "no y_L found with P_L(y_L) < C(y_L) + B(y_L)";
    out.push_back(std::move(c));
  }
  return r;
}

ConditionReport check_marginal_budget(const TariffFunction& tariff,
                                      const ScalarFunction& cost,
                                      const DomainBox& box,
                                      std::size_t grid_n) {
  if (grid_n < 16) throw std::invalid_argument("grid_n must be at least 16");
  const auto thetas = uniform_grid(box.theta_low, box.theta_up, grid_n);
  const auto qualities = uniform_grid(box.s_low, box.s_up, grid_n);

  ConditionCheck c{"marginal_budget", true,
                   std::numeric_limits<double>::infinity(), {}, ""};
  for (double s : qualities) {
    const double dc = cost.derivative(s);
    for (double th : thetas) {
      const double m = tariff.partials(th, s).f_s - dc;
      if (m < c.margin) {
        c.margin = m;
        c.witness = {th, s};
      }
    }
  }
  c.passed = c.margin >= -kShapeSlack;
  if (!c.passed) c.detail = "inf_theta F_s(theta, s) < C'(s)";
  ConditionReport r;
  r.checks.push_back(std::move(c));
  return r;
}

}  // namespace tprice
