#include "tprice/tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tprice {
namespace {

double satisfaction_weight(double delta_s, std::size_t types) {
  const double L = static_cast<double>(types);
  return 4.0 * delta_s * L * L;
}

void require_grid(std::span<const double> g, const char* name) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i]) || g[i] < 0.0 || (i > 0 && !(g[i] > g[i - 1]))) {
      throw std::invalid_argument(std::string(name) +
                                  " must be nonnegative and strictly increasing");
    }
  }
}

}  // namespace

double TradeoffCurve::normalized_m(double m) const noexcept {
  return satisfaction_weight(delta_s, types) * m;
}

double TradeoffCurve::residual(const TradeoffPoint& p) const noexcept {
  return normalized_m(p.m) + p.b * static_cast<double>(types) / d_p -
         delta_theta;
}

double boundary_profit(double delta_s, double delta_theta, std::size_t types,
                       double d_p, double m) {
  return (delta_theta - satisfaction_weight(delta_s, types) * m) * d_p /
         static_cast<double>(types);
}

TradeoffCurve homogeneous_region(double delta_s, double delta_theta,
                                 std::size_t types, double d_p,
                                 std::size_t n_points) {
  if (!(delta_s > 0.0) || !(delta_theta > 0.0) || types == 0 || !(d_p > 0.0)) {
    throw std::invalid_argument("tradeoff parameters must be positive");
  }
  if (n_points < 2) throw std::invalid_argument("n_points must be at least 2");

  TradeoffCurve c;
  c.delta_s = delta_s;
  c.delta_theta = delta_theta;
  c.types = types;
  c.d_p = d_p;
  c.m0 = std::min(1.0, delta_theta / satisfaction_weight(delta_s, types));
  c.b0 = delta_theta * d_p / static_cast<double>(types);
  c.points.reserve(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(n_points - 1);
    const double m = k + 1 == n_points ? 0.0 : c.m0 * (1.0 - t);
    c.points.push_back({m, boundary_profit(delta_s, delta_theta, types, d_p, m)});
  }
  return c;
}

AchievabilityGrid empirical_region(const ProfileScenario& tmpl,
                                   std::span<const double> b_grid,
                                   std::span<const double> m_grid) {
  require_grid(b_grid, "b_grid");
  require_grid(m_grid, "m_grid");

  AchievabilityGrid out;
  out.b_grid.assign(b_grid.begin(), b_grid.end());
  out.m_grid.assign(m_grid.begin(), m_grid.end());
  out.cells.assign(b_grid.size() * m_grid.size(), 0);

  ProfileScenario sc = tmpl;
  sc.margins.gap.reset();
  const std::size_t L = sc.size();
  sc.margins.b.assign(L, 0.0);
  sc.margins.m.assign(L, 0.0);
  for (std::size_t i = 0; i < b_grid.size(); ++i) {
    for (std::size_t j = 0; j < m_grid.size(); ++j) {
      for (std::size_t k = 0; k < L; ++k) {
        sc.margins.b[k] = b_grid[i] * sc.qualities[k];
        sc.margins.m[k] = m_grid[j] * sc.qualities[k];
      }
      out.cells[i * m_grid.size() + j] = check_achievability(sc).passed() ? 1 : 0;
    }
  }
  return out;
}

}  // namespace tprice
