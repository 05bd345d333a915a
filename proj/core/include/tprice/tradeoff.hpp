#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tprice/profile_solver.hpp"

namespace tprice {

struct TradeoffPoint {
  double m = 0.0;  // satisfaction margin slope
  double b = 0.0;  // profit margin slope
};

/// Boundary m * 4 dS L^2 + b * L / D_p = dTheta of the achievable margin
/// region for the bilinear tariff with evenly spaced qualities and margins
/// proportional to quality.
struct TradeoffCurve {
  double delta_s = 0.0;
  double delta_theta = 0.0;
  std::size_t types = 0;
  double d_p = 0.0;
  std::vector<TradeoffPoint> points;
  /// Largest satisfaction margin at zero profit, capped at 1.
  double m0 = 0.0;
  /// Largest profit margin at zero satisfaction margin.
  double b0 = 0.0;

  /// 4 dS L^2 m, the satisfaction axis used for plotting.
  double normalized_m(double m) const noexcept;
  /// m * 4 dS L^2 + b * L / D_p - dTheta; zero on the boundary.
  double residual(const TradeoffPoint& p) const noexcept;
};

/// Profit margin on the boundary at satisfaction margin m.
double boundary_profit(double delta_s, double delta_theta, std::size_t types,
                       double d_p, double m);

/// `n_points` boundary points with m evenly spaced from m0 down to 0.
/// Throws std::invalid_argument for non-positive inputs or n_points < 2.
TradeoffCurve homogeneous_region(double delta_s, double delta_theta,
                                 std::size_t types, double d_p,
                                 std::size_t n_points);

/// Achievability over a (b, m) grid; cell (i, j) instantiates
/// b_k = b_grid[i] * s_k and m_k = m_grid[j] * s_k on the template scenario.
struct AchievabilityGrid {
  std::vector<double> b_grid;
  std::vector<double> m_grid;
  std::vector<std::uint8_t> cells;  // row-major, b slow

  bool achievable(std::size_t i, std::size_t j) const {
    return cells.at(i * m_grid.size() + j) != 0;
  }
};

/// Reuses check_achievability for every cell. Grids must be nonnegative and
/// strictly increasing. The template's margins are replaced; its gap vector
/// is dropped so gaps follow b.
AchievabilityGrid empirical_region(const ProfileScenario& scenario_template,
                                   std::span<const double> b_grid,
                                   std::span<const double> m_grid);

}  // namespace tprice
