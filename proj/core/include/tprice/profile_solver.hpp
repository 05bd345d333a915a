#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tprice/function_model.hpp"
#include "tprice/regularity.hpp"

namespace tprice {

inline constexpr std::size_t kDefaultProbesPerBand = 9;

/// Target profit-satisfaction margin: per-quality profit floors `b`, demand
/// half-widths `m`, and optional profit gaps (L-1 entries) that default to
/// b[k+1] - b[k].
struct MarginSpec {
  std::vector<double> b;
  std::vector<double> m;
  std::optional<std::vector<double>> gap;

  std::size_t size() const noexcept { return b.size(); }
  /// Gap between consecutive qualities k and k+1 (zero-based k < L-1).
  double gap_at(std::size_t k) const;
  /// Throws std::invalid_argument unless b, m are nonnegative and
  /// nondecreasing with matching lengths and gap[k] >= b[k+1] - b[k].
  void validate() const;
};

struct ProfileScenario {
  /// Strictly increasing quality ladder inside the tariff's domain box.
  std::vector<double> qualities;
  TariffFunction tariff;
  ScalarFunction cost;
  MarginSpec margins;
  /// Position of each chosen price inside its window, in [0, 1].
  double price_lambda = 0.5;
  /// Resolution of sup/inf scans over theta.
  std::size_t grid_n = kDefaultGridN;

  std::size_t size() const noexcept { return qualities.size(); }
  const DomainBox& box() const noexcept { return tariff.box(); }
  /// Throws std::invalid_argument on structural problems (lengths, ordering,
  /// ladder outside the box, lambda outside [0, 1]).
  void validate() const;
};

struct SensitivityBounds {
  double epsilon = 0.0;  // sup_theta F_theta(theta, s_{j-1})
  double delta = 0.0;    // inf_theta F_theta(theta, s_j) - F_theta(theta, s_{j-1})
};

struct PriceWindow {
  double lo = 0.0;
  double hi = 0.0;
};

struct ProfileEntry {
  double theta = 0.0;
  double price = 0.0;
  PriceWindow window;
};

struct DemandPriceProfile {
  std::vector<ProfileEntry> entries;
  /// Step sizes Delta_k; entry 0 is m_1.
  std::vector<double> steps;
};

/// Sensitivity bounds between qualities j-1 and j (zero-based, 1 <= j < L).
/// Closed form for bilinear tariffs and for separable tariffs with analytic
/// factors; uniform theta-grid scan otherwise.
/// Throws DegenerateSensitivityError when delta <= 0.
SensitivityBounds sensitivity_bounds(const ProfileScenario& scenario,
                                     std::size_t j);

/// Delta_0 = m_0 and Delta_j = (m_j + m_{j-1})(1 + 2 eps_j / delta_j)
/// + gap_{j-1} / delta_j.
std::vector<double> step_sizes(const ProfileScenario& scenario);

/// Checks, in order: "marginal_budget", "entry" (F(theta_low, s_1) >=
/// C(s_1) + b_1) and "demand_range" (sum Delta + m_L < theta_up - theta_low).
ConditionReport check_achievability(const ProfileScenario& scenario);

/// Admissible price interval [A_j, B_j] for quality j given the previous
/// nominal demand and price and the current nominal demand.
/// Throws EmptyPriceWindowError when A_j > B_j + 1e-9.
PriceWindow price_window(const ProfileScenario& scenario, std::size_t j,
                         double theta_prev, double price_prev, double theta_j);

/// Iterative construction of the demand-price profile, certified with
/// verify_profile at `probes_per_band` probes before it is returned.
/// Throws NotAchievableError, EmptyPriceWindowError,
/// DegenerateSensitivityError or CertificationError.
DemandPriceProfile build_profile(const ProfileScenario& scenario,
                                 std::size_t probes_per_band =
                                     kDefaultProbesPerBand);

}  // namespace tprice
