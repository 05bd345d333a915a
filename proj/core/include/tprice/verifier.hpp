#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tprice/menu_solver.hpp"
#include "tprice/profile_solver.hpp"

namespace tprice {

/// Slack applied to every inequality before it counts as violated.
inline constexpr double kVerifySlack = 1e-9;

struct Violation {
  /// e.g. "ir.upper", "ir.lower", "ic", "profit", "order.theta".
  std::string constraint;
  int k = -1;  // zero-based; -1 when not applicable
  int l = -1;
  double margin = 0.0;
  std::vector<double> witness;
};

struct VerificationReport {
  bool passed = true;
  std::vector<Violation> violations;
  /// Smallest signed slack over all checked constraints.
  double worst_margin = 0.0;
  std::size_t checked = 0;
};

/// One-line human description, indices one-based.
std::string describe(const Violation& v);

/// Menu IR/IC certification:
///   ir.upper   P_k(s_k) - p_k >= 0
///   ir.lower   p_k - C(s_k) - B(s_k) >= 0
///   ic         P_k(s_k) - p_k - (P_k(s_l) - p_l) >= 0 for l != k
///   order.*    0 < s_1 < ... < s_L and 0 < p_1 < ... < p_L (strict)
VerificationReport verify_menu(const QualityPriceMenu& menu,
                               const MenuScenario& scenario);

/// Profile certification over each band [theta_k - m_k, theta_k + m_k]
/// sampled at `probes_per_band` uniform points (endpoints and centre always
/// included):
///   ir.upper   F(t, s_k) - p_k >= 0
///   ir.lower   p_k - C(s_k) - b_k >= 0
///   ic         F(t, s_k) - p_k - (F(t, s_l) - p_l) >= 0
///   profit     F(theta_k - m_k, s_k) - p_k
///                - (gap_k + F(theta_k + m_k, s_{k+1}) - p_{k+1}) >= 0
///   order.*    strict demand and price ordering, bands inside the box
VerificationReport verify_profile(const DemandPriceProfile& profile,
                                  const ProfileScenario& scenario,
                                  std::size_t probes_per_band =
                                      kDefaultProbesPerBand);

/// Closed-form window bound against composite-Simpson quadrature of the
/// integral form for one quality index.
struct WindowDiscrepancy {
  std::size_t j = 0;
  double lo_closed = 0.0, lo_quadrature = 0.0;
  double hi_closed = 0.0, hi_quadrature = 0.0;
  double max_abs_error() const noexcept;
};

std::vector<WindowDiscrepancy> window_discrepancies(
    const ProfileScenario& scenario, const DemandPriceProfile& profile,
    std::size_t quad_n);

/// Recomputes every stored window [A_j, B_j] (j >= 2) by quadrature and
/// flags relative disagreement above 1e-6 ("window.lo" / "window.hi").
VerificationReport crosscheck_windows(const ProfileScenario& scenario,
                                      const DemandPriceProfile& profile,
                                      std::size_t quad_n = 256);

}  // namespace tprice
