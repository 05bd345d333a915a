#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tprice/profile_solver.hpp"

namespace tprice {

struct BandStats {
  std::size_t samples = 0;
  /// Share of sampled users whose best option is the band's own quality.
  double intended_fraction = 0.0;
  /// F(t, s_k) - p_k over the sampled demands t.
  double min_saving = 0.0;
  double mean_saving = 0.0;
  /// p_k - C(s_k), compared against the profit floor b_k.
  double provider_profit = 0.0;
  double profit_floor = 0.0;
  bool profit_ok = false;
};

/// Demands outside every band, assigned to quality k when
/// theta_k <= t < theta_{k+1} (below theta_1 -> first, at or above theta_L ->
/// last). Only affordability is reported; no savings are promised there.
struct OutOfBandStats {
  std::size_t samples = 0;
  double measure = 0.0;  // total length of the uncovered demand range
  double affordable_fraction = 0.0;
  double intended_fraction = 0.0;
};

struct MarketSimReport {
  std::size_t samples_per_band = 0;
  std::uint64_t seed = 0;
  std::vector<BandStats> bands;
  OutOfBandStats out_of_band;
};

/// Monte Carlo market: users drawn uniformly in each band pick the option
/// with the largest saving (ties go to the lower index). Each band, and the
/// out-of-band sample, uses its own mt19937_64 substream derived from `seed`,
/// so results are reproducible bit for bit.
MarketSimReport simulate_market(const DemandPriceProfile& profile,
                                const ProfileScenario& scenario,
                                std::size_t samples_per_band,
                                std::uint64_t seed);

}  // namespace tprice
