#include "tprice/market_sim.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>

#include "tprice/verifier.hpp"

namespace tprice {
namespace {

std::mt19937_64 substream(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

// Uniform on [0, 1) from the top 53 bits; unlike the standard distributions
// this is identical across standard library implementations.
double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t best_option(const DemandPriceProfile& profile,
                        const ProfileScenario& sc, double theta) {
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < sc.size(); ++l) {
    const double v = sc.tariff(theta, sc.qualities[l]) - profile.entries[l].price;
    if (v > best_value) {
      best_value = v;
      best = l;
    }
  }
  return best;
}

// Parts of [lo, hi] not covered by any band.
std::vector<std::pair<double, double>> uncovered(
    const DemandPriceProfile& profile, const ProfileScenario& sc) {
  const DomainBox& bx = sc.box();
  std::vector<std::pair<double, double>> bands;
  for (std::size_t k = 0; k < sc.size(); ++k) {
    const double t = profile.entries[k].theta;
    const double m = sc.margins.m[k];
    bands.emplace_back(t - m, t + m);
  }
  std::sort(bands.begin(), bands.end());
  std::vector<std::pair<double, double>> gaps;
  double cursor = bx.theta_low;
  for (const auto& [a, b] : bands) {
    if (a > cursor) gaps.emplace_back(cursor, std::min(a, bx.theta_up));
    cursor = std::max(cursor, b);
    if (cursor >= bx.theta_up) break;
  }
  if (cursor < bx.theta_up) gaps.emplace_back(cursor, bx.theta_up);
  return gaps;
}

}  // namespace

MarketSimReport simulate_market(const DemandPriceProfile& profile,
                                const ProfileScenario& sc,
                                std::size_t samples_per_band,
                                std::uint64_t seed) {
  if (samples_per_band < 1) {
    throw std::invalid_argument("samples_per_band must be at least 1");
  }
  const std::size_t L = sc.size();
  if (profile.entries.size() != L) {
    throw std::invalid_argument("profile length differs from scenario");
  }
  const DomainBox& bx = sc.box();

  MarketSimReport report;
  report.samples_per_band = samples_per_band;
  report.seed = seed;
  report.bands.resize(L);

  for (std::size_t k = 0; k < L; ++k) {
    auto rng = substream(seed, static_cast<std::uint32_t>(k));
    const double theta = profile.entries[k].theta;
    const double m = sc.margins.m[k];
    const double p = profile.entries[k].price;
    BandStats& st = report.bands[k];
    st.samples = samples_per_band;
    st.min_saving = std::numeric_limits<double>::infinity();
    std::size_t hits = 0;
    double total = 0.0;
    for (std::size_t n = 0; n < samples_per_band; ++n) {
      const double t = std::clamp(theta - m + 2.0 * m * unit(rng),
                                  bx.theta_low, bx.theta_up);
      if (best_option(profile, sc, t) == k) ++hits;
      const double saving = sc.tariff(t, sc.qualities[k]) - p;
      st.min_saving = std::min(st.min_saving, saving);
      total += saving;
    }
    st.intended_fraction =
        static_cast<double>(hits) / static_cast<double>(samples_per_band);
    st.mean_saving = total / static_cast<double>(samples_per_band);
    st.provider_profit = p - sc.cost(sc.qualities[k]);
    st.profit_floor = sc.margins.b[k];
    st.profit_ok = st.provider_profit >= st.profit_floor - kVerifySlack;
  }

  const auto gaps = uncovered(profile, sc);
  double measure = 0.0;
  for (const auto& [a, b] : gaps) measure += b - a;
  report.out_of_band.measure = measure;
  if (measure > 0.0) {
    auto rng = substream(seed, static_cast<std::uint32_t>(L));
    std::size_t affordable = 0;
    std::size_t intended = 0;
    for (std::size_t n = 0; n < samples_per_band; ++n) {
      // Inverse-CDF draw over the union of gaps.
      double u = unit(rng) * measure;
      double t = gaps.back().second;
      for (const auto& [a, b] : gaps) {
        if (u < b - a) {
          t = a + u;
          break;
        }
        u -= b - a;
      }
      std::size_t k = 0;
      while (k + 1 < L && profile.entries[k + 1].theta <= t) ++k;
      if (sc.tariff(t, sc.qualities[k]) >= profile.entries[k].price) ++affordable;
      if (best_option(profile, sc, t) == k) ++intended;
    }
    const double n = static_cast<double>(samples_per_band);
    report.out_of_band.samples = samples_per_band;
    report.out_of_band.affordable_fraction = static_cast<double>(affordable) / n;
    report.out_of_band.intended_fraction = static_cast<double>(intended) / n;
  }
  return report;
}

}  // namespace tprice
