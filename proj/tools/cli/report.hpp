#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "tprice/market_sim.hpp"
#include "tprice/menu_solver.hpp"
#include "tprice/profile_solver.hpp"
#include "tprice/regularity.hpp"
#include "tprice/tradeoff.hpp"
#include "tprice/verifier.hpp"

namespace tprice::cli {

using nlohmann::json;

// Shortest round-trip doubles in JSON; "%.9g" in CSV and tables.
std::string fmt9(double v);

json menu_json(const QualityPriceMenu& menu, const std::string& scenario_hash);
std::string menu_csv(const QualityPriceMenu& menu, const MenuScenario& sc);
QualityPriceMenu menu_from_json(const json& j);

json profile_json(const DemandPriceProfile& profile, const std::string& scenario_hash);
std::string profile_csv(const DemandPriceProfile& profile);
DemandPriceProfile profile_from_json(const json& j);

json verification_json(const VerificationReport& r);
json conditions_json(const ConditionReport& r);
json simulation_json(const MarketSimReport& r);

json tradeoff_json(const TradeoffCurve& c);
/// Boundary rows; `achievable` is the empirical verdict per point, or empty.
std::string tradeoff_csv(const TradeoffCurve& c, const std::vector<int>& achievable);
std::string region_csv(const TradeoffCurve& c, const AchievabilityGrid& g);

}  // namespace tprice::cli
