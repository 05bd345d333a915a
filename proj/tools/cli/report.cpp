#include "report.hpp"

#include <cstdio>

#include "tprice/errors.hpp"

namespace tprice::cli {
namespace {

double number_at(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_number()) {
    throw ConfigError(path + "." + key, "must be a number");
  }
  return j.at(key).get<double>();
}

const json& entries_of(const json& j) {
  if (!j.is_object() || !j.contains("entries") || !j.at("entries").is_array() ||
      j.at("entries").empty()) {
    throw ConfigError("solution.entries", "must be a non-empty array");
  }
  return j.at("entries");
}

json witness_json(const std::vector<double>& w) {
  json a = json::array();
  for (double x : w) a.push_back(x);
  return a;
}

}  // namespace

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

json menu_json(const QualityPriceMenu& menu, const std::string& hash) {
  json entries = json::array();
  for (std::size_t i = 0; i < menu.entries.size(); ++i) {
    const auto& e = menu.entries[i];
    entries.push_back({{"type", i + 1}, {"s", e.quality}, {"p", e.price}, {"net", e.net}});
  }
  return {{"kind", "menu"}, {"scenario_hash", hash}, {"entries", entries}};
}

std::string menu_csv(const QualityPriceMenu& menu, const MenuScenario& sc) {
  std::string out = "type,quality,price,budget_at_quality,net_saving\n";
  for (std::size_t i = 0; i < menu.entries.size(); ++i) {
    const auto& e = menu.entries[i];
    const double budget = sc.budgets[i](e.quality);
    out += std::to_string(i + 1) + "," + fmt9(e.quality) + "," + fmt9(e.price) + "," +
           fmt9(budget) + "," + fmt9(budget - e.price) + "\n";
  }
  return out;
}

QualityPriceMenu menu_from_json(const json& j) {
  QualityPriceMenu m;
  const json& es = entries_of(j);
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string path = "solution.entries[" + std::to_string(i) + "]";
    MenuEntry e;
    e.quality = number_at(es[i], "s", path);
    e.price = number_at(es[i], "p", path);
    e.net = es[i].contains("net") ? number_at(es[i], "net", path) : 0.0;
    m.entries.push_back(e);
  }
  return m;
}

json profile_json(const DemandPriceProfile& p, const std::string& hash) {
  json entries = json::array();
  for (std::size_t k = 0; k < p.entries.size(); ++k) {
    const auto& e = p.entries[k];
    entries.push_back({{"k", k + 1},
                       {"theta", e.theta},
                       {"p", e.price},
                       {"window", {e.window.lo, e.window.hi}}});
  }
  return {{"kind", "profile"},
          {"scenario_hash", hash},
          {"entries", entries},
          {"deltas", p.steps}};
}

std::string profile_csv(const DemandPriceProfile& p) {
  std::string out = "k,theta,price,window_lo,window_hi,delta\n";
  for (std::size_t k = 0; k < p.entries.size(); ++k) {
    const auto& e = p.entries[k];
    out += std::to_string(k + 1) + "," + fmt9(e.theta) + "," + fmt9(e.price) + "," +
           fmt9(e.window.lo) + "," + fmt9(e.window.hi) + "," +
           fmt9(k < p.steps.size() ? p.steps[k] : 0.0) + "\n";
  }
  return out;
}

DemandPriceProfile profile_from_json(const json& j) {
  DemandPriceProfile p;
  const json& es = entries_of(j);
  for (std::size_t k = 0; k < es.size(); ++k) {
    const std::string path = "solution.entries[" + std::to_string(k) + "]";
    ProfileEntry e;
    e.theta = number_at(es[k], "theta", path);
    e.price = number_at(es[k], "p", path);
    const json& w = es[k].contains("window") ? es[k].at("window") : json();
    if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
      throw ConfigError(path + ".window", "must be [lo, hi]");
    }
    e.window = {w[0].get<double>(), w[1].get<double>()};
    p.entries.push_back(e);
  }
  if (j.contains("deltas")) {
    const json& d = j.at("deltas");
    if (!d.is_array()) throw ConfigError("solution.deltas", "must be an array");
    for (const auto& x : d) {
      if (!x.is_number()) throw ConfigError("solution.deltas", "must hold numbers");
      p.steps.push_back(x.get<double>());
    }
  }
  return p;
}

json verification_json(const VerificationReport& r) {
  json vs = json::array();
  for (const auto& v : r.violations) {
    json o = {{"constraint", v.constraint}, {"margin", v.margin}, {"witness", witness_json(v.witness)}};
    if (v.k >= 0) o["k"] = v.k + 1;
    if (v.l >= 0) o["l"] = v.l + 1;
    vs.push_back(std::move(o));
  }
  return {{"passed", r.passed},
          {"worst_margin", r.worst_margin},
          {"checked", r.checked},
          {"violations", vs}};
}

json conditions_json(const ConditionReport& r) {
  json cs = json::array();
  for (const auto& c : r.checks) {
    cs.push_back({{"id", c.id},
                  {"passed", c.passed},
                  {"margin", c.margin},
                  {"witness", witness_json(c.witness)},
                  {"detail", c.detail}});
  }
  return {{"passed", r.passed()}, {"checks", cs}};
}

json simulation_json(const MarketSimReport& r) {
  json bands = json::array();
  for (std::size_t k = 0; k < r.bands.size(); ++k) {
    const auto& b = r.bands[k];
    bands.push_back({{"k", k + 1},
                     {"samples", b.samples},
                     {"intended_fraction", b.intended_fraction},
                     {"min_saving", b.min_saving},
                     {"mean_saving", b.mean_saving},
                     {"provider_profit", b.provider_profit},
                     {"profit_floor", b.profit_floor},
                     {"profit_ok", b.profit_ok}});
  }
  const auto& o = r.out_of_band;
  return {{"samples_per_band", r.samples_per_band},
          {"seed", r.seed},
          {"bands", bands},
          {"out_of_band",
           {{"samples", o.samples},
            {"measure", o.measure},
            {"affordable_fraction", o.affordable_fraction},
            {"intended_fraction", o.intended_fraction}}}};
}

json tradeoff_json(const TradeoffCurve& c) {
  json pts = json::array();
  for (const auto& p : c.points) {
    pts.push_back({{"m", p.m}, {"b", p.b}, {"normalized_m", c.normalized_m(p.m)}});
  }
  return {{"kind", "tradeoff"},
          {"delta_S", c.delta_s},
          {"delta_theta", c.delta_theta},
          {"L", c.types},
          {"D_p", c.d_p},
          {"m0", c.m0},
          {"b0", c.b0},
          {"points", pts}};
}

std::string tradeoff_csv(const TradeoffCurve& c, const std::vector<int>& achievable) {
  std::string out = "m,b,normalized_m,achievable\n";
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const auto& p = c.points[i];
    out += fmt9(p.m) + "," + fmt9(p.b) + "," + fmt9(c.normalized_m(p.m)) + "," +
           (i < achievable.size() ? std::to_string(achievable[i]) : std::string()) + "\n";
  }
  return out;
}

std::string region_csv(const TradeoffCurve& c, const AchievabilityGrid& g) {
  std::string out = "m,b,normalized_m,achievable\n";
  for (std::size_t i = 0; i < g.b_grid.size(); ++i) {
    for (std::size_t j = 0; j < g.m_grid.size(); ++j) {
      const double m = g.m_grid[j];
      out += fmt9(m) + "," + fmt9(g.b_grid[i]) + "," + fmt9(c.normalized_m(m)) + "," +
             (g.achievable(i, j) ? "1" : "0") + "\n";
    }
  }
  return out;
}

}  // namespace tprice::cli
