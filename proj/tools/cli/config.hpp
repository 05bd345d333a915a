#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tprice/menu_solver.hpp"
#include "tprice/profile_solver.hpp"

namespace tprice::cli {

enum class Mode { kMenu, kProfile, kTradeoff };

enum class Format { kJson, kCsv, kBoth };

struct MenuConfig {
  MenuScenario scenario;
  Interval probe{0.0, 100.0};
  std::size_t grid_n = kDefaultGridN;
};

struct ProfileConfig {
  ProfileScenario scenario;
  std::size_t probes = kDefaultProbesPerBand;
  std::size_t quad_n = 256;
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
};

struct EmpiricalConfig {
  ProfileScenario scenario_template;
  std::vector<double> b_grid;
  std::vector<double> m_grid;
};

struct TradeoffConfig {
  double delta_s = 0.0;
  double delta_theta = 0.0;
  std::size_t types = 0;
  double d_p = 0.0;
  std::size_t points = 51;
  std::optional<EmpiricalConfig> empirical;
};

struct ScenarioConfig {
  Mode mode = Mode::kMenu;
  std::optional<MenuConfig> menu;
  std::optional<ProfileConfig> profile;
  std::optional<TradeoffConfig> tradeoff;

  std::optional<std::string> out_dir;
  std::optional<Format> format;

  // FNV-1a over the config (minus "output") and every referenced CSV file.
  std::string scenario_hash;
};

/// Strict loader: unknown keys, missing required fields, non-finite numbers
/// and bad function declarations raise ConfigError naming the field path.
/// Relative CSV paths resolve against the config's directory.
ScenarioConfig load_config(const std::filesystem::path& path);

const char* mode_name(Mode m) noexcept;

/// Parses "json", "csv" or "both".
std::optional<Format> parse_format(const std::string& s);

}  // namespace tprice::cli
