#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "run.hpp"
#include "tprice/errors.hpp"

namespace tprice::cli {
namespace {

namespace fs = std::filesystem;

const fs::path kConfigs = TPRICE_CONFIG_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("tprice_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "tprice");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
  }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  // Column `col` of a CSV with header, parsed as numbers.
  static std::vector<double> column(const fs::path& p, std::size_t col) {
    std::istringstream in(slurp(p));
    std::string line;
    std::getline(in, line);
    std::vector<double> out;
    while (std::getline(in, line)) {
      std::stringstream cells(line);
      std::string cell;
      for (std::size_t c = 0; c <= col; ++c) std::getline(cells, cell, ',');
      out.push_back(std::stod(cell));
    }
    return out;
  }

  fs::path dir_;
};

TEST_F(Cli, MenuReproducesLogBudgetExample) {
  const auto r = run_cli({"menu", (kConfigs / "log_budget.json").string(), "--out",
                          dir_.string(), "--quiet"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto s = column(dir_ / "menu.csv", 1);
  const auto p = column(dir_ / "menu.csv", 2);
  const double want_s[] = {1, 3, 5}, want_p[] = {1.1, 3.3, 5.5};
  ASSERT_EQ(s.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(s[i], want_s[i], 1e-6);
    EXPECT_NEAR(p[i], want_p[i], 1e-6);
  }
  EXPECT_EQ(slurp(dir_ / "menu.csv").rfind("type,quality,price,budget_at_quality,net_saving\n", 0),
            0u);
}

TEST_F(Cli, ProfileReproducesWorkedScenario) {
  const auto r = run_cli({"profile", (kConfigs / "bilinear.json").string(), "--out",
                          dir_.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("verify_profile: PASS"), std::string::npos);
  const auto theta = column(dir_ / "profile.csv", 1);
  ASSERT_EQ(theta.size(), 3u);
  EXPECT_NEAR(theta[0], 0.343333, 1e-6);
  EXPECT_NEAR(theta[1], 0.458333, 1e-6);
  EXPECT_NEAR(theta[2], 0.733333, 1e-6);
  EXPECT_EQ(slurp(dir_ / "profile.csv").rfind("k,theta,price,window_lo,window_hi,delta\n", 0),
            0u);
}

TEST_F(Cli, CheckNamesFailingCondition) {
  const auto r = run_cli({"check", (kConfigs / "log_budget_low.json").string()});
  EXPECT_EQ(r.code, kExitConstraint);
  EXPECT_NE(r.out.find("FAIL  a3.x"), std::string::npos);
  EXPECT_NE(r.err.find("\"kind\":\"not_achievable\""), std::string::npos);
  EXPECT_NE(r.err.find("a3.x"), std::string::npos);
  EXPECT_EQ(run_cli({"check", (kConfigs / "log_budget.json").string(), "--quiet"}).code,
            kExitOk);
  EXPECT_EQ(run_cli({"check", (kConfigs / "bilinear.json").string(), "--quiet"}).code,
            kExitOk);
}

TEST_F(Cli, SolutionsRoundTripThroughVerify) {
  for (const auto& [cmd, cfg, file] :
       {std::tuple{"menu", "log_budget.json", "menu.json"},
        std::tuple{"profile", "bilinear.json", "profile.json"}}) {
    const std::string config = (kConfigs / cfg).string();
    ASSERT_EQ(run_cli({cmd, config, "--out", dir_.string(), "--quiet"}).code, kExitOk);
    const auto r = run_cli({"verify", config, (dir_ / file).string(), "--out",
                            dir_.string(), "--quiet"});
    EXPECT_EQ(r.code, kExitOk) << cmd << ": " << r.err;
    EXPECT_TRUE(fs::exists(dir_ / "verification.json"));
  }
}

TEST_F(Cli, VerifyRejectsTamperedSolution) {
  const std::string config = (kConfigs / "bilinear.json").string();
  ASSERT_EQ(run_cli({"profile", config, "--out", dir_.string(), "--quiet"}).code, kExitOk);
  auto j = nlohmann::json::parse(slurp(dir_ / "profile.json"));
  j["entries"][1]["p"] = j["entries"][1]["p"].get<double>() - 0.5;
  const auto tampered = write("tampered.json", j.dump());
  const auto r = run_cli({"verify", config, tampered.string(), "--out", dir_.string()});
  EXPECT_EQ(r.code, kExitConstraint);
  EXPECT_NE(r.out.find("ic k=3 l=2"), std::string::npos) << r.out;
}

TEST_F(Cli, VerifyDetectsConfigDrift) {
  ASSERT_EQ(run_cli({"menu", (kConfigs / "log_budget.json").string(), "--out",
                     dir_.string(), "--quiet"})
                .code,
            kExitOk);
  const auto r = run_cli({"verify", (kConfigs / "log_budget_low.json").string(),
                          (dir_ / "menu.json").string(), "--out", dir_.string()});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("solution.scenario_hash"), std::string::npos);
}

TEST_F(Cli, OutputsAreByteIdenticalAcrossRuns) {
  const std::string config = (kConfigs / "bilinear.json").string();
  std::string first[4];
  for (int rep = 0; rep < 2; ++rep) {
    const fs::path d = dir_ / std::to_string(rep);
    ASSERT_EQ(run_cli({"profile", config, "--out", d.string(), "--quiet"}).code, kExitOk);
    ASSERT_EQ(run_cli({"simulate", config, (d / "profile.json").string(), "--out",
                       d.string(), "--samples", "500", "--seed", "7", "--quiet"})
                  .code,
              kExitOk);
    const std::string files[4] = {"profile.json", "profile.csv", "simulation.json",
                                  "simulation.csv"};
    for (int f = 0; f < 4; ++f) {
      const std::string bytes = slurp(d / files[f]);
      ASSERT_FALSE(bytes.empty());
      if (rep == 0) {
        first[f] = bytes;
      } else {
        EXPECT_EQ(bytes, first[f]) << files[f];
      }
    }
  }
}

TEST_F(Cli, SimulateReportsIntendedChoices) {
  const std::string config = (kConfigs / "bilinear.json").string();
  ASSERT_EQ(run_cli({"profile", config, "--out", dir_.string(), "--quiet"}).code, kExitOk);
  const auto r = run_cli({"simulate", config, (dir_ / "profile.json").string(), "--out",
                          dir_.string(), "--format", "json", "--quiet"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_FALSE(fs::exists(dir_ / "simulation.csv"));
  const auto j = nlohmann::json::parse(slurp(dir_ / "simulation.json"));
  EXPECT_EQ(j["seed"], 42u);
  for (const auto& b : j["bands"]) {
    EXPECT_EQ(b["intended_fraction"].get<double>(), 1.0);
    EXPECT_TRUE(b["profit_ok"].get<bool>());
  }
}

TEST_F(Cli, TradeoffEmitsBoundaryAndRegion) {
  const auto r = run_cli({"tradeoff", (kConfigs / "tradeoff.json").string(), "--out",
                          dir_.string(), "--points", "11", "--quiet"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto m = column(dir_ / "tradeoff.csv", 0);
  const auto b = column(dir_ / "tradeoff.csv", 1);
  ASSERT_EQ(m.size(), 11u);
  for (std::size_t i = 0; i < m.size(); ++i) {
    EXPECT_NEAR(36 * m[i] * 1.5 + b[i], 2.0 / 3.0, 1e-8);  // 9 printed digits
  }
  const auto j = nlohmann::json::parse(slurp(dir_ / "tradeoff.json"));
  EXPECT_DOUBLE_EQ(j["b0"].get<double>(), 2.0 / 3.0);
  EXPECT_EQ(column(dir_ / "region.csv", 3).size(), 8u * 7u);
}

TEST_F(Cli, ExitCodesByCategory) {
  const auto wrong_mode = run_cli({"profile", (kConfigs / "log_budget.json").string()});
  EXPECT_EQ(wrong_mode.code, kExitConfig);
  EXPECT_NE(wrong_mode.err.find("\"field\":\"mode\""), std::string::npos);

  const auto numerical = write("flat.json", R"({"mode": "menu",
    "budgets": [{"family": "linear", "slope": 0.5}],
    "cost": {"family": "linear", "slope": 1}})");
  const auto r = run_cli({"menu", numerical.string(), "--out", dir_.string()});
  EXPECT_EQ(r.code, kExitNumerical);
  EXPECT_NE(r.err.find("\"category\":\"numerical\""), std::string::npos);

  EXPECT_EQ(run_cli({"menu"}).code, kExitConfig);
  EXPECT_EQ(run_cli({}).code, kExitConfig);
  EXPECT_EQ(run_cli({"menu", "x.json", "--format", "xml"}).code, kExitConfig);
  EXPECT_EQ(run_cli({"--help"}).code, kExitOk);
}

TEST_F(Cli, NotAchievableProfileExitsThree) {
  auto j = nlohmann::json::parse(slurp(kConfigs / "bilinear.json"));
  j["margins"]["m"] = {0.1, 0.2, 0.3};
  const auto cfg = write("wide.json", j.dump());
  const auto r = run_cli({"profile", cfg.string(), "--out", dir_.string()});
  EXPECT_EQ(r.code, kExitConstraint);
  EXPECT_NE(r.err.find("demand_range"), std::string::npos) << r.err;
}

// --- load_config ---

class LoadConfig : public Cli {
 protected:
  ConfigError expect_error(const std::string& text) {
    const auto p = write("bad.json", text);
    try {
      load_config(p);
    } catch (const ConfigError& e) {
      return e;
    }
    ADD_FAILURE() << "no ConfigError for " << text;
    return ConfigError("", "");
  }
};

TEST_F(LoadConfig, MinimalMenuGetsDefaults) {
  const auto p = write("m.json", R"({"mode": "menu",
    "budgets": [{"family": "log", "scale": 2.2}],
    "cost": {"family": "linear", "slope": 1}})");
  const ScenarioConfig c = load_config(p);
  ASSERT_TRUE(c.menu.has_value());
  EXPECT_EQ(c.menu->grid_n, 512u);
  EXPECT_EQ(c.menu->scenario.s_search_max, 1e6);
  EXPECT_EQ(c.menu->scenario.profit.value(7.0), 0.0);
  EXPECT_FALSE(c.format.has_value());
  EXPECT_EQ(c.scenario_hash.size(), 16u);
}

TEST_F(LoadConfig, MinimalProfileGetsDefaults) {
  const auto p = write("p.json", R"({"mode": "profile",
    "tariff": {"family": "bilinear", "D_p": 4},
    "cost": {"family": "linear", "slope": 1},
    "box": {"theta_low": 0.4, "theta_up": 1, "s_low": 1, "s_up": 2},
    "qualities": [1, 2],
    "margins": {"b": [0.1, 0.2], "m": [0.01, 0.02]}})");
  const ScenarioConfig c = load_config(p);
  ASSERT_TRUE(c.profile.has_value());
  EXPECT_EQ(c.profile->scenario.price_lambda, 0.5);
  EXPECT_EQ(c.profile->scenario.grid_n, 512u);
  EXPECT_EQ(c.profile->probes, 9u);
  EXPECT_EQ(c.profile->quad_n, 256u);
}

TEST_F(LoadConfig, HashIgnoresOutputBlock) {
  auto j = nlohmann::json::parse(slurp(kConfigs / "bilinear.json"));
  const auto a = write("a.json", j.dump());
  j["output"] = {{"dir", "elsewhere"}, {"format", "csv"}};
  const auto b = write("b.json", j.dump());
  j["seed"] = 43;
  const auto c = write("c.json", j.dump());
  EXPECT_EQ(load_config(a).scenario_hash, load_config(b).scenario_hash);
  EXPECT_NE(load_config(a).scenario_hash, load_config(c).scenario_hash);
  EXPECT_EQ(load_config(b).out_dir, "elsewhere");
}

TEST_F(LoadConfig, DecreasingMarginsRejected) {
  auto j = nlohmann::json::parse(slurp(kConfigs / "bilinear.json"));
  j["qualities"] = {1, 2};
  j["margins"] = {{"b", {0.1, 0.2}}, {"m", {0.02, 0.01}}};
  const ConfigError e = expect_error(j.dump());
  EXPECT_STREQ(e.what(), "margins.m must be strictly increasing");
  EXPECT_EQ(e.field(), "margins.m");
}

TEST_F(LoadConfig, UnknownFamilyNamesField) {
  const ConfigError e = expect_error(R"({"mode": "menu",
    "budgets": [{"family": "log", "scale": 1}, {"family": "expp", "scale": 1}],
    "cost": {"family": "linear", "slope": 1}})");
  EXPECT_EQ(e.field(), "budgets[1].family");
  EXPECT_NE(std::string(e.what()).find("expp"), std::string::npos);
}

TEST_F(LoadConfig, StrictnessErrors) {
  EXPECT_EQ(expect_error(R"({"mode": "menu", "budgetz": [],
      "budgets": [{"family": "log", "scale": 1}],
      "cost": {"family": "linear", "slope": 1}})").field(), "budgetz");
  EXPECT_EQ(expect_error(R"({"mode": "menu",
      "budgets": [{"family": "log", "scale": 1, "slope": 2}],
      "cost": {"family": "linear", "slope": 1}})").field(),
            "budgets[0].slope");
  EXPECT_EQ(expect_error(R"({"mode": "menu", "budgets": [)").field(), "config");
  EXPECT_EQ(expect_error(R"({"mode": "auction"})").field(), "mode");
  EXPECT_EQ(expect_error(R"({"mode": "menu",
      "budgets": [{"family": "log", "scale": "big"}],
      "cost": {"family": "linear", "slope": 1}})").field(),
            "budgets[0].scale");
  EXPECT_EQ(expect_error(R"({"mode": "menu",
      "budgets": [{"family": "log", "scale": 1}]})").field(),
            "cost");
  EXPECT_EQ(expect_error(R"({"mode": "menu",
      "budgets": [{"family": "tabulated", "csv": "missing.csv"}],
      "cost": {"family": "linear", "slope": 1}})").field(),
            "budgets[0].csv");
}

TEST_F(LoadConfig, TabulatedCsvResolvesRelativeToConfig) {
  write("cost.csv", "s,value\n0,0\n1,1.5\n4,6\n");
  write("tariff.csv",
        "theta,s,value\n0.2,1,0.8\n0.2,2,1.6\n1,1,4\n1,2,8\n");
  const auto p = write("t.json", R"({"mode": "profile",
    "tariff": {"family": "tabulated", "csv": "tariff.csv"},
    "cost": {"family": "tabulated", "csv": "cost.csv"},
    "box": {"theta_low": 0.2, "theta_up": 1, "s_low": 1, "s_up": 2},
    "qualities": [1, 2],
    "margins": {"b": [0, 0], "m": [0.001, 0.002]}})");
  const ScenarioConfig c = load_config(p);
  EXPECT_DOUBLE_EQ(c.profile->scenario.cost.value(2.0), 3.0);
  EXPECT_NEAR(c.profile->scenario.tariff.value(0.6, 1.5), 3.6, 1e-12);

  // Editing a referenced table changes the hash.
  const std::string before = c.scenario_hash;
  write("cost.csv", "s,value\n0,0\n1,1.5\n4,6.5\n");
  EXPECT_NE(load_config(p).scenario_hash, before);
}

}  // namespace
}  // namespace tprice::cli
