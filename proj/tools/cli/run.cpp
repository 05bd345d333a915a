#include "run.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "config.hpp"
#include "report.hpp"
#include "tprice/errors.hpp"
#include "tprice/market_sim.hpp"
#include "tprice/regularity.hpp"
#include "tprice/tradeoff.hpp"
#include "tprice/verifier.hpp"

namespace tprice::cli {
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string solution;
  std::string out_dir;
  std::string format;
  bool quiet = false;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> points;
};

class Session {
 public:
  Session(const Options& opt, std::ostream& out) : opt_(opt), out_(out) {
    cfg_ = load_config(opt_.config);
    if (!opt_.out_dir.empty()) {
      dir_ = opt_.out_dir;
    } else if (cfg_.out_dir) {
      dir_ = *cfg_.out_dir;
    } else if (const char* env = std::getenv("TPRICE_OUT"); env && *env) {
      dir_ = env;
    } else {
      dir_ = "out";
    }
    format_ = !opt_.format.empty() ? *parse_format(opt_.format)
                                    : cfg_.format.value_or(Format::kBoth);
  }

  int menu();
  int profile();
  int verify();
  int simulate();
  int tradeoff();
  int check();

 private:
  void require_mode(Mode m, const char* cmd) const {
    if (cfg_.mode != m) {
      throw ConfigError("mode", std::string("the ") + cmd + " subcommand needs mode \"" +
                                    mode_name(m) + "\"");
    }
  }
  bool want_json() const { return format_ != Format::kCsv; }
  bool want_csv() const { return format_ != Format::kJson; }

  void write(const std::string& name, const std::string& text) const {
    fs::create_directories(dir_);
    std::ofstream f(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("output.dir", "cannot write " + (dir_ / name).string());
    f << text;
  }
  void write_json(const std::string& name, const json& j) const {
    write(name, j.dump(2) + "\n");
  }

  json load_solution(const char* kind) const;
  void print_verification(const VerificationReport& r, const char* label) const;

  const Options& opt_;
  std::ostream& out_;
  ScenarioConfig cfg_;
  fs::path dir_;
  Format format_ = Format::kBoth;
};

json Session::load_solution(const char* kind) const {
  std::ifstream in(opt_.solution, std::ios::binary);
  if (!in) throw ConfigError("solution", "cannot read " + opt_.solution);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("solution", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("kind", "") != kind) {
    throw ConfigError("solution.kind", std::string("must be \"") + kind + "\"");
  }
  const std::string hash = j.value("scenario_hash", "");
  if (hash != cfg_.scenario_hash) {
    throw ConfigError("solution.scenario_hash",
                      "does not match the config (" + hash + " vs " + cfg_.scenario_hash + ")");
  }
  return j;
}

void Session::print_verification(const VerificationReport& r, const char* label) const {
  if (opt_.quiet) return;
  out_ << label << ": " << (r.passed ? "PASS" : "FAIL") << " (" << r.checked
       << " checks, worst margin " << fmt9(r.worst_margin) << ")\n";
  for (const auto& v : r.violations) out_ << "  " << describe(v) << "\n";
}

int Session::menu() {
  require_mode(Mode::kMenu, "menu");
  const MenuScenario& sc = cfg_.menu->scenario;
  const QualityPriceMenu m = solve_menu(sc);
  const VerificationReport r = verify_menu(m, sc);
  if (want_json()) write_json("menu.json", menu_json(m, cfg_.scenario_hash));
  if (want_csv()) write("menu.csv", menu_csv(m, sc));
  if (!opt_.quiet) {
    out_ << "type  quality  price  net\n";
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
      const auto& e = m.entries[i];
      out_ << (i + 1) << "  " << fmt9(e.quality) << "  " << fmt9(e.price) << "  "
           << fmt9(e.net) << "\n";
    }
  }
  print_verification(r, "verify_menu");
  return kExitOk;
}

int Session::profile() {
  require_mode(Mode::kProfile, "profile");
  const ProfileConfig& pc = *cfg_.profile;
  const DemandPriceProfile p = build_profile(pc.scenario, pc.probes);
  const VerificationReport r = verify_profile(p, pc.scenario, pc.probes);
  const VerificationReport w = crosscheck_windows(pc.scenario, p, pc.quad_n);
  if (!w.passed) {
    throw CertificationError("window cross-check failed: " + describe(w.violations.front()));
  }
  if (want_json()) write_json("profile.json", profile_json(p, cfg_.scenario_hash));
  if (want_csv()) write("profile.csv", profile_csv(p));
  if (!opt_.quiet) {
    out_ << "k  theta  price  window_lo  window_hi  delta\n";
    for (std::size_t k = 0; k < p.entries.size(); ++k) {
      const auto& e = p.entries[k];
      out_ << (k + 1) << "  " << fmt9(e.theta) << "  " << fmt9(e.price) << "  "
           << fmt9(e.window.lo) << "  " << fmt9(e.window.hi) << "  " << fmt9(p.steps[k])
           << "\n";
    }
  }
  print_verification(r, "verify_profile");
  print_verification(w, "crosscheck_windows");
  return kExitOk;
}

int Session::verify() {
  if (cfg_.mode == Mode::kMenu) {
    const QualityPriceMenu m = menu_from_json(load_solution("menu"));
    const MenuScenario& sc = cfg_.menu->scenario;
    if (m.entries.size() != sc.types()) {
      throw ConfigError("solution.entries", "must have one entry per budget");
    }
    const VerificationReport r = verify_menu(m, sc);
    if (want_json()) write_json("verification.json", {{"menu", verification_json(r)}});
    print_verification(r, "verify_menu");
    return r.passed ? kExitOk : kExitConstraint;
  }
  require_mode(Mode::kProfile, "verify");
  const ProfileConfig& pc = *cfg_.profile;
  const DemandPriceProfile p = profile_from_json(load_solution("profile"));
  if (p.entries.size() != pc.scenario.size()) {
    throw ConfigError("solution.entries", "must have one entry per quality");
  }
  const VerificationReport r = verify_profile(p, pc.scenario, pc.probes);
  const VerificationReport w = crosscheck_windows(pc.scenario, p, pc.quad_n);
  if (want_json()) {
    write_json("verification.json",
               {{"profile", verification_json(r)}, {"windows", verification_json(w)}});
  }
  print_verification(r, "verify_profile");
  print_verification(w, "crosscheck_windows");
  return r.passed && w.passed ? kExitOk : kExitConstraint;
}

int Session::simulate() {
  require_mode(Mode::kProfile, "simulate");
  const ProfileConfig& pc = *cfg_.profile;
  const DemandPriceProfile p = profile_from_json(load_solution("profile"));
  if (p.entries.size() != pc.scenario.size()) {
    throw ConfigError("solution.entries", "must have one entry per quality");
  }
  const std::size_t samples = opt_.samples.value_or(pc.samples);
  if (samples == 0) throw ConfigError("samples", "must be at least 1");
  const MarketSimReport r =
      simulate_market(p, pc.scenario, samples, opt_.seed.value_or(pc.seed));
  if (want_json()) write_json("simulation.json", simulation_json(r));
  if (want_csv()) {
    std::string csv =
        "k,samples,intended_fraction,min_saving,mean_saving,provider_profit,profit_floor,"
        "profit_ok\n";
    for (std::size_t k = 0; k < r.bands.size(); ++k) {
      const auto& b = r.bands[k];
      csv += std::to_string(k + 1) + "," + std::to_string(b.samples) + "," +
             fmt9(b.intended_fraction) + "," + fmt9(b.min_saving) + "," +
             fmt9(b.mean_saving) + "," + fmt9(b.provider_profit) + "," +
             fmt9(b.profit_floor) + "," + (b.profit_ok ? "1" : "0") + "\n";
    }
    write("simulation.csv", csv);
  }
  bool ok = true;
  if (!opt_.quiet) out_ << "k  intended  min_saving  mean_saving  profit  floor\n";
  for (std::size_t k = 0; k < r.bands.size(); ++k) {
    const auto& b = r.bands[k];
    ok = ok && b.profit_ok && b.intended_fraction == 1.0;
    if (!opt_.quiet) {
      out_ << (k + 1) << "  " << fmt9(b.intended_fraction) << "  " << fmt9(b.min_saving)
           << "  " << fmt9(b.mean_saving) << "  " << fmt9(b.provider_profit) << "  "
           << fmt9(b.profit_floor) << "\n";
    }
  }
  if (!opt_.quiet) {
    out_ << "out-of-band: " << r.out_of_band.samples << " samples, affordable "
         << fmt9(r.out_of_band.affordable_fraction) << "\n";
  }
  return ok ? kExitOk : kExitConstraint;
}

int Session::tradeoff() {
  require_mode(Mode::kTradeoff, "tradeoff");
  const TradeoffConfig& tc = *cfg_.tradeoff;
  const std::size_t points = opt_.points.value_or(tc.points);
  if (points < 2) throw ConfigError("points", "must be at least 2");
  const TradeoffCurve c =
      homogeneous_region(tc.delta_s, tc.delta_theta, tc.types, tc.d_p, points);

  json summary = tradeoff_json(c);
  std::vector<int> verdicts;
  if (tc.empirical) {
    const auto& e = *tc.empirical;
    for (const auto& p : c.points) {
      const double b[] = {p.b}, m[] = {p.m};
      verdicts.push_back(empirical_region(e.scenario_template, b, m).achievable(0, 0));
    }
    const AchievabilityGrid g = empirical_region(e.scenario_template, e.b_grid, e.m_grid);
    std::size_t pass = 0;
    for (auto cell : g.cells) pass += cell;
    summary["region"] = {{"cells", g.cells.size()}, {"achievable", pass}};
    if (want_csv()) write("region.csv", region_csv(c, g));
  }
  if (want_json()) write_json("tradeoff.json", summary);
  if (want_csv()) write("tradeoff.csv", tradeoff_csv(c, verdicts));
  if (!opt_.quiet) {
    out_ << "m0 " << fmt9(c.m0) << "  b0 " << fmt9(c.b0) << "  (" << c.points.size()
         << " boundary points)\n";
  }
  return kExitOk;
}

int Session::check() {
  ConditionReport r;
  if (cfg_.mode == Mode::kMenu) {
    const MenuConfig& mc = *cfg_.menu;
    r = check_regularity_thm1(mc.scenario.budgets, mc.scenario.cost, mc.scenario.profit,
                              mc.probe, mc.grid_n);
  } else if (cfg_.mode == Mode::kProfile) {
    r = check_achievability(cfg_.profile->scenario);
  } else if (cfg_.tradeoff->empirical) {
    r = check_achievability(cfg_.tradeoff->empirical->scenario_template);
  }
  if (!opt_.quiet) {
    if (format_ == Format::kJson) {
      out_ << conditions_json(r).dump(2) << "\n";
    } else {
      for (const auto& c : r.checks) {
        out_ << (c.passed ? "ok    " : "FAIL  ") << c.id << "  margin " << fmt9(c.margin);
        if (!c.detail.empty()) out_ << "  " << c.detail;
        out_ << "\n";
      }
    }
  }
  if (const ConditionCheck* f = r.first_failure()) {
    throw NotAchievableError("condition " + f->id + " fails (margin " + fmt9(f->margin) +
                             ")" + (f->detail.empty() ? "" : ": " + f->detail));
  }
  return kExitOk;
}

const char* category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kConfig: return "config";
    case ErrorCategory::kConstraint: return "constraint";
    case ErrorCategory::kNumerical: return "numerical";
  }
  return "internal";
}

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kConfig: return kExitConfig;
    case ErrorCategory::kConstraint: return kExitConstraint;
    case ErrorCategory::kNumerical: return kExitNumerical;
  }
  return kExitNumerical;
}

void report(std::ostream& err, const std::string& kind, const std::string& category,
            const std::string& message, const std::string* field = nullptr) {
  json e = {{"kind", kind}, {"category", category}, {"message", message}};
  if (field) e["field"] = *field;
  err << json{{"error", e}}.dump() << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quality-price menus and demand-price profiles with certification", "tprice"};
  app.require_subcommand(1, 1);
  Options opt;

  const auto common = [&](CLI::App* sub, bool needs_solution) {
    sub->add_option("config", opt.config, "Scenario config (JSON)")->required();
    if (needs_solution) {
      sub->add_option("solution", opt.solution, "Solution JSON from menu/profile")->required();
    }
    sub->add_option("--out", opt.out_dir, "Output directory (default: $TPRICE_OUT)");
    sub->add_option("--format", opt.format, "json, csv or both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    sub->add_flag("--quiet", opt.quiet, "Suppress tables on stdout");
  };

  auto* menu = app.add_subcommand("menu", "Solve, verify and emit a quality-price menu");
  common(menu, false);
  auto* profile = app.add_subcommand("profile", "Build, verify and emit a demand-price profile");
  common(profile, false);
  auto* verify = app.add_subcommand("verify", "Re-certify an existing solution");
  common(verify, true);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo market check of a profile");
  common(simulate, true);
  simulate->add_option("--samples", opt.samples, "Samples per band");
  simulate->add_option("--seed", opt.seed, "RNG seed");
  auto* tradeoff = app.add_subcommand("tradeoff", "Profit-satisfaction boundary");
  common(tradeoff, false);
  tradeoff->add_option("--points", opt.points, "Boundary points");
  auto* check = app.add_subcommand("check", "Regularity and achievability reports only");
  common(check, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report(err, "usage", "config", e.what());
    return kExitConfig;
  }

  try {
    Session s(opt, out);
    if (menu->parsed()) return s.menu();
    if (profile->parsed()) return s.profile();
    if (verify->parsed()) return s.verify();
    if (simulate->parsed()) return s.simulate();
    if (tradeoff->parsed()) return s.tradeoff();
    return s.check();
  } catch (const ConfigError& e) {
    report(err, e.kind(), "config", e.what(), &e.field());
    return kExitConfig;
  } catch (const Error& e) {
    report(err, e.kind(), category_name(e.category()), e.what());
    return exit_code(e.category());
  } catch (const fs::filesystem_error& e) {
    report(err, "io", "config", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    report(err, "internal", "numerical", e.what());
    return kExitNumerical;
  }
}

}  // namespace tprice::cli
