#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "tprice/errors.hpp"

namespace tprice::cli {
namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

struct Context {
  std::filesystem::path base_dir;
  std::string csv_bytes;  // every referenced CSV, in load order, for hashing
};

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

std::size_t as_count(const json& j, const std::string& path, std::size_t min) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ConfigError(path, "must be a non-negative integer");
  }
  const auto v = j.get<std::size_t>();
  if (v < min) throw ConfigError(path, "must be at least " + std::to_string(min));
  return v;
}

std::vector<double> as_vector(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], index(path, i)));
  return out;
}

// Object view that remembers which keys were read so leftovers can be
// rejected.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      throw ConfigError(path_.empty() ? "<root>" : path_, "must be an object");
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw ConfigError(field(key), "is required");
    return j_.at(key);
  }

  const json* get(const std::string& key) {
    used_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  std::string field(const std::string& key) const { return join(path_, key); }

  double number(const std::string& key) { return as_number(at(key), field(key)); }

  double number_or(const std::string& key, double dflt) {
    const json* v = get(key);
    return v ? as_number(*v, field(key)) : dflt;
  }

  std::size_t count_or(const std::string& key, std::size_t dflt, std::size_t min) {
    const json* v = get(key);
    return v ? as_count(*v, field(key), min) : dflt;
  }

  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(field(key), "must be a string");
    return v.get<std::string>();
  }

  std::vector<double> vector(const std::string& key) {
    return as_vector(at(key), field(key));
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) throw ConfigError(field(key), "is not a recognised key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

// Numeric CSV with `cols` columns. An optional non-numeric header line and
// '#' comments are skipped.
std::vector<std::vector<double>> read_csv(const std::string& rel,
                                          const std::string& field,
                                          std::size_t cols, Context& ctx) {
  const std::filesystem::path p = std::filesystem::path(rel).is_absolute()
                                      ? std::filesystem::path(rel)
                                      : ctx.base_dir / rel;
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError(field, "cannot read " + p.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  ctx.csv_bytes += text;

  std::vector<std::vector<double>> out(cols);
  std::istringstream lines(text);
  std::string line;
  std::size_t lineno = 0;
  bool seen_data = false;
  while (std::getline(lines, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(cells, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      while (end && (*end == ' ' || *end == '\t')) ++end;
      if (cell.empty() || end == cell.c_str() || *end != '\0') {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (!seen_data && lineno == 1) continue;  // header
      throw ConfigError(field, p.filename().string() + " line " +
                                   std::to_string(lineno) + " is not numeric");
    }
    if (row.size() != cols) {
      throw ConfigError(field, p.filename().string() + " line " +
                                   std::to_string(lineno) + " needs " +
                                   std::to_string(cols) + " columns");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!std::isfinite(row[c])) throw ConfigError(field, "CSV values must be finite");
      out[c].push_back(row[c]);
    }
    seen_data = true;
  }
  if (!seen_data) throw ConfigError(field, p.filename().string() + " has no data rows");
  return out;
}

template <class F>
auto guarded(const std::string& field, F&& make) {
  try {
    return make();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
}

ScalarFunction parse_function(const json& j, const std::string& path, Context& ctx) {
  Obj o(j, path);
  const std::string fam = o.string("family");
  if (fam == "linear") {
    const double slope = o.number("slope");
    o.finish();
    return guarded(path, [&] { return ScalarFunction::linear(slope); });
  }
  if (fam == "log") {
    const double scale = o.number("scale");
    o.finish();
    return guarded(path, [&] { return ScalarFunction::logarithmic(scale); });
  }
  if (fam == "power") {
    const double scale = o.number("scale");
    const double exponent = o.number("exponent");
    o.finish();
    return guarded(path, [&] { return ScalarFunction::power(scale, exponent); });
  }
  if (fam == "scaled") {
    ScalarFunction base = parse_function(o.at("base"), o.field("base"), ctx);
    const double factor = o.number("factor");
    o.finish();
    return guarded(path, [&] { return ScalarFunction::scaled(base, factor); });
  }
  if (fam == "tabulated") {
    const std::string csv = o.string("csv");
    o.finish();
    auto cols = read_csv(csv, o.field("csv"), 2, ctx);
    return guarded(path, [&] {
      return ScalarFunction::tabulated(std::move(cols[0]), std::move(cols[1]));
    });
  }
  throw ConfigError(o.field("family"), "has unknown family \"" + fam + "\"");
}

DomainBox parse_box(const json& j, const std::string& path) {
  Obj o(j, path);
  DomainBox b{o.number("theta_low"), o.number("theta_up"), o.number("s_low"),
              o.number("s_up")};
  o.finish();
  guarded(path, [&] {
    b.validate();
    return 0;
  });
  return b;
}

TariffFunction parse_tariff(const json& j, const std::string& path,
                            const DomainBox& box, Context& ctx) {
  Obj o(j, path);
  const std::string fam = o.string("family");
  if (fam == "bilinear") {
    const double d_p = o.number("D_p");
    o.finish();
    return guarded(path, [&] { return TariffFunction::bilinear(d_p, box); });
  }
  if (fam == "separable") {
    ScalarFunction g = parse_function(o.at("g"), o.field("g"), ctx);
    ScalarFunction h = parse_function(o.at("h"), o.field("h"), ctx);
    o.finish();
    return guarded(path, [&] { return TariffFunction::separable(g, h, box); });
  }
  if (fam == "tabulated") {
    const std::string csv = o.string("csv");
    o.finish();
    const std::string field = o.field("csv");
    const auto cols = read_csv(csv, field, 3, ctx);
    std::vector<double> th = cols[0], s = cols[1];
    std::sort(th.begin(), th.end());
    th.erase(std::unique(th.begin(), th.end()), th.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    std::map<std::pair<double, double>, double> cells;
    for (std::size_t r = 0; r < cols[0].size(); ++r) {
      if (!cells.emplace(std::make_pair(cols[0][r], cols[1][r]), cols[2][r]).second) {
        throw ConfigError(field, "duplicate grid point in tariff table");
      }
    }
    if (cells.size() != th.size() * s.size()) {
      throw ConfigError(field, "tariff table must cover a full (theta, s) grid");
    }
    std::vector<double> values;
    values.reserve(cells.size());
    for (const auto& [key, v] : cells) values.push_back(v);  // theta-major order
    return guarded(path, [&] {
      return TariffFunction::tabulated(th, s, std::move(values), box);
    });
  }
  throw ConfigError(o.field("family"), "has unknown family \"" + fam + "\"");
}

void require_increasing(const std::vector<double>& v, const std::string& field) {
  const bool all_zero =
      std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  if (all_zero) return;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] < 0.0) throw ConfigError(field, "must be non-negative");
    if (k > 0 && !(v[k] > v[k - 1])) throw ConfigError(field, "must be strictly increasing");
  }
}

MarginSpec parse_margins(const json& j, const std::string& path, std::size_t L) {
  Obj o(j, path);
  MarginSpec m;
  m.b = o.vector("b");
  m.m = o.vector("m");
  if (const json* g = o.get("gap")) m.gap = as_vector(*g, o.field("gap"));
  o.finish();
  if (m.b.size() != L) throw ConfigError(o.field("b"), "must have one entry per quality");
  if (m.m.size() != L) throw ConfigError(o.field("m"), "must have one entry per quality");
  require_increasing(m.b, o.field("b"));
  require_increasing(m.m, o.field("m"));
  guarded(path, [&] {
    m.validate();
    return 0;
  });
  return m;
}

// Shared by profile mode and the empirical tradeoff template.
ProfileScenario parse_profile_core(Obj& o, Context& ctx, bool with_margins) {
  const DomainBox box = parse_box(o.at("box"), o.field("box"));
  TariffFunction tariff = parse_tariff(o.at("tariff"), o.field("tariff"), box, ctx);
  ScalarFunction cost = parse_function(o.at("cost"), o.field("cost"), ctx);
  std::vector<double> q = o.vector("qualities");
  if (q.empty()) throw ConfigError(o.field("qualities"), "must not be empty");
  for (std::size_t k = 1; k < q.size(); ++k) {
    if (!(q[k] > q[k - 1])) {
      throw ConfigError(o.field("qualities"), "must be strictly increasing");
    }
  }
  MarginSpec margins{std::vector<double>(q.size(), 0.0),
                     std::vector<double>(q.size(), 0.0), std::nullopt};
  if (with_margins) margins = parse_margins(o.at("margins"), o.field("margins"), q.size());
  ProfileScenario sc{std::move(q), std::move(tariff), std::move(cost), std::move(margins)};
  sc.price_lambda = o.number_or("price_lambda", 0.5);
  sc.grid_n = o.count_or("grid_n", kDefaultGridN, 16);
  guarded(o.field("qualities"), [&] {
    sc.validate();
    return 0;
  });
  return sc;
}

MenuConfig parse_menu(Obj& o, Context& ctx) {
  const json& budgets = o.at("budgets");
  const std::string bpath = o.field("budgets");
  if (!budgets.is_array() || budgets.empty()) {
    throw ConfigError(bpath, "must be a non-empty array of functions");
  }
  MenuConfig mc;
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    mc.scenario.budgets.push_back(parse_function(budgets[i], index(bpath, i), ctx));
  }
  mc.scenario.cost = parse_function(o.at("cost"), o.field("cost"), ctx);
  if (const json* p = o.get("profit")) {
    mc.scenario.profit = parse_function(*p, o.field("profit"), ctx);
  }
  mc.scenario.s_search_max = o.number_or("s_search_max", 1e6);
  if (!(mc.scenario.s_search_max > 0.0)) {
    throw ConfigError(o.field("s_search_max"), "must be positive");
  }
  if (const json* p = o.get("s_probe")) {
    const auto v = as_vector(*p, o.field("s_probe"));
    if (v.size() != 2 || !(v[0] >= 0.0) || !(v[1] > v[0])) {
      throw ConfigError(o.field("s_probe"), "must be [lo, hi] with 0 <= lo < hi");
    }
    mc.probe = {v[0], v[1]};
  }
  mc.grid_n = o.count_or("grid_n", kDefaultGridN, 16);
  return mc;
}

ProfileConfig parse_profile(Obj& o, Context& ctx) {
  ProfileConfig pc{parse_profile_core(o, ctx, true)};
  pc.probes = o.count_or("probes", kDefaultProbesPerBand, 3);
  pc.quad_n = o.count_or("quad_n", 256, 64);
  pc.samples = o.count_or("samples", 1000, 1);
  if (const json* s = o.get("seed")) {
    if (!s->is_number_unsigned()) throw ConfigError(o.field("seed"), "must be a non-negative integer");
    pc.seed = s->get<std::uint64_t>();
  }
  return pc;
}

TradeoffConfig parse_tradeoff(Obj& o, Context& ctx) {
  TradeoffConfig tc;
  tc.delta_s = o.number("delta_S");
  tc.delta_theta = o.number("delta_theta");
  tc.types = as_count(o.at("L"), o.field("L"), 1);
  tc.d_p = o.number("D_p");
  tc.points = o.count_or("points", 51, 2);
  if (!(tc.delta_s > 0.0)) throw ConfigError(o.field("delta_S"), "must be positive");
  if (!(tc.delta_theta > 0.0)) throw ConfigError(o.field("delta_theta"), "must be positive");
  if (!(tc.d_p > 0.0)) throw ConfigError(o.field("D_p"), "must be positive");
  if (const json* e = o.get("empirical")) {
    Obj eo(*e, o.field("empirical"));
    EmpiricalConfig ec{parse_profile_core(eo, ctx, false), eo.vector("b_grid"),
                       eo.vector("m_grid")};
    const auto check_grid = [&](const std::vector<double>& g, const char* key) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] < 0.0 || (i > 0 && !(g[i] > g[i - 1]))) {
          throw ConfigError(eo.field(key), "must be non-negative and strictly increasing");
        }
      }
    };
    check_grid(ec.b_grid, "b_grid");
    check_grid(ec.m_grid, "m_grid");
    eo.finish();
    tc.empirical = std::move(ec);
  }
  return tc;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

const char* mode_name(Mode m) noexcept {
  switch (m) {
    case Mode::kMenu: return "menu";
    case Mode::kProfile: return "profile";
    case Mode::kTradeoff: return "tradeoff";
  }
  return "?";
}

std::optional<Format> parse_format(const std::string& s) {
  if (s == "json") return Format::kJson;
  if (s == "csv") return Format::kCsv;
  if (s == "both") return Format::kBoth;
  return std::nullopt;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }

  Context ctx{path.parent_path(), {}};
  Obj o(root, "");
  ScenarioConfig cfg;
  const std::string mode = o.string("mode");
  if (mode == "menu") {
    cfg.mode = Mode::kMenu;
    cfg.menu = parse_menu(o, ctx);
  } else if (mode == "profile") {
    cfg.mode = Mode::kProfile;
    cfg.profile = parse_profile(o, ctx);
  } else if (mode == "tradeoff") {
    cfg.mode = Mode::kTradeoff;
    cfg.tradeoff = parse_tradeoff(o, ctx);
  } else {
    throw ConfigError("mode", "must be one of menu, profile, tradeoff");
  }

  if (const json* out = o.get("output")) {
    Obj oo(*out, "output");
    if (const json* d = oo.get("dir")) {
      if (!d->is_string()) throw ConfigError("output.dir", "must be a string");
      cfg.out_dir = d->get<std::string>();
    }
    if (const json* f = oo.get("format")) {
      const auto fmt = f->is_string() ? parse_format(f->get<std::string>()) : std::nullopt;
      if (!fmt) throw ConfigError("output.format", "must be json, csv or both");
      cfg.format = fmt;
    }
    oo.finish();
  }
  o.finish();

  json hashed = root;
  hashed.erase("output");
  cfg.scenario_hash = fnv1a_hex(hashed.dump() + '\n' + ctx.csv_bytes);
  return cfg;
}

}  // namespace tprice::cli
