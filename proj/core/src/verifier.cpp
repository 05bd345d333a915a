#include "tprice/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <utility>

#include "tprice/quadrature.hpp"
#include "tprice/regularity.hpp"

namespace tprice {
namespace {

constexpr double kWindowRelTol = 1e-6;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

// Collects signed margins. Inequalities fail below -kVerifySlack, strict
// orderings fail at or below zero.
class Recorder {
 public:
  void inequality(std::string id, int k, int l, double margin,
                  std::vector<double> witness = {}) {
    add(std::move(id), k, l, margin, std::move(witness), margin < -kVerifySlack);
  }

  void strict(std::string id, int k, int l, double margin,
              std::vector<double> witness = {}) {
    add(std::move(id), k, l, margin, std::move(witness), !(margin > 0.0));
  }

  VerificationReport finish() && {
    report_.passed = report_.violations.empty();
    if (report_.checked == 0) report_.worst_margin = 0.0;
    return std::move(report_);
  }

 private:
  void add(std::string id, int k, int l, double margin,
           std::vector<double> witness, bool violated) {
    ++report_.checked;
    if (report_.checked == 1 || margin < report_.worst_margin || std::isnan(margin)) {
      report_.worst_margin = margin;
    }
    if (violated || std::isnan(margin)) {
      report_.violations.push_back(
          {std::move(id), k, l, margin, std::move(witness)});
    }
  }

  VerificationReport report_;
};

// Worst margin over probe points for one (constraint, k, l) triple.
struct Worst {
  double margin = std::numeric_limits<double>::infinity();
  double at = 0.0;
  void update(double m, double t) {
    if (m < margin) {
      margin = m;
      at = t;
    }
  }
};

std::vector<double> band_probes(double theta, double m, std::size_t n,
                                const DomainBox& box) {
  std::vector<double> pts = uniform_grid(theta - m, theta + m, n);
  pts.push_back(theta);
  for (double& t : pts) t = std::clamp(t, box.theta_low, box.theta_up);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

std::string describe(const Violation& v) {
  std::string out = v.constraint;
  if (v.k >= 0) out += " k=" + std::to_string(v.k + 1);
  if (v.l >= 0) out += " l=" + std::to_string(v.l + 1);
  out += " margin=" + num(v.margin);
  if (!v.witness.empty()) {
    out += " at (";
    for (std::size_t i = 0; i < v.witness.size(); ++i) {
      out += (i ? ", " : "") + num(v.witness[i]);
    }
    out += ")";
  }
  return out;
}

VerificationReport verify_menu(const QualityPriceMenu& menu,
                               const MenuScenario& sc) {
  const std::size_t L = sc.types();
  if (menu.entries.size() != L) {
    throw std::invalid_argument("menu has " + std::to_string(menu.entries.size()) +
                                " entries for " + std::to_string(L) + " types");
  }
  Recorder rec;
  const auto& e = menu.entries;
  for (std::size_t k = 0; k < L; ++k) {
    const int ki = static_cast<int>(k);
    const double s = e[k].quality;
    const double p = e[k].price;
    const double own = sc.budgets[k].value(s);
    const double floor = sc.cost.value(s) + sc.profit.value(s);
    rec.inequality("ir.upper", ki, -1, own - p, {s, own, p});
    rec.inequality("ir.lower", ki, -1, p - floor, {s, p, floor});
    for (std::size_t l = 0; l < L; ++l) {
      if (l == k) continue;
      const double other = sc.budgets[k].value(e[l].quality) - e[l].price;
      rec.inequality("ic", ki, static_cast<int>(l), (own - p) - other,
                     {own - p, other});
    }
    const double ds = k == 0 ? s : s - e[k - 1].quality;
    const double dp = k == 0 ? p : p - e[k - 1].price;
    rec.strict("order.quality", ki, -1, ds, {s});
    rec.strict("order.price", ki, -1, dp, {p});
  }
  return std::move(rec).finish();
}

VerificationReport verify_profile(const DemandPriceProfile& profile,
                                  const ProfileScenario& sc,
                                  std::size_t probes_per_band) {
  if (probes_per_band < 3) {
    throw std::invalid_argument("probes_per_band must be at least 3");
  }
  const std::size_t L = sc.size();
  if (profile.entries.size() != L) {
    throw std::invalid_argument("profile has " +
                                std::to_string(profile.entries.size()) +
                                " entries for " + std::to_string(L) +
                                " qualities");
  }
  const auto& F = sc.tariff;
  const auto& q = sc.qualities;
  const auto& m = sc.margins.m;
  const auto& e = profile.entries;
  const DomainBox& bx = sc.box();
  Recorder rec;

  rec.inequality("order.theta", 0, -1, e[0].theta - m[0] - bx.theta_low,
                 {e[0].theta - m[0]});
  rec.inequality("order.theta", static_cast<int>(L - 1), -1,
                 bx.theta_up - (e[L - 1].theta + m[L - 1]),
                 {e[L - 1].theta + m[L - 1]});
  for (std::size_t k = 0; k < L; ++k) {
    const int ki = static_cast<int>(k);
    if (k > 0) {
      rec.strict("order.theta", ki, -1, e[k].theta - e[k - 1].theta, {e[k].theta});
    }
    rec.strict("order.price", ki, -1,
               k == 0 ? e[k].price : e[k].price - e[k - 1].price, {e[k].price});
  }

  for (std::size_t k = 0; k < L; ++k) {
    const int ki = static_cast<int>(k);
    const double p = e[k].price;
    const double floor = sc.cost(q[k]) + sc.margins.b[k];
    rec.inequality("ir.lower", ki, -1, p - floor, {p, floor});

    Worst upper;
    std::vector<Worst> ic(L);
    for (double t : band_probes(e[k].theta, m[k], probes_per_band, bx)) {
      const double own = F(t, q[k]) - p;
      upper.update(own, t);
      for (std::size_t l = 0; l < L; ++l) {
        if (l != k) ic[l].update(own - (F(t, q[l]) - e[l].price), t);
      }
    }
    rec.inequality("ir.upper", ki, -1, upper.margin, {upper.at});
    for (std::size_t l = 0; l < L; ++l) {
      if (l != k) {
        rec.inequality("ic", ki, static_cast<int>(l), ic[l].margin, {ic[l].at});
      }
    }

    if (k + 1 < L) {
      const double lo_band = std::max(e[k].theta - m[k], bx.theta_low);
      const double hi_band = std::min(e[k].theta + m[k], bx.theta_up);
      const double lhs = F(lo_band, q[k]) - p;
      const double rhs =
          sc.margins.gap_at(k) + F(hi_band, q[k + 1]) - e[k + 1].price;
      rec.inequality("profit", ki, ki + 1, lhs - rhs, {lo_band, hi_band});
    }
  }
  return std::move(rec).finish();
}

double WindowDiscrepancy::max_abs_error() const noexcept {
  return std::max(std::abs(lo_closed - lo_quadrature),
                  std::abs(hi_closed - hi_quadrature));
}

std::vector<WindowDiscrepancy> window_discrepancies(
    const ProfileScenario& sc, const DemandPriceProfile& profile,
    std::size_t quad_n) {
  if (quad_n < 64) throw std::invalid_argument("quad_n must be at least 64");
  if (profile.entries.size() != sc.size()) {
    throw std::invalid_argument("profile length differs from scenario");
  }
  const auto& F = sc.tariff;
  const auto& q = sc.qualities;
  const auto& m = sc.margins.m;
  const auto& e = profile.entries;

  auto int_fs = [&](double theta, double s0, double s1) {
    return simpson([&](double s) { return F.partials(theta, s).f_s; }, s0, s1,
                   quad_n);
  };
  auto int_ftheta = [&](double s, double t0, double t1) {
    if (t1 <= t0) return 0.0;
    return simpson([&](double t) { return F.partials(t, s).f_theta; }, t0, t1,
                   quad_n);
  };

  std::vector<WindowDiscrepancy> out;
  for (std::size_t j = 1; j < sc.size(); ++j) {
    const double tp = e[j - 1].theta;
    const double tj = e[j].theta;
    const double pp = e[j - 1].price;
    WindowDiscrepancy d;
    d.j = j;
    d.lo_closed = e[j].window.lo;
    d.hi_closed = e[j].window.hi;
    d.lo_quadrature = pp + int_fs(tp + m[j - 1], q[j - 1], q[j]) +
                      int_ftheta(q[j - 1], tp - m[j - 1], tp + m[j - 1]) +
                      sc.margins.gap_at(j - 1);
    d.hi_quadrature = pp + int_fs(tj - m[j], q[j - 1], q[j]) -
                      int_ftheta(q[j - 1], tj - m[j], tj + m[j]);
    out.push_back(d);
  }
  return out;
}

VerificationReport crosscheck_windows(const ProfileScenario& sc,
                                      const DemandPriceProfile& profile,
                                      std::size_t quad_n) {
  Recorder rec;
  for (const auto& d : window_discrepancies(sc, profile, quad_n)) {
    const int j = static_cast<int>(d.j);
    auto check = [&](const char* id, double closed, double quad) {
      const double tol = kWindowRelTol * std::max(1.0, std::abs(closed));
      rec.inequality(id, j, -1, tol - std::abs(closed - quad),
                     {closed, quad, std::abs(closed - quad)});
    };
    check("window.lo", d.lo_closed, d.lo_quadrature);
    check("window.hi", d.hi_closed, d.hi_quadrature);
  }
  return std::move(rec).finish();
}

}  // namespace tprice
