#include "tprice/profile_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <variant>

#include "tprice/errors.hpp"
#include "tprice/verifier.hpp"

namespace tprice {
namespace {

constexpr double kWindowSlack = 1e-9;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

bool finite_all(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void require_nonneg_nondecreasing(const std::vector<double>& v,
                                  const char* name) {
  if (!finite_all(v)) {
    throw std::invalid_argument(std::string("margins.") + name +
                                " must be finite");
  }
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] < 0.0) {
      throw std::invalid_argument(std::string("margins.") + name +
                                  " must be nonnegative");
    }
    if (k > 0 && v[k] < v[k - 1]) {
      throw std::invalid_argument(std::string("margins.") + name +
                                  " must be nondecreasing");
    }
  }
}

// sup and inf of g' over [lo, hi] for a factor with monotone derivative.
std::pair<double, double> derivative_range(const ScalarFunction& g, double lo,
                                           double hi) {
  const double a = g.derivative(lo);
  const double b = g.derivative(hi);
  return {std::max(a, b), std::min(a, b)};
}

}  // namespace

double MarginSpec::gap_at(std::size_t k) const {
  if (k + 1 >= b.size()) throw std::out_of_range("gap index out of range");
  if (gap) return gap->at(k);
  return b[k + 1] - b[k];
}

void MarginSpec::validate() const {
  if (b.empty()) throw std::invalid_argument("margins must not be empty");
  if (b.size() != m.size()) {
    throw std::invalid_argument("margins.b and margins.m differ in length");
  }
  require_nonneg_nondecreasing(b, "b");
  require_nonneg_nondecreasing(m, "m");
  if (gap) {
    if (gap->size() + 1 != b.size()) {
      throw std::invalid_argument("margins.gap must have L-1 entries");
    }
    if (!finite_all(*gap)) throw std::invalid_argument("margins.gap must be finite");
    for (std::size_t k = 0; k < gap->size(); ++k) {
      const double need = b[k + 1] - b[k];
      if ((*gap)[k] < need - 1e-12 * std::max(1.0, std::abs(need))) {
        throw std::invalid_argument("margins.gap[" + std::to_string(k) +
                                    "] must be at least b[k+1] - b[k]");
      }
    }
  }
}

void ProfileScenario::validate() const {
  const std::size_t L = qualities.size();
  if (L == 0) throw std::invalid_argument("profile needs at least one quality");
  if (margins.size() != L) {
    throw std::invalid_argument("margins length differs from quality count");
  }
  margins.validate();
  const DomainBox& bx = box();
  for (std::size_t k = 0; k < L; ++k) {
    const double s = qualities[k];
    if (!std::isfinite(s) || s < bx.s_low || s > bx.s_up) {
      throw std::invalid_argument("quality " + num(s) +
                                  " outside [s_low, s_up]");
    }
    if (k > 0 && !(s > qualities[k - 1])) {
      throw std::invalid_argument("qualities must be strictly increasing");
    }
  }
  if (!(price_lambda >= 0.0 && price_lambda <= 1.0)) {
    throw std::invalid_argument("price_lambda must lie in [0, 1]");
  }
  if (grid_n < 2) throw std::invalid_argument("grid_n must be at least 2");
}

SensitivityBounds sensitivity_bounds(const ProfileScenario& sc, std::size_t j) {
  if (j == 0 || j >= sc.size()) {
    throw std::out_of_range("sensitivity index must satisfy 1 <= j < L");
  }
  const double s_prev = sc.qualities[j - 1];
  const double s_cur = sc.qualities[j];
  const DomainBox& bx = sc.box();
  SensitivityBounds out;

  if (const auto* bl = std::get_if<family::Bilinear>(&sc.tariff.family())) {
    out.epsilon = bl->d_p * s_prev;
    out.delta = bl->d_p * (s_cur - s_prev);
  } else if (const auto* sep =
                 std::get_if<family::Separable>(&sc.tariff.family());
             sep != nullptr && sep->g->has_monotone_derivative() &&
             sep->h->is_analytic()) {
    const auto [dg_max, dg_min] =
        derivative_range(*sep->g, bx.theta_low, bx.theta_up);
    const double h_prev = sep->h->value(s_prev);
    const double dh = sep->h->value(s_cur) - h_prev;
    out.epsilon = h_prev >= 0.0 ? dg_max * h_prev : dg_min * h_prev;
    out.delta = dh >= 0.0 ? dg_min * dh : dg_max * dh;
  } else {
    out.epsilon = -std::numeric_limits<double>::infinity();
    out.delta = std::numeric_limits<double>::infinity();
    for (double th : uniform_grid(bx.theta_low, bx.theta_up, sc.grid_n)) {
      const double lo = sc.tariff.partials(th, s_prev).f_theta;
      const double hi = sc.tariff.partials(th, s_cur).f_theta;
      out.epsilon = std::max(out.epsilon, lo);
      out.delta = std::min(out.delta, hi - lo);
    }
  }
  if (!(out.delta > 0.0)) {
    throw DegenerateSensitivityError(
        "delta_" + std::to_string(j + 1) + " = " + num(out.delta) +
        " is not positive; the tariff's mixed partial is not positive");
  }
  return out;
}

std::vector<double> step_sizes(const ProfileScenario& sc) {
  const auto& m = sc.margins.m;
  std::vector<double> steps(sc.size());
  steps[0] = m[0];
  for (std::size_t j = 1; j < sc.size(); ++j) {
    const SensitivityBounds sb = sensitivity_bounds(sc, j);
    steps[j] = (m[j] + m[j - 1]) * (1.0 + 2.0 * sb.epsilon / sb.delta) +
               sc.margins.gap_at(j - 1) / sb.delta;
  }
  return steps;
}

ConditionReport check_achievability(const ProfileScenario& sc) {
  sc.validate();
  const DomainBox& bx = sc.box();
  ConditionReport r = check_marginal_budget(sc.tariff, sc.cost, bx,
                                            std::max<std::size_t>(sc.grid_n, 16));

  {
    const double s1 = sc.qualities.front();
    const double have = sc.tariff.value(bx.theta_low, s1);
    const double need = sc.cost.value(s1) + sc.margins.b.front();
    ConditionCheck c{"entry", false, have - need, {bx.theta_low, s1}, ""};
    c.passed = c.margin >= 0.0;
    if (!c.passed) c.detail = "F(theta_low, s_1) < C(s_1) + b_1";
    r.checks.push_back(std::move(c));
  }
  {
    ConditionCheck c{"demand_range", false, 0.0, {}, ""};
    try {
      const auto steps = step_sizes(sc);
      const double used =
          std::accumulate(steps.begin(), steps.end(), 0.0) + sc.margins.m.back();
      const double range = bx.theta_up - bx.theta_low;
      c.margin = range - used;
      c.witness = {used, range};
      c.passed = c.margin > 0.0;
      if (!c.passed) c.detail = "sum of step sizes + m_L >= theta_up - theta_low";
    } catch (const DegenerateSensitivityError& e) {
      c.margin = -std::numeric_limits<double>::infinity();
      c.detail = e.what();
    }
    r.checks.push_back(std::move(c));
  }
  return r;
}

PriceWindow price_window(const ProfileScenario& sc, std::size_t j,
                         double theta_prev, double price_prev, double theta_j) {
  if (j == 0 || j >= sc.size()) {
    throw std::out_of_range("price window index must satisfy 1 <= j < L");
  }
  const auto& F = sc.tariff;
  const double s_prev = sc.qualities[j - 1];
  const double s_cur = sc.qualities[j];
  const double m_prev = sc.margins.m[j - 1];
  const double m_cur = sc.margins.m[j];

  PriceWindow w;
  w.lo = price_prev + F(theta_prev + m_prev, s_cur) -
         F(theta_prev - m_prev, s_prev) + sc.margins.gap_at(j - 1);
  w.hi = price_prev + F(theta_j - m_cur, s_cur) - F(theta_j + m_cur, s_prev);
  if (w.lo > w.hi + kWindowSlack) {
    throw EmptyPriceWindowError("price window for quality " +
                                std::to_string(j + 1) + " is empty: A=" +
                                num(w.lo) + " > B=" + num(w.hi));
  }
  return w;
}

DemandPriceProfile build_profile(const ProfileScenario& sc,
                                 std::size_t probes_per_band) {
  const ConditionReport report = check_achievability(sc);
  if (const ConditionCheck* bad = report.first_failure()) {
    throw NotAchievableError("condition " + bad->id + " fails (margin " +
                             num(bad->margin) + ")" +
                             (bad->detail.empty() ? "" : ": " + bad->detail));
  }

  const DomainBox& bx = sc.box();
  const auto& q = sc.qualities;
  const auto& m = sc.margins.m;
  const double lambda = sc.price_lambda;

  DemandPriceProfile profile;
  profile.steps = step_sizes(sc);
  profile.entries.reserve(sc.size());

  {
    const PriceWindow w{sc.cost(q[0]) + sc.margins.b[0],
                        sc.tariff(bx.theta_low, q[0])};
    profile.entries.push_back(
        {bx.theta_low + m[0], w.lo + lambda * (w.hi - w.lo), w});
  }
  for (std::size_t j = 1; j < sc.size(); ++j) {
    const ProfileEntry& prev = profile.entries.back();
    const double theta = prev.theta + profile.steps[j];
    const PriceWindow w = price_window(sc, j, prev.theta, prev.price, theta);
    profile.entries.push_back(
        {theta, w.lo + lambda * std::max(0.0, w.hi - w.lo), w});
  }

  const double top = profile.entries.back().theta + m.back();
  if (top > bx.theta_up + 1e-12 * std::max(1.0, bx.theta_up)) {
    throw NotAchievableError("condition demand_range fails: theta_L + m_L = " +
                             num(top) + " exceeds theta_up");
  }

  const VerificationReport cert = verify_profile(profile, sc, probes_per_band);
  if (!cert.passed) {
    throw CertificationError("profile failed certification: " +
                             describe(cert.violations.front()));
  }
  return profile;
}

}  // namespace tprice
